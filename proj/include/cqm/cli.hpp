#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cqm/core_model.hpp"
#include "cqm/oracle.hpp"
#include "cqm/propagators.hpp"
#include "cqm/spectra.hpp"
#include "cqm/transforms.hpp"

namespace cqm::cli {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kCsvLayoutVersion = 1;

enum ExitCode { kOk = 0, kCheckFailure = 1, kConfigError = 2, kNonConvergence = 3 };

// Range values: a number, an array of numbers, or {start, stop, num}.
std::vector<double> parse_range(const json& j, const std::string& path);

struct PropagatorBlock {
    std::vector<double> r_in{1.0}, r_out{1.0}, time{1.0};
    Schedule schedule = Schedule::Euclidean;
};

struct SpectrumBlock {
    int n_max = 5;
    std::vector<double> energies;  // continuum labels (parabolic/hyperbolic)
};

struct EigfnBlock {
    std::vector<int> levels{0};
    std::vector<double> energies{1.0};
    std::vector<double> r{1.0};
};

struct GreenBlock {
    std::vector<double> energies{1.0}, r_in{0.8}, r_out{1.1};
    std::vector<GreenKind> kinds{GreenKind::Retarded, GreenKind::Advanced};
};

enum class FourierMode { Whole, Retarded, Advanced };

struct FourierBlock {
    std::vector<double> energies{1.0}, r_in{1.0}, r_out{1.0};
    FourierMode mode = FourierMode::Whole;
    QuadratureSpec quadrature;
};

struct VerifyBlock {
    std::vector<IdentityId> identities;  // empty: full catalog
    std::map<IdentityId, IdentitySample> samples;
    QuadratureSpec quadrature;
};

struct OracleSpectrum {
    double h = 5e-4;
    double r_max = 25.0;
    int n_eigen = 6;
    double tolerance = 1e-3;
};

struct OracleGreen {
    double energy = 1.0;
    double epsilon = 1e-3;
    double h = 1e-3;
    double r_max = 20.0;
    double r_source = 0.7;
    std::vector<double> r_probe{0.3, 0.7, 1.2, 2.0, 4.0, 8.0};
    double tolerance = 0.02;
};

struct OracleTimesliced {
    double r_in = 1.0, r_out = 1.0, time = 1.0;
    std::vector<int> slices{16, 32, 64, 128};
    double order_tolerance = 0.2;  // |fitted order - 1|
};

struct OracleCommutator {
    double h = 1e-3;
    double tolerance = 1e-3;
};

struct OracleBlock {
    std::optional<OracleSpectrum> spectrum;
    std::optional<OracleGreen> green;
    std::optional<OracleTimesliced> timesliced;
    std::optional<OracleCommutator> commutator;
};

struct RunConfig {
    PhysicalParams params;
    GeneratorSpec generator;
    double t_ref = 0.0;
    std::string output_dir = "out";
    std::set<std::string> formats{"csv", "json"};
    std::optional<PropagatorBlock> propagator;
    std::optional<SpectrumBlock> spectrum;
    std::optional<EigfnBlock> eigfn;
    std::optional<GreenBlock> green;
    std::optional<FourierBlock> fourier;
    std::optional<VerifyBlock> verify;
    std::optional<OracleBlock> oracle;
};

// Throws ConfigError naming the offending key path.
RunConfig parse_config(const json& j);
RunConfig load_config(const std::string& path);
// Canonical form; parse_config(to_json(c)) reproduces c.
json to_json(const RunConfig& c);

using Cell = std::variant<std::string, double, long long, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct CommandResult {
    Table table;
    json summary = json::object();  // printed to stdout and stored alongside the table
    int exit_code = kOk;
};

const std::vector<std::string>& command_names();

// Runs one command. subset (comma-separated identity names) applies to verify.
CommandResult run_command(const std::string& command, const RunConfig& cfg,
                          const std::optional<std::string>& subset = std::nullopt);

std::string sha256_hex(const std::string& bytes);
std::string to_csv(const Table& t);
json to_json(const Table& t);

// Writes <dir>/<command>.csv / .json and manifest.json; returns the manifest.
json write_outputs(const std::string& dir, const std::string& command, const RunConfig& cfg,
                   const CommandResult& res);

int main_entry(int argc, char** argv);

}  // namespace cqm::cli
