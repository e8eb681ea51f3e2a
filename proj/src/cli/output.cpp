#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cqm/cli.hpp"
#include "cqm/errors.hpp"

namespace cqm::cli {

namespace fs = std::filesystem;

namespace {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>)
                return v;
            else if constexpr (std::is_same_v<T, double>)
                return format_double(v);
            else if constexpr (std::is_same_v<T, bool>)
                return v ? "true" : "false";
            else
                return std::to_string(v);
        },
        c);
}

json cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
                return std::isfinite(v) ? json(v) : json(nullptr);
            else
                return json(v);
        },
        c);
}

std::string timestamp() {
    std::time_t t;
    if (const char* s = std::getenv("SOURCE_DATE_EPOCH"); s && *s)
        t = static_cast<std::time_t>(std::strtoll(s, nullptr, 10));
    else
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + p.string() + "'");
    out << bytes;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_field(t.columns[i]);
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(cell_text(row[i]));
        out += "\n";
    }
    return out;
}

json to_json(const Table& t) {
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::object();
        for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) r[t.columns[i]] = cell_json(row[i]);
        rows.push_back(r);
    }
    return rows;
}

json write_outputs(const std::string& dir, const std::string& command, const RunConfig& cfg, const CommandResult& res) {
    fs::create_directories(dir);
    json outputs = json::object();
    if (cfg.formats.count("csv")) {
        const std::string bytes = to_csv(res.table);
        write_file(fs::path(dir) / (command + ".csv"), bytes);
        outputs[command + ".csv"] = sha256_hex(bytes);
    }
    if (cfg.formats.count("json")) {
        json doc = {{"command", command}, {"columns", res.table.columns}, {"rows", to_json(res.table)}, {"summary", res.summary}};
        const std::string bytes = doc.dump(2) + "\n";
        write_file(fs::path(dir) / (command + ".json"), bytes);
        outputs[command + ".json"] = sha256_hex(bytes);
    }
    json m = {{"tool_version", kToolVersion},
              {"command", command},
              {"config_hash", sha256_hex(to_json(cfg).dump())},
              {"timestamp", timestamp()},
              {"csv_layout_version", kCsvLayoutVersion},
              {"columns", res.table.columns},
              {"units", {{"hbar", cfg.params.hbar}, {"mass", cfg.params.mass}}},
              {"exit_code", res.exit_code},
              {"outputs", outputs}};
    write_file(fs::path(dir) / "manifest.json", m.dump(2) + "\n");
    return m;
}

int main_entry(int argc, char** argv) {
    CLI::App app{"Conformal quantum mechanics propagators, spectra and identity checks"};
    std::string command, config_path, out_dir, subset;
    app.add_option("command", command, "classify|propagator|spectrum|eigfn|green|fourier|verify|oracle")
        ->required()
        ->check(CLI::IsMember(command_names()));
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_dir, "output directory (overrides output_dir)");
    app.add_option("--subset", subset, "comma-separated identity names for verify");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        const RunConfig cfg = load_config(config_path);
        const std::optional<std::string> sub = subset.empty() ? std::nullopt : std::optional<std::string>(subset);
        const CommandResult res = run_command(command, cfg, sub);
        write_outputs(out_dir.empty() ? cfg.output_dir : out_dir, command, cfg, res);
        if (res.summary.contains("line"))
            std::cout << res.summary["line"].get<std::string>() << "\n";
        std::cout << res.summary.dump() << "\n";
        return res.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const StrongCouplingError& e) {
        std::cerr << "config error: 'params.coupling': " << e.what() << "\n";
        return kConfigError;
    } catch (const NonConvergence& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const ConvergenceError& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCheckFailure;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
}

}  // namespace cqm::cli
