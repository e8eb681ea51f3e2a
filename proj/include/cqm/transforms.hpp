#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cqm/core_model.hpp"
#include "cqm/spectra.hpp"

namespace cqm {

using Complex = std::complex<double>;

struct QuadratureSpec {
    // Truncation of T (parabolic, 0 = 40 hbar / eps_min) or of |Re zeta| (hyperbolic).
    double t_max = 0.0;
    // Panels on the truncated range; 0 = panel width pi hbar / max(E, hbar omega, 1).
    int n_panels = 0;
    std::vector<double> damping_eps{0.04, 0.02, 0.01};
    double contour_offset = -0.7853981633974483;  // -pi/4
    int gl_nodes = 64;
    // Extrapolated values whose residual exceeds max(rel * |value|, abs) are
    // reported as non-converged.
    double residual_rel = 1e-2;
    double residual_abs = 1e-3;

    void validate() const;
};

struct TransformResult {
    Complex value;
    double residual = 0.0;           // |3-point - 2-point| extrapolation difference
    std::vector<Complex> ladder;     // damped values, one per eps (empty for undamped paths)
};

// F(E; r'', r') = (1/2 pi hbar) int dT e^{iET/hbar} K(T)
TransformResult fourier_invert(GeneratorClassTag tag, const PhysicalParams& params, const AnalogOscillator& analog,
                               double E, double r_in, double r_out, const QuadratureSpec& q = {});

// G^{+-}(E) = +-(1/i hbar) int theta(+-T) e^{iET/hbar} K(T) dT
TransformResult half_line_transform(GeneratorClassTag tag, const PhysicalParams& params,
                                    const AnalogOscillator& analog, double E, double r_in, double r_out,
                                    GreenKind kind, const QuadratureSpec& q = {});

// Folding check: max |K(-T) - conj K(T)| / |K(T)| over the given real times.
double hermiticity_defect(GeneratorClassTag tag, const PhysicalParams& params, const AnalogOscillator& analog,
                          double r_in, double r_out, const std::vector<double>& times);

enum class IdentityId {
    HILLE_HARDY,
    MEHLER_HEINE,
    WEBER,
    BESSEL_PRODUCT_LINE,
    BESSEL_HANKEL_HALFLINE,
    WHITTAKER_DOUBLE,
    WHITTAKER_REAL_LINE,
    WHITTAKER_CONTOUR,
    WHITTAKER_HALFLINE,
    SEMICIRCUITAL,
    CONNECTION,
    WRONSKIAN,
    HANKEL_SUM,
};

const std::vector<IdentityId>& all_identities();
std::string to_string(IdentityId id);
std::optional<IdentityId> identity_from_string(const std::string& s);

using IdentitySample = std::map<std::string, double>;

// Default sample point; verify_identity accepts overrides of these keys only.
IdentitySample default_sample(IdentityId id);

enum class ToleranceKind { Relative, Absolute };

struct CheckReport {
    IdentityId identity_id = IdentityId::HILLE_HARDY;
    Complex lhs;
    Complex rhs;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tolerance = 0.0;
    ToleranceKind tolerance_kind = ToleranceKind::Relative;
    IdentitySample sample;
    QuadratureSpec spec;
    int series_terms = 0;
    bool passed = false;
};

CheckReport verify_identity(IdentityId id, const IdentitySample& overrides = {}, const QuadratureSpec& q = {});

}  // namespace cqm
