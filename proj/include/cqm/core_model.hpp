#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cqm {

enum class GeneratorClassTag { Elliptic, Parabolic, Hyperbolic };

std::string to_string(GeneratorClassTag tag);

// Mass, action scale, coupling g, dimension d and angular momentum l.
struct PhysicalParams {
    double mass = 1.0;
    double hbar = 1.0;
    double coupling = 0.0;
    int dim = 3;
    int ell = 0;

    // nu = d/2 - 1; d/2 is exact in binary floating point
    double nu() const { return 0.5 * dim - 1.0; }
    double mu() const;
    void validate() const;
};

// G = uH + vD + wK
struct GeneratorSpec {
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;

    void validate() const;
    double f(double t) const { return u + v * t + w * t * t; }
    double fdot(double t) const { return v + 2.0 * w * t; }
    double discriminant() const { return v * v - 4.0 * u * w; }
};

struct GeneratorClass {
    double discriminant = 0.0;
    GeneratorClassTag class_tag = GeneratorClassTag::Parabolic;
    double omega_mag = 0.0;  // sqrt(|Delta|)/2
    int sigma = 0;
    // set when f_G(t_ref) = 0; spectral code then falls back on the class
    // equivalences K ~ H and D ~ S' instead of sigma
    bool sigma_flagged = false;
};

struct TimeMap {
    GeneratorClassTag class_tag = GeneratorClassTag::Parabolic;
    std::vector<double> roots;
    double branch_lo = 0.0;  // may be -inf
    double branch_hi = 0.0;  // may be +inf
};

// Parameters of the analog Hamiltonian picked out by the reduction. For
// elliptic/hyperbolic generators the oscillator is normalized to omega = 1/2 and
// G = sigma * scale * (R or S').
struct AnalogOscillator {
    double mass = 1.0;
    double hbar = 1.0;
    double coupling = 0.0;
    double mu = 0.5;
    double omega_mag = 0.0;
    GeneratorClassTag class_tag = GeneratorClassTag::Parabolic;
    int sigma = 1;
    bool sigma_flagged = false;
    double scale = 1.0;

    // +1/-1 orientation used by spectral maps; the class equivalences apply
    // when sigma is flagged
    int spectral_sign() const { return sigma == 0 ? 1 : sigma; }
};

GeneratorClass classify(const GeneratorSpec& spec, double t_ref = 0.0);
double conformal_index(const PhysicalParams& p);
TimeMap time_map(const GeneratorSpec& spec, double t_ref = 0.0);
double effective_time(const GeneratorSpec& spec, double t);

struct CanonicalResult {
    std::vector<double> q;
    std::vector<double> mom;
    double tau = 0.0;
};
CanonicalResult canonical_transform(const GeneratorSpec& spec, const std::vector<double>& Q,
                                    const std::vector<double>& P, double t, const PhysicalParams& p);

struct DimensionalParams {
    double a = 0.0;
    double omega_hat = 0.0;
};
DimensionalParams dimensional_params(const GeneratorSpec& spec);

AnalogOscillator reduce_to_analog(const GeneratorSpec& spec, const PhysicalParams& p, double t_ref = 0.0);

// Direct construction at a given oscillator frequency (scale 1, sigma +1).
AnalogOscillator make_analog(GeneratorClassTag tag, const PhysicalParams& p, double omega_mag);

// Named generator if (u,v,w) is one of H, K, D, R, S, S' up to a positive factor.
std::optional<std::string> canonical_name(const GeneratorSpec& spec);
// Equivalent operator in the reduced picture, e.g. "sigma*sqrt|Delta|*R".
std::string equivalent_operator(GeneratorClassTag tag);

}  // namespace cqm
