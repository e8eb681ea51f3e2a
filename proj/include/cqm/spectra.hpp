#pragma once

#include <complex>
#include <vector>

#include "cqm/core_model.hpp"
#include "cqm/specfun.hpp"

namespace cqm {

using Complex = std::complex<double>;

struct EigenData {
    GeneratorClassTag class_tag = GeneratorClassTag::Elliptic;
    bool discrete = true;
    int n = 0;            // discrete label
    double E_label = 0.0; // continuum label (analog energy)
    double r_n = 0.0;     // (1+mu)/2 + n, elliptic only
    double e_tilde = 0.0; // analog energy
    double energy = 0.0;  // E_G = sigma * scale * e_tilde
    double g_eigen = 0.0; // energy / hbar
    double kappa = 0.0;   // hyperbolic only
};

enum class GreenKind { Retarded, Advanced };

struct GreenValue {
    GreenKind kind = GreenKind::Retarded;
    Complex value;
};

std::vector<EigenData> elliptic_levels(const AnalogOscillator& a, int n_max);
EigenData continuum_label(const AnalogOscillator& a, double E);

double elliptic_eigenfunction(const AnalogOscillator& a, int n, double r);
// sqrt(M/hbar^2) sqrt(r) J_mu(k r), Dirac-normalized in E
double parabolic_eigenfunction(const AnalogOscillator& a, double E, double r);
// phase fixed so that the Gamma prefactor carries no extra factor
Complex hyperbolic_eigenfunction(const AnalogOscillator& a, double E, double r,
                                 const specfun::PrecisionPolicy& pol = {});

GreenValue green_parabolic(const AnalogOscillator& a, double E, double r_in, double r_out, GreenKind kind);
GreenValue green_hyperbolic(const AnalogOscillator& a, double E, double r_in, double r_out, GreenKind kind,
                            const specfun::PrecisionPolicy& pol = {});
// continuation kappa -> real: the oscillator resolvent, real for real E off the levels
double green_elliptic(const AnalogOscillator& a, double E, double r_in, double r_out,
                      const specfun::PrecisionPolicy& pol = {});

// F(E; r'', r') = U_E(r'') conj(U_E(r')) written with the Gamma product
// e^{pi kappa} Gamma_+ Gamma_- and regularized Whittaker functions.
Complex hyperbolic_product(const AnalogOscillator& a, double E, double r_out, double r_in,
                           const specfun::PrecisionPolicy& pol = {});
double parabolic_product(const AnalogOscillator& a, double E, double r_out, double r_in);

struct SeriesResult {
    Complex value;
    double last_term = 0.0;
};
SeriesResult spectral_series_elliptic(const AnalogOscillator& a, double r_in, double r_out, double T_euclid,
                                      int n_terms);

}  // namespace cqm
