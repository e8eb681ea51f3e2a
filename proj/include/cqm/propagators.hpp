#pragma once

#include <complex>
#include <vector>

#include "cqm/core_model.hpp"
#include "cqm/specfun.hpp"

namespace cqm {

using Complex = std::complex<double>;

// RealTime: K(r'', r'; T) of e^{-iHT/hbar}. Euclidean: K(T -> -iT).
enum class Schedule { RealTime, Euclidean };

// Radial propagator query. Mass, hbar and mu come from params; the oscillator
// frequency and class from the analog.
struct PropagatorQuery {
    double r_in = 1.0;   // r'
    double r_out = 1.0;  // r''
    double time = 1.0;
    PhysicalParams params;
    AnalogOscillator analog;
    Schedule schedule = Schedule::Euclidean;
};

Complex propagator_elliptic(const PropagatorQuery& q, const specfun::PrecisionPolicy& pol = {});
Complex propagator_parabolic(const PropagatorQuery& q, const specfun::PrecisionPolicy& pol = {});
Complex propagator_hyperbolic(const PropagatorQuery& q, const specfun::PrecisionPolicy& pol = {});
Complex propagator(const PropagatorQuery& q, const specfun::PrecisionPolicy& pol = {});

// Kernels at complex time, used by the transform contours. omega = 0 gives the
// free (parabolic) kernel. The elliptic form is K(T) with ω real; the
// hyperbolic form is the same expression with sinh/coth.
Complex kernel_complex_time(GeneratorClassTag tag, double mass, double hbar, double mu, double omega,
                            double r_in, double r_out, Complex T, const specfun::PrecisionPolicy& pol = {});

struct PartialWaveResult {
    Complex value;
    double last_term = 0.0;  // modulus of the l = l_max contribution
    int terms = 0;
};

// Full d-dimensional kernel from radial kernels of index mu_l, l = 0..l_max.
// x_in/x_out are Cartesian points of dimension params.dim (>= 2).
PartialWaveResult partial_wave_sum(const std::vector<double>& x_in, const std::vector<double>& x_out, double time,
                                   const PhysicalParams& params, const AnalogOscillator& analog, Schedule schedule,
                                   int l_max, const specfun::PrecisionPolicy& pol = {});

}  // namespace cqm
