#include "cqm/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cqm/errors.hpp"

namespace cqm {

using specfun::bessel_i_scaled;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};
constexpr double kCausticTol = 1e-8;

struct Common {
    double M, hbar, mu, omega, rp, rpp;
};

Common common(const PropagatorQuery& q) {
    q.params.validate();
    if (!(q.r_in > 0.0) || !(q.r_out > 0.0)) throw DomainError("propagator: radii must be positive");
    if (q.time == 0.0) throw ZeroTimeError("propagator: T = 0 (the kernel is a delta function)");
    if (q.schedule == Schedule::Euclidean && q.time < 0.0)
        throw DomainError("propagator: Euclidean time must be positive");
    return {q.params.mass, q.params.hbar, conformal_index(q.params), q.analog.omega_mag, q.r_in, q.r_out};
}

void require_class(const PropagatorQuery& q, GeneratorClassTag tag) {
    if (q.analog.class_tag != tag)
        throw ClassMismatchError("propagator: analog is " + to_string(q.analog.class_tag) + ", expected " +
                                 to_string(tag));
}

// pref * sqrt(r'r'') * exp(expo) * I_mu(z), with I_mu evaluated scaled.
Complex assemble(Complex pref, double rp, double rpp, Complex expo, double mu, Complex z,
                 const specfun::PrecisionPolicy& pol) {
    const Complex is = bessel_i_scaled(mu, z, pol);
    return pref * std::sqrt(rp * rpp) * std::exp(expo + std::abs(z.real())) * is;
}

double assemble_real(double pref, double rp, double rpp, double expo, double mu, double z,
                     const specfun::PrecisionPolicy& pol) {
    return pref * std::sqrt(rp * rpp) * std::exp(expo + z) * bessel_i_scaled(mu, z, pol);
}

// real-time kernels share the shape (A/i) sqrt(r'r'') exp(i B (r'^2+r''^2)) I_mu(A r'r''/i)
Complex real_time_form(double A, double B, const Common& c, const specfun::PrecisionPolicy& pol) {
    const Complex z(0.0, -A * (c.rp * c.rpp));
    const Complex expo(0.0, B * (c.rp * c.rp + c.rpp * c.rpp));
    return assemble(-kI * A, c.rp, c.rpp, expo, c.mu, z, pol);
}

}  // namespace

Complex propagator_elliptic(const PropagatorQuery& q, const specfun::PrecisionPolicy& pol) {
    require_class(q, GeneratorClassTag::Elliptic);
    const Common c = common(q);
    const double wt = c.omega * q.time;
    if (q.schedule == Schedule::RealTime) {
        const double s = std::sin(wt);
        if (std::abs(s) < kCausticTol) throw CausticError("propagator_elliptic: |sin(omega T)| < 1e-8");
        const double A = c.M * c.omega / (c.hbar * s);
        const double B = c.M * c.omega * (std::cos(wt) / s) / (2.0 * c.hbar);
        return real_time_form(A, B, c, pol);
    }
    const double A = c.M * c.omega / (c.hbar * std::sinh(wt));
    const double z = A * (c.rp * c.rpp);
    const double expo = -c.M * c.omega * (c.rp * c.rp + c.rpp * c.rpp) / (2.0 * c.hbar * std::tanh(wt));
    return assemble_real(A, c.rp, c.rpp, expo, c.mu, z, pol);
}

Complex propagator_parabolic(const PropagatorQuery& q, const specfun::PrecisionPolicy& pol) {
    require_class(q, GeneratorClassTag::Parabolic);
    const Common c = common(q);
    const double A = c.M / (c.hbar * q.time);
    if (q.schedule == Schedule::RealTime) return real_time_form(A, 0.5 * A, c, pol);
    const double z = A * (c.rp * c.rpp);
    const double expo = -0.5 * A * (c.rp * c.rp + c.rpp * c.rpp);
    return assemble_real(A, c.rp, c.rpp, expo, c.mu, z, pol);
}

Complex propagator_hyperbolic(const PropagatorQuery& q, const specfun::PrecisionPolicy& pol) {
    require_class(q, GeneratorClassTag::Hyperbolic);
    const Common c = common(q);
    const double wt = c.omega * q.time;
    if (q.schedule == Schedule::RealTime) {
        const double s = std::sinh(wt);
        const double A = c.M * c.omega / (c.hbar * s);
        const double B = c.M * c.omega / (std::tanh(wt) * 2.0 * c.hbar);
        return real_time_form(A, B, c, pol);
    }
    // T -> -iT turns sinh/coth into sin/cot; the kernel is finite for omega T < pi
    const double s = std::sin(wt);
    if (wt >= kPi || s < kCausticTol)
        throw CausticError("propagator_hyperbolic: Euclidean kernel needs 0 < omega T < pi");
    const double A = c.M * c.omega / (c.hbar * s);
    const double z = A * (c.rp * c.rpp);
    const double expo = -c.M * c.omega * (c.rp * c.rp + c.rpp * c.rpp) * (std::cos(wt) / s) / (2.0 * c.hbar);
    return assemble_real(A, c.rp, c.rpp, expo, c.mu, z, pol);
}

Complex propagator(const PropagatorQuery& q, const specfun::PrecisionPolicy& pol) {
    switch (q.analog.class_tag) {
        case GeneratorClassTag::Elliptic: return propagator_elliptic(q, pol);
        case GeneratorClassTag::Parabolic: return propagator_parabolic(q, pol);
        case GeneratorClassTag::Hyperbolic: return propagator_hyperbolic(q, pol);
    }
    throw ClassMismatchError("propagator: unknown class");
}

Complex kernel_complex_time(GeneratorClassTag tag, double mass, double hbar, double mu, double omega, double r_in,
                            double r_out, Complex T, const specfun::PrecisionPolicy& pol) {
    if (T == Complex(0.0, 0.0)) throw ZeroTimeError("kernel_complex_time: T = 0");
    Complex s, ct;  // "sin(omega T)/omega" and "omega cot(omega T)"
    switch (tag) {
        case GeneratorClassTag::Parabolic:
            s = T;
            ct = 1.0 / T;
            break;
        case GeneratorClassTag::Elliptic:
            s = std::sin(omega * T) / omega;
            ct = omega / std::tan(omega * T);
            break;
        case GeneratorClassTag::Hyperbolic:
            s = std::sinh(omega * T) / omega;
            ct = omega / std::tanh(omega * T);
            break;
    }
    const Complex A = mass / (kI * hbar * s);
    const Complex z = A * (r_in * r_out);
    const Complex expo = kI * mass * ct * (r_in * r_in + r_out * r_out) / (2.0 * hbar);
    return assemble(A, r_in, r_out, expo, mu, z, pol);
}

PartialWaveResult partial_wave_sum(const std::vector<double>& x_in, const std::vector<double>& x_out, double time,
                                   const PhysicalParams& params, const AnalogOscillator& analog, Schedule schedule,
                                   int l_max, const specfun::PrecisionPolicy& pol) {
    params.validate();
    const int d = params.dim;
    if (d < 2) throw DomainError("partial_wave_sum: dimension must be at least 2");
    if (static_cast<int>(x_in.size()) != d || static_cast<int>(x_out.size()) != d)
        throw DomainError("partial_wave_sum: point dimension does not match params.dim");
    if (l_max < 0) throw DomainError("partial_wave_sum: l_max must be nonnegative");
    double rp2 = 0.0, rpp2 = 0.0, dot = 0.0;
    for (int i = 0; i < d; ++i) {
        rp2 += x_in[i] * x_in[i];
        rpp2 += x_out[i] * x_out[i];
        dot += x_in[i] * x_out[i];
    }
    const double rp = std::sqrt(rp2), rpp = std::sqrt(rpp2);
    if (rp == 0.0 || rpp == 0.0) throw DomainError("partial_wave_sum: points must avoid the origin");
    const double cpsi = std::clamp(dot / (rp * rpp), -1.0, 1.0);
    const double nu = params.nu();

    double pref;
    if (d == 2)
        pref = 1.0 / (2.0 * kPi);
    else
        pref = std::tgamma(nu) / (2.0 * std::pow(kPi, 0.5 * d));
    pref *= std::pow(rp * rpp, -0.5 * (d - 1));

    PropagatorQuery q;
    q.r_in = rp;
    q.r_out = rpp;
    q.time = time;
    q.analog = analog;
    q.schedule = schedule;
    PartialWaveResult out;
    Complex sum = 0.0;
    const double psi = std::acos(cpsi);
    for (int l = 0; l <= l_max; ++l) {
        q.params = params;
        q.params.ell = l;
        double coef;
        if (d == 2)
            coef = (l == 0) ? 1.0 : 2.0 * std::cos(l * psi);  // nu -> 0 limit of Gamma(nu)(l+nu)C_l^nu
        else
            coef = (l + nu) * specfun::gegenbauer(l, nu, cpsi);
        const Complex term = coef * propagator(q, pol);
        sum += term;
        out.last_term = std::abs(pref * term);
        out.terms = l + 1;
    }
    out.value = pref * sum;
    return out;
}

}  // namespace cqm
