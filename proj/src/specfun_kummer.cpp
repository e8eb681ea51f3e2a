#include <cmath>
#include <numbers>

#include "cqm/errors.hpp"
#include "cqm/quadrature.hpp"
#include "cqm/specfun.hpp"

namespace cqm::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

Complex m_series(Complex a, Complex b, Complex z, const PrecisionPolicy& pol) {
    Complex term = 1.0, sum = 1.0;
    const double az = std::abs(z);
    for (int k = 0; k < pol.max_terms; ++k) {
        term *= (a + double(k)) / (b + double(k)) * z / double(k + 1);
        sum += term;
        if (term == Complex(0.0, 0.0)) return sum;
        if (k > az && std::abs(term) <= pol.series_tol * std::abs(sum)) return sum;
    }
    throw NonConvergence("kummer_m: series exceeded max_terms");
}

// z^{-a} sum (a)_k (a-b+1)_k / k! (-z)^{-k}; returns false if the series
// starts to diverge before reaching the tolerance.
bool u_asymptotic(Complex a, Complex b, Complex z, const PrecisionPolicy& pol, Complex& out) {
    Complex term = 1.0, sum = 1.0;
    double last = 1.0;
    for (int k = 0; k < pol.max_terms; ++k) {
        term *= (a + double(k)) * (a - b + double(k + 1)) / double(k + 1) / (-z);
        const double mag = std::abs(term);
        if (mag > last && mag > pol.series_tol * std::abs(sum)) return false;
        last = mag;
        sum += term;
        if (mag <= pol.series_tol * std::abs(sum)) {
            out = principal_pow(z, -a) * sum;
            return true;
        }
    }
    return false;
}

// U(a,b,z) = 1/Gamma(a) int_0^inf e^{-zt} t^{a-1} (1+t)^{b-a-1} dt, Re a > 0,
// taken along the ray arg t = phi with Re(z e^{i phi}) > 0.
Complex u_integral(Complex a, Complex b, Complex z) {
    const double ph = principal_arg(z);
    double phi = -ph;
    if (phi > 0.75 * kPi) phi = 0.75 * kPi;
    if (phi < -0.75 * kPi) phi = -0.75 * kPi;
    const Complex rot = std::exp(kI * phi);
    const Complex zeta = z * rot;
    const Complex am1 = a - 1.0, c = b - a - 1.0;
    auto f = [&](double s) -> Complex {
        const Complex e = -zeta * s + am1 * std::log(s) + c * std::log(1.0 + s * rot);
        if (e.real() < -745.0) return 0.0;
        return std::exp(e);
    };
    const double scale = std::abs(zeta) > 1.0 ? 1.0 / std::abs(zeta) : 1.0;
    const Complex integral = quad::integrate_half_line_de(f, scale, 1e-15);
    return std::exp(kI * phi * a) * rgamma(a) * integral;
}

Complex u_positive_a(Complex a, Complex b, Complex z, const PrecisionPolicy& pol) {
    Complex out;
    if (std::abs(z) >= pol.kummer_asymptotic_switch && u_asymptotic(a, b, z, pol, out)) return out;
    return u_integral(a, b, z);
}

Complex pochhammer(Complex a, int n) {
    Complex p = 1.0;
    for (int k = 0; k < n; ++k) p *= a + double(k);
    return p;
}

// DLMF 13.2.41 with the sign chosen so that e^{+-i pi} z stays on the principal sheet.
Complex m_connection(Complex a, Complex b, Complex z, const PrecisionPolicy& pol) {
    const bool lower_half = z.imag() < 0.0 || (z.imag() == 0.0 && (std::signbit(z.imag()) || z.real() > 0.0));
    const int s = lower_half ? 1 : -1;
    const Complex zr = rotate_half_turn(z, s);
    const Complex t1 = std::exp(-double(s) * kPi * kI * a) * rgamma(b - a) * tricomi_u(a, b, z, pol);
    const Complex t2 =
        std::exp(double(s) * kPi * kI * (b - a)) * rgamma(a) * std::exp(z) * tricomi_u(b - a, b, zr, pol);
    return gamma(b) * (t1 + t2);
}

}  // namespace

Complex kummer_m(Complex a, Complex b, Complex z, const PrecisionPolicy& pol) {
    if (is_nonpositive_integer(b)) throw PoleError("kummer_m: b is a nonpositive integer");
    if (z == Complex(0.0, 0.0)) return 1.0;
    if (is_nonpositive_integer(a)) return m_series(a, b, z, pol);
    Complex aa = a, zz = z, pre = 1.0;
    if (z.real() < 0.0) {
        pre = std::exp(z);
        aa = b - a;
        zz = -z;
    }
    const double loss = std::abs(zz) - zz.real();
    if (std::abs(zz) <= pol.kummer_series_radius || loss <= pol.kummer_series_radius)
        return pre * m_series(aa, b, zz, pol);
    return m_connection(a, b, z, pol);
}

Complex kummer_m_reg(Complex a, Complex b, Complex z, const PrecisionPolicy& pol) {
    if (is_nonpositive_integer(b)) {
        const int n = static_cast<int>(-b.real());
        Complex f = 1.0;
        for (int k = 1; k <= n + 1; ++k) f *= z / double(k);
        return pochhammer(a, n + 1) * f * kummer_m(a + double(n + 1), double(n + 2), z, pol);
    }
    return kummer_m(a, b, z, pol) * rgamma(b);
}

Complex tricomi_u(Complex a, Complex b, Complex z, const PrecisionPolicy& pol) {
    if (z == Complex(0.0, 0.0)) throw DomainError("tricomi_u: z = 0");
    if (is_nonpositive_integer(a)) {
        const int n = static_cast<int>(-a.real());
        const double sgn = (n % 2) ? -1.0 : 1.0;
        return sgn * pochhammer(b, n) * m_series(a, b, z, pol);
    }
    // the integrand t^{a-1} is too singular for the quadrature when Re a is small
    if (a.real() >= 1.0) return u_positive_a(a, b, z, pol);
    // recur downward in a from a region where the integral converges
    const int n = static_cast<int>(std::ceil(1.0 - a.real()));
    Complex up1 = u_positive_a(a + double(n + 1), b, z, pol);
    Complex u0 = u_positive_a(a + double(n), b, z, pol);
    for (int k = n; k >= 1; --k) {
        const Complex ak = a + double(k);
        const Complex um1 = -(b - 2.0 * ak - z) * u0 - ak * (ak - b + 1.0) * up1;
        up1 = u0;
        u0 = um1;
    }
    return u0;
}

Complex whittaker_m(Complex kappa, Complex half_mu, Complex z, const PrecisionPolicy& pol) {
    const Complex a = 0.5 + half_mu - kappa, b = 1.0 + 2.0 * half_mu;
    return std::exp(-0.5 * z) * principal_pow(z, half_mu + 0.5) * kummer_m(a, b, z, pol);
}

Complex whittaker_m_reg(Complex kappa, Complex half_mu, Complex z, const PrecisionPolicy& pol) {
    const Complex a = 0.5 + half_mu - kappa, b = 1.0 + 2.0 * half_mu;
    return std::exp(-0.5 * z) * principal_pow(z, half_mu + 0.5) * kummer_m_reg(a, b, z, pol);
}

Complex whittaker_w(Complex kappa, Complex half_mu, Complex z, const PrecisionPolicy& pol) {
    const Complex a = 0.5 + half_mu - kappa, b = 1.0 + 2.0 * half_mu;
    return std::exp(-0.5 * z) * principal_pow(z, half_mu + 0.5) * tricomi_u(a, b, z, pol);
}

}  // namespace cqm::specfun
