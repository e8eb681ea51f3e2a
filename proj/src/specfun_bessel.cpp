#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "cqm/errors.hpp"
#include "cqm/specfun.hpp"

namespace cqm::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

// B_{2k} / (2k (2k-1))
constexpr double kStirling[] = {1.0 / 12.0,          -1.0 / 360.0,       1.0 / 1260.0,
                                -1.0 / 1680.0,       1.0 / 1188.0,       -691.0 / 360360.0,
                                1.0 / 156.0,         -3617.0 / 122400.0, 43867.0 / 244188.0,
                                -174611.0 / 125400.0};

Complex stirling(Complex z) {
    const Complex iz = 1.0 / z, iz2 = iz * iz;
    Complex s = 0.0, p = iz;
    for (double c : kStirling) {
        s += c * p;
        p *= iz2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + s;
}

// log sin(pi z) without overflow for large |Im z|
Complex log_sin_pi(Complex z) {
    if (std::abs(z.imag()) < 20.0) return std::log(std::sin(kPi * z));
    // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i; keep the dominant exponential symbolic
    if (z.imag() > 0.0) {
        const Complex e = std::exp(2.0 * kI * kPi * z);  // tiny
        return -kI * kPi * z + std::log((e - 1.0) / (2.0 * kI));
    }
    const Complex e = std::exp(-2.0 * kI * kPi * z);
    return kI * kPi * z + std::log((1.0 - e) / (2.0 * kI));
}

}  // namespace

double principal_arg(Complex z) { return std::arg(z); }

Complex principal_log(Complex z) { return {std::log(std::abs(z)), std::arg(z)}; }

Complex principal_pow(Complex z, Complex a) {
    if (z == Complex(0.0, 0.0)) {
        if (a == Complex(0.0, 0.0)) return 1.0;
        if (a.real() > 0.0) return 0.0;
        throw DomainError("principal_pow: 0 raised to a power with nonpositive real part");
    }
    return std::exp(a * principal_log(z));
}

Complex rotate_half_turn(Complex z, int s) {
    Complex w = -z;
    if (w.imag() == 0.0) w = Complex(w.real(), s > 0 ? 0.0 : -0.0);
    return w;
}

void PrecisionPolicy::validate() const {
    if (!(series_tol >= std::numeric_limits<double>::epsilon() * 1e-2))
        throw DomainError("PrecisionPolicy: series_tol too small");
    if (max_terms < 50) throw DomainError("PrecisionPolicy: max_terms must be >= 50");
    if (!(asymptotic_switch > 0.0)) throw DomainError("PrecisionPolicy: asymptotic_switch must be positive");
}

bool is_nonpositive_integer(Complex z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

Complex log_gamma(Complex z) {
    if (is_nonpositive_integer(z)) throw PoleError("log_gamma: pole at nonpositive integer");
    if (z.real() < -40.0) {
        // reflection; imaginary part determined modulo 2 pi
        return std::log(kPi) - log_sin_pi(z) - log_gamma(1.0 - z);
    }
    Complex shift = 0.0;
    while (z.real() < 15.0) {
        shift += principal_log(z);
        z += 1.0;
    }
    return stirling(z) - shift;
}

Complex gamma(Complex z) { return std::exp(log_gamma(z)); }

Complex rgamma(Complex z) {
    if (is_nonpositive_integer(z)) return 0.0;
    return std::exp(-log_gamma(z));
}

double bessel_j(double mu, double x) {
    if (x < 0.0) throw DomainError("bessel_j: negative argument");
    if (x == 0.0) return mu == 0.0 ? 1.0 : 0.0;
    return boost::math::cyl_bessel_j(mu, x);
}

double bessel_y(double mu, double x) {
    if (!(x > 0.0)) throw DomainError("bessel_y: argument must be positive");
    return boost::math::cyl_neumann(mu, x);
}

Complex hankel(int kind, double mu, double x) {
    if (!(x > 0.0)) throw DomainError("hankel: argument must be positive");
    const double j = bessel_j(mu, x), y = bessel_y(mu, x);
    if (kind == 1) return {j, y};
    if (kind == 2) return {j, -y};
    throw DomainError("hankel: kind must be 1 or 2");
}

namespace {

// I_mu(z) power series.
Complex i_series(double mu, Complex z, const PrecisionPolicy& pol) {
    const Complex h = 0.5 * z, h2 = h * h;
    Complex term = principal_pow(h, mu) * rgamma(mu + 1.0);
    Complex sum = term;
    for (int k = 1; k < pol.max_terms; ++k) {
        term *= h2 / (k * (k + mu));
        sum += term;
        if (std::abs(term) <= pol.series_tol * std::abs(sum)) return sum;
    }
    throw NonConvergence("bessel_i: power series did not converge");
}

// e^{-|Re z|} I_mu(z) from the large-argument expansion with both exponentials.
Complex i_asymptotic_scaled(double mu, Complex z, const PrecisionPolicy& pol) {
    const double fm = 4.0 * mu * mu;
    const int s = (z.imag() > 0.0 || (z.imag() == 0.0 && !std::signbit(z.imag()))) ? 1 : -1;
    Complex s1 = 1.0, s2 = 1.0, a = 1.0;
    double last = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        a *= (fm - odd * odd) / (8.0 * k) / z;
        const double mag = std::abs(a);
        if (mag > last) break;  // divergent tail
        last = mag;
        s1 += (k % 2 ? -1.0 : 1.0) * a;
        s2 += a;
        if (mag <= pol.series_tol) break;
    }
    const double re = std::abs(z.real());
    const Complex pre = 1.0 / std::sqrt(2.0 * kPi * z);
    const Complex t1 = std::exp(z - re) * s1;
    const Complex t2 = double(s) * kI * std::exp(double(s) * mu * kPi * kI) * std::exp(-z - re) * s2;
    return pre * (t1 + t2);
}

// J_mu(w) by Miller's backward recurrence, normalized with
// (w/2)^mu = sum_k (mu+2k) Gamma(mu+k)/k! J_{mu+2k}(w).
Complex j_miller(double mu, Complex w) {
    const int n = 2 * (static_cast<int>(std::abs(w)) / 2 + 30);
    std::vector<double> c(n / 2 + 1);
    const double g1 = std::exp(std::lgamma(mu + 1.0));
    c[0] = g1;
    double g = g1;  // Gamma(mu+j)/j!
    for (int j = 1; j <= n / 2; ++j) {
        if (j > 1) g *= (mu + j - 1.0) / j;
        c[j] = (mu + 2.0 * j) * g;
    }
    Complex fp1 = 0.0, f = 1e-200, sum = 0.0;
    if (n % 2 == 0) sum += c[n / 2] * f;
    for (int k = n; k >= 1; --k) {
        const Complex fm1 = 2.0 * (mu + k) / w * f - fp1;
        fp1 = f;
        f = fm1;
        if ((k - 1) % 2 == 0) sum += c[(k - 1) / 2] * f;
        if (std::abs(f) > 1e200) {
            f *= 1e-200;
            fp1 *= 1e-200;
            sum *= 1e-200;
        }
    }
    return f * principal_pow(0.5 * w, mu) / sum;
}

double asymptotic_threshold(double mu, const PrecisionPolicy& pol) {
    return std::max(pol.asymptotic_switch, mu * mu);
}

}  // namespace

Complex bessel_i_scaled(double mu, Complex z, const PrecisionPolicy& pol) {
    if (mu <= -1.0) throw DomainError("bessel_i: order must exceed -1");
    if (z == Complex(0.0, 0.0)) return mu == 0.0 ? 1.0 : 0.0;
    const double az = std::abs(z), re = std::abs(z.real());
    if (az >= asymptotic_threshold(mu, pol)) return i_asymptotic_scaled(mu, z, pol);
    if (az - re > 9.0 && az > 4.0) {
        // near the imaginary axis the series cancels; go through J of a near-real argument
        const bool upper = z.imag() > 0.0 || (z.imag() == 0.0 && !std::signbit(z.imag()));
        const Complex w = upper ? -kI * z : kI * z;
        const Complex ph = std::exp((upper ? 0.5 : -0.5) * mu * kPi * kI);
        return ph * j_miller(mu, w) * std::exp(-re);
    }
    return i_series(mu, z, pol) * std::exp(-re);
}

double bessel_i_scaled(double mu, double x, const PrecisionPolicy& pol) {
    if (mu <= -1.0) throw DomainError("bessel_i: order must exceed -1");
    if (x < 0.0) throw DomainError("bessel_i: real-argument form needs x >= 0");
    if (x == 0.0) return mu == 0.0 ? 1.0 : 0.0;
    if (x >= asymptotic_threshold(mu, pol)) return i_asymptotic_scaled(mu, Complex(x, 0.0), pol).real();
    const double h2 = 0.25 * x * x;
    double term = std::exp(mu * std::log(0.5 * x) - std::lgamma(mu + 1.0) - x), sum = term;
    for (int k = 1; k < pol.max_terms; ++k) {
        term *= h2 / (k * (k + mu));
        sum += term;
        if (term <= pol.series_tol * sum) return sum;
    }
    throw NonConvergence("bessel_i: power series did not converge");
}

Complex bessel_i(double mu, Complex z, const PrecisionPolicy& pol) {
    const double re = std::abs(z.real());
    if (re > 700.0) throw OverflowError("bessel_i: argument too large, use bessel_i_scaled");
    return bessel_i_scaled(mu, z, pol) * std::exp(re);
}

Complex bessel_j(double mu, Complex w, const PrecisionPolicy& pol) {
    if (w == Complex(0.0, 0.0)) return mu == 0.0 ? 1.0 : 0.0;
    const double ph = principal_arg(w);
    if (ph >= -0.5 * kPi) return std::exp(0.5 * mu * kPi * kI) * bessel_i(mu, -kI * w, pol);
    return std::exp(-0.5 * mu * kPi * kI) * bessel_i(mu, kI * w, pol);
}

double laguerre(int n, double alpha, double x) {
    if (n < 0) throw DomainError("laguerre: negative degree");
    if (n == 0) return 1.0;
    double l0 = 1.0, l1 = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k) {
        const double l2 = ((2.0 * k + 1.0 + alpha - x) * l1 - (k + alpha) * l0) / (k + 1.0);
        l0 = l1;
        l1 = l2;
    }
    return l1;
}

double gegenbauer(int l, double nu, double x) {
    if (l < 0) throw DomainError("gegenbauer: negative degree");
    if (l == 0) return 1.0;
    double c0 = 1.0, c1 = 2.0 * nu * x;
    for (int k = 1; k < l; ++k) {
        const double c2 = (2.0 * (k + nu) * x * c1 - (k + 2.0 * nu - 1.0) * c0) / (k + 1.0);
        c0 = c1;
        c1 = c2;
    }
    return c1;
}

}  // namespace cqm::specfun
