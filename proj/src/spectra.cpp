#include "cqm/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cqm/errors.hpp"

namespace cqm {

namespace sf = specfun;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

void require(const AnalogOscillator& a, GeneratorClassTag tag, const char* who) {
    if (a.class_tag != tag)
        throw ClassMismatchError(std::string(who) + ": analog is " + to_string(a.class_tag) + ", expected " +
                                 to_string(tag));
}

void require_radius(double r, const char* who) {
    if (!(r > 0.0)) throw DomainError(std::string(who) + ": r must be positive");
}

}  // namespace

std::vector<EigenData> elliptic_levels(const AnalogOscillator& a, int n_max) {
    require(a, GeneratorClassTag::Elliptic, "elliptic_levels");
    if (n_max < 0) throw DomainError("elliptic_levels: n_max must be nonnegative");
    std::vector<EigenData> out;
    for (int n = 0; n <= n_max; ++n) {
        EigenData e;
        e.class_tag = a.class_tag;
        e.discrete = true;
        e.n = n;
        e.r_n = 0.5 * (1.0 + a.mu) + n;
        e.e_tilde = a.hbar * a.omega_mag * (1.0 + a.mu + 2.0 * n);
        e.energy = a.spectral_sign() * a.scale * e.e_tilde;
        e.g_eigen = e.energy / a.hbar;
        out.push_back(e);
    }
    return out;
}

EigenData continuum_label(const AnalogOscillator& a, double E) {
    EigenData e;
    e.class_tag = a.class_tag;
    e.discrete = false;
    e.E_label = E;
    e.e_tilde = E;
    e.energy = a.spectral_sign() * a.scale * E;
    e.g_eigen = e.energy / a.hbar;
    if (a.class_tag == GeneratorClassTag::Hyperbolic) e.kappa = E / (2.0 * a.hbar * a.omega_mag);
    return e;
}

double elliptic_eigenfunction(const AnalogOscillator& a, int n, double r) {
    require(a, GeneratorClassTag::Elliptic, "elliptic_eigenfunction");
    require_radius(r, "elliptic_eigenfunction");
    if (n < 0) throw DomainError("elliptic_eigenfunction: n must be nonnegative");
    const double c = a.mass * a.omega_mag / a.hbar;
    const double x = c * r * r;
    const double lognorm = 0.5 * (std::log(2.0) + std::lgamma(n + 1.0) - std::lgamma(1.0 + a.mu + n));
    const double logv = lognorm - 0.5 * std::log(r) + (a.mu + 1.0) * std::log(std::sqrt(c) * r) - 0.5 * x;
    return std::exp(logv) * sf::laguerre(n, a.mu, x);
}

double parabolic_eigenfunction(const AnalogOscillator& a, double E, double r) {
    require_radius(r, "parabolic_eigenfunction");
    if (E < 0.0) throw DomainError("parabolic_eigenfunction: E must be nonnegative");
    const double k = std::sqrt(2.0 * a.mass * E) / a.hbar;
    return std::sqrt(a.mass) / a.hbar * std::sqrt(r) * sf::bessel_j(a.mu, k * r);
}

Complex hyperbolic_eigenfunction(const AnalogOscillator& a, double E, double r, const sf::PrecisionPolicy& pol) {
    require(a, GeneratorClassTag::Hyperbolic, "hyperbolic_eigenfunction");
    require_radius(r, "hyperbolic_eigenfunction");
    const double w = a.omega_mag;
    const double kappa = E / (2.0 * a.hbar * w);
    const double x = a.mass * w * r * r / a.hbar;
    const Complex gp = sf::gamma(Complex(0.5 * (1.0 + a.mu), kappa));
    const Complex m = sf::whittaker_m_reg(Complex(0.0, kappa), 0.5 * a.mu, Complex(0.0, -x), pol);
    return std::exp(0.5 * kPi * kappa) / std::sqrt(2.0 * kPi * a.hbar * w) * gp * m / std::sqrt(r);
}

GreenValue green_parabolic(const AnalogOscillator& a, double E, double r_in, double r_out, GreenKind kind) {
    require_radius(r_in, "green_parabolic");
    require_radius(r_out, "green_parabolic");
    if (!(E > 0.0)) throw DomainError("green_parabolic: E must be positive");
    const double k = std::sqrt(2.0 * a.mass * E) / a.hbar;
    const double rl = std::min(r_in, r_out), rg = std::max(r_in, r_out);
    const double s = kind == GreenKind::Retarded ? -1.0 : 1.0;
    const Complex h = sf::hankel(kind == GreenKind::Retarded ? 1 : 2, a.mu, k * rg);
    GreenValue g;
    g.kind = kind;
    g.value = s * kPi * kI * (a.mass / (a.hbar * a.hbar)) * std::sqrt(r_in * r_out) * sf::bessel_j(a.mu, k * rl) * h;
    return g;
}

GreenValue green_hyperbolic(const AnalogOscillator& a, double E, double r_in, double r_out, GreenKind kind,
                            const sf::PrecisionPolicy& pol) {
    require(a, GeneratorClassTag::Hyperbolic, "green_hyperbolic");
    require_radius(r_in, "green_hyperbolic");
    require_radius(r_out, "green_hyperbolic");
    const double w = a.omega_mag;
    const double kappa = E / (2.0 * a.hbar * w);
    const double c = a.mass * w / a.hbar;
    const double rl = std::min(r_in, r_out), rg = std::max(r_in, r_out);
    const double s = kind == GreenKind::Retarded ? 1.0 : -1.0;  // upper/lower sign
    const Complex lam(0.0, s * kappa);
    const Complex zl(0.0, -s * c * rl * rl), zg(0.0, -s * c * rg * rg);
    const Complex gam = sf::gamma(Complex(0.5 * (1.0 + a.mu), -s * kappa));
    const Complex wv = sf::whittaker_w(lam, 0.5 * a.mu, zg, pol);
    const Complex mv = sf::whittaker_m_reg(lam, 0.5 * a.mu, zl, pol);
    GreenValue g;
    g.kind = kind;
    g.value = -s * kI / (a.hbar * w) * gam * wv * mv / std::sqrt(r_in * r_out);
    return g;
}

double green_elliptic(const AnalogOscillator& a, double E, double r_in, double r_out, const sf::PrecisionPolicy& pol) {
    require(a, GeneratorClassTag::Elliptic, "green_elliptic");
    require_radius(r_in, "green_elliptic");
    require_radius(r_out, "green_elliptic");
    const double w = a.omega_mag;
    const double kappa = E / (2.0 * a.hbar * w);
    const double c = a.mass * w / a.hbar;
    const double ga = 0.5 * (1.0 + a.mu) - kappa;
    if (sf::is_nonpositive_integer(ga)) throw PoleError("green_elliptic: E is an eigenvalue");
    const double rl = std::min(r_in, r_out), rg = std::max(r_in, r_out);
    const Complex wv = sf::whittaker_w(kappa, 0.5 * a.mu, c * rg * rg, pol);
    const Complex mv = sf::whittaker_m_reg(kappa, 0.5 * a.mu, c * rl * rl, pol);
    return (-1.0 / (a.hbar * w) * sf::gamma(ga) * wv * mv).real() / std::sqrt(r_in * r_out);
}

Complex hyperbolic_product(const AnalogOscillator& a, double E, double r_out, double r_in, const sf::PrecisionPolicy& pol) {
    require(a, GeneratorClassTag::Hyperbolic, "hyperbolic_product");
    require_radius(r_in, "hyperbolic_product");
    require_radius(r_out, "hyperbolic_product");
    const double w = a.omega_mag;
    const double kappa = E / (2.0 * a.hbar * w);
    const double c = a.mass * w / a.hbar;
    const double ha = 0.5 * (1.0 + a.mu);
    // e^{pi kappa} Gamma_+ Gamma_- = e^{pi kappa} |Gamma(ha + i kappa)|^2, formed in logs
    const double lg = 2.0 * sf::log_gamma(Complex(ha, kappa)).real() + kPi * kappa;
    const Complex m1 = sf::whittaker_m_reg(Complex(0.0, kappa), 0.5 * a.mu, Complex(0.0, -c * r_out * r_out), pol);
    const Complex m2 = sf::whittaker_m_reg(Complex(0.0, -kappa), 0.5 * a.mu, Complex(0.0, c * r_in * r_in), pol);
    return std::exp(lg) * m1 * m2 / (2.0 * kPi * a.hbar * w * std::sqrt(r_in * r_out));
}

double parabolic_product(const AnalogOscillator& a, double E, double r_out, double r_in) {
    return parabolic_eigenfunction(a, E, r_out) * parabolic_eigenfunction(a, E, r_in);
}

SeriesResult spectral_series_elliptic(const AnalogOscillator& a, double r_in, double r_out, double T_euclid,
                                      int n_terms) {
    require(a, GeneratorClassTag::Elliptic, "spectral_series_elliptic");
    if (!(T_euclid > 0.0)) throw DomainError("spectral_series_elliptic: T must be positive");
    if (n_terms < 1) throw DomainError("spectral_series_elliptic: n_terms must be positive");
    SeriesResult out;
    double sum = 0.0, last = 0.0;
    for (int n = 0; n < n_terms; ++n) {
        const double e = a.hbar * a.omega_mag * (1.0 + a.mu + 2.0 * n);
        last = std::exp(-e * T_euclid / a.hbar) * elliptic_eigenfunction(a, n, r_out) * elliptic_eigenfunction(a, n, r_in);
        sum += last;
    }
    out.value = sum;
    out.last_term = std::abs(last);
    return out;
}

}  // namespace cqm
