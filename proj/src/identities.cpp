#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "cqm/errors.hpp"
#include "cqm/quadrature.hpp"
#include "cqm/spectra.hpp"
#include "cqm/transforms.hpp"

namespace cqm {

namespace sf = specfun;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

struct Entry {
    IdentityId id;
    const char* name;
    double tol;
    ToleranceKind kind;
};

const std::array<Entry, 13> kEntries{{
    {IdentityId::HILLE_HARDY, "HILLE_HARDY", 1e-10, ToleranceKind::Relative},
    {IdentityId::MEHLER_HEINE, "MEHLER_HEINE", 5e-4, ToleranceKind::Absolute},
    {IdentityId::WEBER, "WEBER", 1e-9, ToleranceKind::Relative},
    {IdentityId::BESSEL_PRODUCT_LINE, "BESSEL_PRODUCT_LINE", 1e-8, ToleranceKind::Relative},
    {IdentityId::BESSEL_HANKEL_HALFLINE, "BESSEL_HANKEL_HALFLINE", 1e-8, ToleranceKind::Relative},
    {IdentityId::WHITTAKER_DOUBLE, "WHITTAKER_DOUBLE", 1e-8, ToleranceKind::Relative},
    {IdentityId::WHITTAKER_REAL_LINE, "WHITTAKER_REAL_LINE", 1e-8, ToleranceKind::Relative},
    {IdentityId::WHITTAKER_CONTOUR, "WHITTAKER_CONTOUR", 1e-6, ToleranceKind::Relative},
    {IdentityId::WHITTAKER_HALFLINE, "WHITTAKER_HALFLINE", 1e-8, ToleranceKind::Relative},
    {IdentityId::SEMICIRCUITAL, "SEMICIRCUITAL", 1e-10, ToleranceKind::Relative},
    {IdentityId::CONNECTION, "CONNECTION", 1e-8, ToleranceKind::Relative},
    {IdentityId::WRONSKIAN, "WRONSKIAN", 1e-6, ToleranceKind::Relative},
    {IdentityId::HANKEL_SUM, "HANKEL_SUM", 1e-10, ToleranceKind::Relative},
}};

const Entry& entry(IdentityId id) {
    for (const Entry& e : kEntries)
        if (e.id == id) return e;
    throw DomainError("unknown identity");
}

struct Sides {
    Complex lhs, rhs;
    double abs_err = -1.0;  // set when the report aggregates several comparisons
    double rel_err = -1.0;
    int terms = 0;
};

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

void need(bool ok, const char* msg) {
    if (!ok) throw DomainError(msg);
}

// exp(expo) * I_mu(w), with the exponential growth of I_mu folded into expo
Complex exp_times_i(Complex expo, double mu, Complex w) {
    return std::exp(expo + std::abs(w.real())) * sf::bessel_i_scaled(mu, w);
}

template <class F>
Complex panels(F&& f, double a, double b, double width, int n) {
    return quad::integrate_panels(f, a, b, width, n);
}

Sides hille_hardy(const IdentitySample& s) {
    const double x = s.at("x"), y = s.at("y"), z = s.at("z"), mu = s.at("mu");
    const int n = static_cast<int>(s.at("terms"));
    need(z > 0.0 && z < 1.0, "HILLE_HARDY: z must lie in (0, 1)");
    need(x > 0.0 && y > 0.0, "HILLE_HARDY: x and y must be positive");
    need(mu > -1.0, "HILLE_HARDY: mu must exceed -1");
    need(n >= 1, "HILLE_HARDY: terms must be positive");
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double c = std::exp(std::lgamma(k + 1.0) - std::lgamma(k + mu + 1.0) + k * std::log(z));
        sum += c * sf::laguerre(k, mu, x) * sf::laguerre(k, mu, y);
    }
    const double arg = 2.0 * std::sqrt(x * y * z) / (1.0 - z);
    const double rhs = std::pow(x * y * z, -0.5 * mu) / (1.0 - z) * std::exp(-z * (x + y) / (1.0 - z) + arg) *
                       sf::bessel_i_scaled(mu, arg);
    return {sum, rhs, -1, -1, n};
}

Sides mehler_heine(const IdentitySample& s) {
    const int n = static_cast<int>(s.at("n"));
    const double x = s.at("x"), mu = s.at("mu");
    need(n >= 1, "MEHLER_HEINE: n must be positive");
    need(x > 0.0, "MEHLER_HEINE: x must be positive");
    need(mu > -1.0, "MEHLER_HEINE: mu must exceed -1");
    const double lhs = std::pow(double(n), -mu) * sf::laguerre(n, mu, x / n);
    const double rhs = std::pow(x, -0.5 * mu) * sf::bessel_j(mu, 2.0 * std::sqrt(x));
    return {lhs, rhs, -1, -1, n};
}

Sides weber(const IdentitySample& s) {
    const double a = s.at("a"), b = s.at("b"), c = s.at("c"), mu = s.at("mu"), upper = s.at("upper");
    need(mu > -1.0, "WEBER: mu must exceed -1");
    need(c > 0.0 && a > 0.0 && b > 0.0, "WEBER: a, b, c must be positive");
    auto f = [&](double x) { return std::exp(-c * c * x * x) * sf::bessel_j(mu, a * x) * sf::bessel_j(mu, b * x) * x; };
    const double lhs = quad::integrate_panels(f, 0.0, upper, 0.5, 32);
    const double arg = a * b / (2.0 * c * c);
    const double rhs = std::exp(-(a * a + b * b) / (4.0 * c * c) + arg) * sf::bessel_i_scaled(mu, arg) / (2.0 * c * c);
    return {lhs, rhs};
}

// g(s) = exp(s/2 - A/(2s)) I_mu(z'z''/s) / s
Complex bessel_kernel(Complex s, double A, double mu, Complex w) {
    return exp_times_i(0.5 * s - A / (2.0 * s), mu, w) / s;
}

Sides bessel_product_line(const IdentitySample& s) {
    const double z1 = s.at("z1"), z2 = s.at("z2"), mu = s.at("mu"), R = s.at("loop_radius");
    need(mu > -1.0, "BESSEL_PRODUCT_LINE: mu must exceed -1");
    need(z1 > 0.0 && z2 > 0.0 && R > 0.0, "BESSEL_PRODUCT_LINE: z', z'', loop radius must be positive");
    const double A = z1 * z1 + z2 * z2, p = z1 * z2;
    // the vertical line closes onto a Hankel loop around the cut of (z'z''/s)^mu
    auto ray = [&](double t) {
        const Complex below(-t, -0.0), above(-t, 0.0);
        // 1/s flips the side of the cut: s below -> z'z''/s above
        const Complex wb(-p / t, 0.0), wa(-p / t, -0.0);
        return bessel_kernel(below, A, mu, wb) - bessel_kernel(above, A, mu, wa);
    };
    auto circle = [&](double th) {
        const Complex sv = R * std::exp(kI * th);
        return bessel_kernel(sv, A, mu, p / sv) * kI * sv;
    };
    const Complex I = panels(ray, R, R + 90.0, 2.0, 32) + panels(circle, -kPi, kPi, kPi / 4.0, 32);
    const Complex lhs = I / (2.0 * kPi * kI);
    const double rhs = sf::bessel_j(mu, z1) * sf::bessel_j(mu, z2);
    return {lhs, rhs};
}

Sides bessel_hankel_halfline(const IdentitySample& s) {
    const double z1 = s.at("z1"), z2 = s.at("z2"), mu = s.at("mu"), R = s.at("bend_radius");
    const int kind = static_cast<int>(s.at("kind"));
    need(kind == 1 || kind == 2, "BESSEL_HANKEL_HALFLINE: kind must be 1 or 2");
    need(mu > -1.0, "BESSEL_HANKEL_HALFLINE: mu must exceed -1");
    need(z1 > 0.0 && z2 > 0.0 && R > 0.0, "BESSEL_HANKEL_HALFLINE: z', z'', bend radius must be positive");
    const double A = z1 * z1 + z2 * z2, p = z1 * z2;
    const double sg = kind == 1 ? 1.0 : -1.0;
    // 0 -> R e^{+-i pi/4} (where exp(-A/2s) decays), then off along e^{+-3i pi/4}
    const Complex d1 = std::exp(sg * kI * (kPi / 4.0)), d2 = std::exp(sg * kI * (3.0 * kPi / 4.0));
    auto segA = [&](double u) -> Complex {
        if (u == 0.0) return 0.0;
        const Complex sv = u * u * d1;
        return bessel_kernel(sv, A, mu, p / sv) * d1 * (2.0 * u);
    };
    auto segB = [&](double t) {
        const Complex sv = R * d1 + t * d2;
        return bessel_kernel(sv, A, mu, p / sv) * d2;
    };
    const Complex I = panels(segA, 0.0, std::sqrt(R), std::sqrt(R) / 4.0, 32) + panels(segB, 0.0, 130.0, 2.0, 32);
    const Complex lhs = sg * I / (kPi * kI);
    const double zg = std::max(z1, z2), zl = std::min(z1, z2);
    const Complex rhs = sf::hankel(kind, mu, zg) * sf::bessel_j(mu, zl);
    return {lhs, rhs};
}

// int_0^inf e^{-t^2} t^{2 lambda} J_mu(2 t sqrt z) dt
Complex gaussian_bessel_moment(Complex lambda, double mu, Complex z) {
    const Complex rz = std::sqrt(z);
    auto f = [&](double t) -> Complex {
        if (t > 30.0) return 0.0;
        return std::exp(-t * t + 2.0 * lambda * std::log(t)) * sf::bessel_j(mu, 2.0 * t * rz);
    };
    return quad::integrate_half_line_de(f, 1.0, 1e-15);
}

Complex whittaker_pair(double kappa, double mu, double x1, double x2) {
    return sf::whittaker_m_reg(Complex(0.0, kappa), 0.5 * mu, Complex(0.0, -x1)) *
           sf::whittaker_m_reg(Complex(0.0, -kappa), 0.5 * mu, Complex(0.0, x2));
}

Sides whittaker_double(const IdentitySample& s) {
    const double kappa = s.at("kappa"), mu = s.at("mu"), x1 = s.at("x1"), x2 = s.at("x2");
    need(mu > -1.0, "WHITTAKER_DOUBLE: mu must exceed -1");
    need(x1 > 0.0 && x2 > 0.0, "WHITTAKER_DOUBLE: x', x'' must be positive");
    const Complex l1(0.0, kappa), l2(0.0, -kappa), z1(0.0, -x1), z2(0.0, x2);
    const double ha = 0.5 * (1.0 + mu);
    // the double integral separates into one Gaussian-Bessel moment per factor
    const Complex I1 = gaussian_bessel_moment(l1, mu, z1), I2 = gaussian_bessel_moment(l2, mu, z2);
    const Complex pre = 4.0 * std::sqrt(z1) * std::sqrt(z2) * std::exp(0.5 * (z1 + z2)) * sf::rgamma(ha + l1) *
                        sf::rgamma(ha + l2);
    return {pre * I1 * I2, whittaker_pair(kappa, mu, x1, x2)};
}

Sides whittaker_real_line(const IdentitySample& s) {
    const double kappa = s.at("kappa"), mu = s.at("mu"), x1 = s.at("x1"), x2 = s.at("x2"), tmax = s.at("s_max");
    need(mu > -1.0, "WHITTAKER_REAL_LINE: mu must exceed -1");
    need(x1 > 0.0 && x2 > 0.0, "WHITTAKER_REAL_LINE: x', x'' must be positive");
    const double al = std::sqrt(x1 * x2), be = 0.5 * (x1 + x2);
    auto f = [&](double t) {
        const double ch = std::cosh(t);
        return exp_times_i(Complex(0.0, 2.0 * kappa * t + be * std::tanh(t)), mu, al / ch) / ch;
    };
    const Complex I = panels(f, -tmax, tmax, 0.5, 64);
    const double ha = 0.5 * (1.0 + mu);
    const Complex pre = al * sf::rgamma(Complex(ha, kappa)) * sf::rgamma(Complex(ha, -kappa));
    return {pre * I, whittaker_pair(kappa, mu, x1, x2)};
}

Sides whittaker_contour(const IdentitySample& s) {
    const double kappa = s.at("kappa"), mu = s.at("mu"), x1 = s.at("x1"), x2 = s.at("x2"), c = s.at("c"),
                 tmax = s.at("s_max");
    need(mu > -1.0, "WHITTAKER_CONTOUR: mu must exceed -1");
    need(x1 > 0.0 && x2 > 0.0, "WHITTAKER_CONTOUR: x', x'' must be positive");
    if (!(c > -0.5 * kPi && c < 0.0)) throw ContourError("WHITTAKER_CONTOUR: c must lie in (-pi/2, 0)");
    const double al = std::sqrt(x1 * x2), be = 0.5 * (x1 + x2);
    auto f = [&](double t) {
        const Complex z(t, c);
        const Complex ish = kI * std::sinh(z);
        return exp_times_i(2.0 * kI * kappa * z + kI * be / std::tanh(z), mu, al / ish) / ish;
    };
    const double width = std::min(0.5, kPi / (2.0 * std::abs(kappa) + 1.0));
    const Complex I = panels(f, -tmax, tmax, width, 64);
    const double ha = 0.5 * (1.0 + mu);
    const Complex pre = std::exp(-kPi * kappa) * al * sf::rgamma(Complex(ha, kappa)) * sf::rgamma(Complex(ha, -kappa));
    return {pre * I, whittaker_pair(kappa, mu, x1, x2)};
}

Sides whittaker_halfline(const IdentitySample& s) {
    const double kappa = s.at("kappa"), mu = s.at("mu"), a1 = s.at("a1"), a2 = s.at("a2"), t = s.at("t");
    need(a1 > a2 && a2 > 0.0, "WHITTAKER_HALFLINE: needs a1 > a2 > 0");
    need(t > 0.0, "WHITTAKER_HALFLINE: t must be positive");
    need(mu > -1.0, "WHITTAKER_HALFLINE: mu must exceed -1");
    const double ga = 0.5 * (1.0 + mu) - kappa;
    need(ga > 0.0, "WHITTAKER_HALFLINE: needs (1+mu)/2 - kappa > 0");
    const double g = t * std::sqrt(a1 * a2), h = 0.5 * (a1 + a2) * t;
    auto f = [&](double xi) -> double {
        if (xi > 40.0) return 0.0;
        const double arg = g * std::sinh(xi);
        return std::exp(-h * std::cosh(xi) + arg + 2.0 * kappa * std::log(1.0 / std::tanh(0.5 * xi))) *
               sf::bessel_i_scaled(mu, arg);
    };
    const double I = quad::integrate_half_line_de(f, 1.0, 1e-15);
    const Complex lhs = g * sf::rgamma(ga) * I;
    const Complex rhs = sf::whittaker_w(kappa, 0.5 * mu, a1 * t) * sf::whittaker_m_reg(kappa, 0.5 * mu, a2 * t);
    return {lhs, rhs};
}

Sides semicircuital(const IdentitySample& s) {
    const double kappa = s.at("kappa"), mu = s.at("mu"), z = s.at("z");
    need(z > 0.0, "SEMICIRCUITAL: z must be positive");
    need(mu > -1.0, "SEMICIRCUITAL: mu must exceed -1");
    const Complex lam(0.0, kappa);
    Sides out;
    out.abs_err = 0.0;
    out.rel_err = 0.0;
    for (int sg : {1, -1}) {
        const Complex lhs = sf::whittaker_m_reg(lam, 0.5 * mu, sf::rotate_half_turn(z, sg));
        const Complex rhs = std::exp(sg * (mu + 1.0) * kPi * kI / 2.0) * sf::whittaker_m_reg(-lam, 0.5 * mu, z);
        if (sg == 1) {
            out.lhs = lhs;
            out.rhs = rhs;
        }
        out.abs_err = std::max(out.abs_err, std::abs(lhs - rhs));
        out.rel_err = std::max(out.rel_err, rel(lhs, rhs));
    }
    return out;
}

Sides connection(const IdentitySample& s) {
    const double kappa = s.at("kappa"), mu = s.at("mu");
    const Complex z(s.at("z_re"), s.at("z_im"));
    need(z != Complex(0.0, 0.0), "CONNECTION: z must be nonzero");
    need(mu > -1.0, "CONNECTION: mu must exceed -1");
    const Complex lam(0.0, kappa);
    const double ha = 0.5 * (1.0 + mu);
    // the rotated argument e^{s i pi} z has to stay on the principal sheet
    const int sg = z.imag() <= 0.0 ? 1 : -1;
    const Complex lhs = sf::whittaker_m_reg(lam, 0.5 * mu, z);
    const Complex w1 = sf::whittaker_w(lam, 0.5 * mu, z);
    const Complex w2 = sf::whittaker_w(-lam, 0.5 * mu, sf::rotate_half_turn(z, sg));
    const Complex rhs = std::exp(double(sg) * lam * kPi * kI) *
                        (std::exp(-sg * (mu + 1.0) * kPi * kI / 2.0) * w1 * sf::rgamma(ha + lam) + w2 * sf::rgamma(ha - lam));
    return {lhs, rhs};
}

Sides wronskian(const IdentitySample& s) {
    const double kappa = s.at("kappa"), mu = s.at("mu"), h = s.at("h");
    const Complex z(s.at("z_re"), s.at("z_im"));
    need(mu > -1.0, "WRONSKIAN: mu must exceed -1");
    need(h > 0.0 && h < 0.25 * std::abs(z), "WRONSKIAN: step must be positive and small against |z|");
    const Complex lam(0.0, kappa);
    static constexpr double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    auto M = [&](Complex x) { return sf::whittaker_m_reg(lam, 0.5 * mu, x); };
    auto W = [&](Complex x) { return sf::whittaker_w(lam, 0.5 * mu, x); };
    Complex dM = 0.0, dW = 0.0;
    for (int k = 1; k <= 4; ++k) {
        dM += c[k - 1] * (M(z + double(k) * h) - M(z - double(k) * h));
        dW += c[k - 1] * (W(z + double(k) * h) - W(z - double(k) * h));
    }
    dM /= h;
    dW /= h;
    const Complex lhs = M(z) * dW - dM * W(z);
    const Complex rhs = -sf::rgamma(0.5 * (1.0 + mu) - lam);
    return {lhs, rhs};
}

Sides hankel_sum(const IdentitySample& s) {
    const double E = s.at("E"), r1 = s.at("r1"), r2 = s.at("r2"), mu = s.at("mu");
    need(E > 0.0 && r1 > 0.0 && r2 > 0.0, "HANKEL_SUM: E, r', r'' must be positive");
    need(mu >= 0.0, "HANKEL_SUM: mu must be nonnegative");
    PhysicalParams p;
    p.dim = 2;  // nu = 0, so mu = sqrt(g)
    p.coupling = mu * mu;
    const AnalogOscillator a = make_analog(GeneratorClassTag::Parabolic, p, 0.0);
    const Complex gp = green_parabolic(a, E, r1, r2, GreenKind::Retarded).value;
    const Complex gm = green_parabolic(a, E, r1, r2, GreenKind::Advanced).value;
    return {gp - gm, -2.0 * kPi * kI * parabolic_product(a, E, r2, r1)};
}

}  // namespace

const std::vector<IdentityId>& all_identities() {
    static const std::vector<IdentityId> ids = [] {
        std::vector<IdentityId> v;
        for (const Entry& e : kEntries) v.push_back(e.id);
        return v;
    }();
    return ids;
}

std::string to_string(IdentityId id) { return entry(id).name; }

std::optional<IdentityId> identity_from_string(const std::string& s) {
    for (const Entry& e : kEntries)
        if (s == e.name) return e.id;
    return std::nullopt;
}

IdentitySample default_sample(IdentityId id) {
    switch (id) {
        case IdentityId::HILLE_HARDY: return {{"x", 1.0}, {"y", 1.0}, {"z", 0.5}, {"mu", 0.5}, {"terms", 200}};
        case IdentityId::MEHLER_HEINE: return {{"n", 1e4}, {"x", 2.0}, {"mu", 0.5}};
        case IdentityId::WEBER: return {{"a", 1.2}, {"b", 0.8}, {"c", 1.0}, {"mu", 0.5}, {"upper", 50.0}};
        case IdentityId::BESSEL_PRODUCT_LINE: return {{"z1", 1.3}, {"z2", 0.7}, {"mu", 0.5}, {"loop_radius", 1.0}};
        case IdentityId::BESSEL_HANKEL_HALFLINE:
            return {{"z1", 1.3}, {"z2", 0.7}, {"mu", 0.5}, {"kind", 1}, {"bend_radius", 1.5}};
        case IdentityId::WHITTAKER_DOUBLE: return {{"kappa", 0.4}, {"mu", 0.5}, {"x1", 0.9}, {"x2", 1.7}};
        case IdentityId::WHITTAKER_REAL_LINE:
            return {{"kappa", 0.4}, {"mu", 0.5}, {"x1", 0.9}, {"x2", 1.7}, {"s_max", 40.0}};
        case IdentityId::WHITTAKER_CONTOUR:
            return {{"kappa", 0.4}, {"mu", 0.5}, {"x1", 0.9}, {"x2", 1.7}, {"c", -kPi / 4.0}, {"s_max", 40.0}};
        case IdentityId::WHITTAKER_HALFLINE: return {{"kappa", 0.3}, {"mu", 0.5}, {"a1", 1.7}, {"a2", 0.9}, {"t", 1.0}};
        case IdentityId::SEMICIRCUITAL: return {{"kappa", 0.4}, {"mu", 0.7}, {"z", 1.3}};
        case IdentityId::CONNECTION: return {{"kappa", 0.25}, {"mu", 0.5}, {"z_re", 2.0}, {"z_im", -0.1}};
        case IdentityId::WRONSKIAN:
            return {{"kappa", 0.4}, {"mu", 0.5}, {"z_re", 1.1}, {"z_im", -0.6}, {"h", 0.01}};
        case IdentityId::HANKEL_SUM: return {{"E", 1.0}, {"r1", 0.8}, {"r2", 1.1}, {"mu", 0.5}};
    }
    return {};
}

CheckReport verify_identity(IdentityId id, const IdentitySample& overrides, const QuadratureSpec& q) {
    IdentitySample s = default_sample(id);
    for (const auto& [k, v] : overrides) {
        auto it = s.find(k);
        if (it == s.end()) throw DomainError(to_string(id) + ": unknown sample key '" + k + "'");
        if (!std::isfinite(v)) throw DomainError(to_string(id) + ": sample value '" + k + "' is not finite");
        it->second = v;
    }
    Sides sd;
    switch (id) {
        case IdentityId::HILLE_HARDY: sd = hille_hardy(s); break;
        case IdentityId::MEHLER_HEINE: sd = mehler_heine(s); break;
        case IdentityId::WEBER: sd = weber(s); break;
        case IdentityId::BESSEL_PRODUCT_LINE: sd = bessel_product_line(s); break;
        case IdentityId::BESSEL_HANKEL_HALFLINE: sd = bessel_hankel_halfline(s); break;
        case IdentityId::WHITTAKER_DOUBLE: sd = whittaker_double(s); break;
        case IdentityId::WHITTAKER_REAL_LINE: sd = whittaker_real_line(s); break;
        case IdentityId::WHITTAKER_CONTOUR: sd = whittaker_contour(s); break;
        case IdentityId::WHITTAKER_HALFLINE: sd = whittaker_halfline(s); break;
        case IdentityId::SEMICIRCUITAL: sd = semicircuital(s); break;
        case IdentityId::CONNECTION: sd = connection(s); break;
        case IdentityId::WRONSKIAN: sd = wronskian(s); break;
        case IdentityId::HANKEL_SUM: sd = hankel_sum(s); break;
    }
    const Entry& e = entry(id);
    CheckReport r;
    r.identity_id = id;
    r.lhs = sd.lhs;
    r.rhs = sd.rhs;
    r.abs_err = sd.abs_err >= 0.0 ? sd.abs_err : std::abs(sd.lhs - sd.rhs);
    r.rel_err = sd.rel_err >= 0.0 ? sd.rel_err : rel(sd.lhs, sd.rhs);
    r.tolerance = e.tol;
    r.tolerance_kind = e.kind;
    r.sample = s;
    r.spec = q;
    r.series_terms = sd.terms;
    const double err = e.kind == ToleranceKind::Relative ? r.rel_err : r.abs_err;
    r.passed = std::isfinite(err) && err <= e.tol;
    return r;
}

}  // namespace cqm
