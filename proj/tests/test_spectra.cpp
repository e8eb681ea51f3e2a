#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cqm/errors.hpp"
#include "cqm/oracle.hpp"
#include "cqm/propagators.hpp"
#include "cqm/quadrature.hpp"
#include "cqm/spectra.hpp"

using namespace cqm;
using C = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;
const C I{0.0, 1.0};

double rel(C a, C b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

PhysicalParams params(double g, int d, int l) {
    PhysicalParams p;
    p.coupling = g;
    p.dim = d;
    p.ell = l;
    return p;
}

AnalogOscillator analog(GeneratorClassTag tag, double g, int d = 3, double omega = 0.5) {
    return make_analog(tag, params(g, d, 0), omega);
}

// max |(H - E) u| / max |E u| on [lo, hi], H applied with the 5-point second derivative.
// s is the sign of the oscillator term (+1 elliptic, 0 parabolic, -1 hyperbolic)
template <class F>
double residual(const AnalogOscillator& a, int s, double E, F u, double lo, double hi) {
    // h large enough that 1e-12 noise in the function values stays below the tolerance
    const double h = 1e-2, M = a.mass, hb = a.hbar, w = a.omega_mag;
    double num = 0.0, den = 0.0;
    for (double r = lo; r <= hi; r += 0.01) {
        const auto d2 = (-(u(r + 2 * h) + u(r - 2 * h)) + 16.0 * (u(r + h) + u(r - h)) - 30.0 * u(r)) / (12.0 * h * h);
        const double V = hb * hb * (a.mu * a.mu - 0.25) / (2 * M * r * r) + s * 0.5 * M * w * w * r * r;
        num = std::max(num, std::abs(-hb * hb / (2 * M) * d2 + (V - E) * u(r)));
        den = std::max(den, std::abs(E * u(r)));
    }
    return num / den;
}

}  // namespace

TEST_CASE("elliptic levels") {
    const auto a = analog(GeneratorClassTag::Elliptic, 0.0, 1);
    const auto lv = elliptic_levels(a, 3);
    REQUIRE(lv.size() == 4);
    CHECK(lv[0].e_tilde == 0.75);
    CHECK(lv[1].e_tilde == 1.75);
    CHECK(lv[0].r_n == 0.75);
    CHECK(lv[0].energy == 0.75);
    CHECK(lv[0].g_eigen == 0.75);

    // orientation: sigma = -1 gives a descending ladder
    const auto neg = reduce_to_analog({-1.0, 0.0, -1.0}, params(0.0, 1, 0));
    const auto ln = elliptic_levels(neg, 2);
    CHECK(ln[0].energy == -2.0 * 0.75);
    CHECK(ln[1].energy < ln[0].energy);

    CHECK_THROWS_AS(elliptic_levels(analog(GeneratorClassTag::Parabolic, 0.0), 2), ClassMismatchError);
    CHECK(continuum_label(analog(GeneratorClassTag::Hyperbolic, 0.0), 0.4).kappa == doctest::Approx(0.4));
}

TEST_CASE("elliptic eigenfunctions: normalization and orthogonality") {
    for (double g : {0.0, 2.0}) {
        const auto a = analog(GeneratorClassTag::Elliptic, g);
        for (int n = 0; n <= 2; ++n)
            for (int m = n; m <= 2; ++m) {
                auto f = [&](double r) { return elliptic_eigenfunction(a, n, r) * elliptic_eigenfunction(a, m, r); };
                const double v = quad::integrate_adaptive(f, 0.0, 20.0, 1e-15);
                if (n == m)
                    CHECK(std::abs(v - 1.0) < 1e-10);
                else
                    CHECK(std::abs(v) < 1e-12);
            }
    }
}

TEST_CASE("eigenfunctions: small-r power law") {
    for (double g : {0.0, 2.0}) {
        const auto a = analog(GeneratorClassTag::Elliptic, g);
        const double slope = std::log(elliptic_eigenfunction(a, 1, 1e-4) / elliptic_eigenfunction(a, 1, 1e-6)) / std::log(100.0);
        CHECK(std::abs(slope - (a.mu + 0.5)) < 1e-6);

        const auto h = analog(GeneratorClassTag::Hyperbolic, g);
        const double sh = std::log(std::abs(hyperbolic_eigenfunction(h, 0.0, 1e-4)) /
                                   std::abs(hyperbolic_eigenfunction(h, 0.0, 1e-6))) / std::log(100.0);
        CHECK(std::abs(sh - (h.mu + 0.5)) < 1e-6);
    }
}

TEST_CASE("eigenvalue equation residuals") {
    for (double g : {0.0, 2.0}) {
        const auto a = analog(GeneratorClassTag::Elliptic, g);
        for (int n = 0; n <= 3; ++n) {
            const double E = a.omega_mag * (1.0 + a.mu + 2.0 * n);
            CHECK(residual(a, 1, E, [&](double r) { return elliptic_eigenfunction(a, n, r); }, 0.1, 8.0) < 1e-5);
        }
        const auto p = analog(GeneratorClassTag::Parabolic, g);
        for (double E : {0.3, 1.0, 2.5})
            CHECK(residual(p, 0, E, [&](double r) { return parabolic_eigenfunction(p, E, r); }, 0.1, 8.0) < 1e-5);
        const auto h = analog(GeneratorClassTag::Hyperbolic, g);
        for (double E : {-0.6, 0.4, 1.3})
            CHECK(residual(h, -1, E, [&](double r) { return hyperbolic_eigenfunction(h, E, r); }, 0.1, 8.0) < 1e-5);
    }
}

TEST_CASE("parabolic eigenfunction values") {
    const auto a = analog(GeneratorClassTag::Parabolic, 0.0, 1);
    CHECK(parabolic_eigenfunction(a, 0.0, 1.3) == 0.0);
    const double expect = std::sqrt(2.0 / (pi * std::sqrt(2.0))) * std::sin(std::sqrt(2.0));
    CHECK(parabolic_eigenfunction(a, 1.0, 1.0) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("parabolic closure reproduces the heat kernel") {
    // int dE e^{-E T} U_E(r'') U_E(r') with E = k^2/2
    const auto a = analog(GeneratorClassTag::Parabolic, 0.0);
    const double triples[3][3] = {{0.8, 1.1, 0.7}, {0.5, 0.5, 0.3}, {1.5, 0.9, 1.4}};
    for (const auto& t : triples) {
        const double rp = t[0], rpp = t[1], T = t[2];
        auto f = [&](double k) {
            const double E = 0.5 * k * k;
            return k * std::exp(-E * T) * parabolic_product(a, E, rpp, rp);
        };
        const double lhs = quad::integrate_adaptive(f, 0.0, std::sqrt(80.0 / T), 1e-14);
        PropagatorQuery q;
        q.params = params(0.0, 3, 0);
        q.analog = a;
        q.r_in = rp;
        q.r_out = rpp;
        q.time = T;
        q.schedule = Schedule::Euclidean;
        CHECK(rel(lhs, propagator(q)) < 1e-6);
    }
}

TEST_CASE("hyperbolic eigenfunction products") {
    const auto h = analog(GeneratorClassTag::Hyperbolic, 0.0);
    for (double E : {-0.7, 0.4, 1.1}) {
        const double r1 = 0.7, r2 = 1.2;
        const C F = hyperbolic_product(h, E, r2, r1);
        CHECK(rel(hyperbolic_eigenfunction(h, E, r2) * std::conj(hyperbolic_eigenfunction(h, E, r1)), F) < 1e-12);
        const C Fd = hyperbolic_product(h, E, r1, r1);
        CHECK(std::abs(Fd.imag()) < 1e-14 * std::abs(Fd));
        CHECK(rel(Fd, std::norm(hyperbolic_eigenfunction(h, E, r1))) < 1e-12);
    }
    // both orderings of the Whittaker product agree
    const double k = 0.6, mu = 0.5, x1 = 0.9, x2 = 1.7;
    const C lhs = specfun::whittaker_m_reg(C(0, -k), mu / 2, C(0, x2)) * specfun::whittaker_m_reg(C(0, k), mu / 2, C(0, -x1));
    const C rhs = specfun::whittaker_m_reg(C(0, k), mu / 2, C(0, -x2)) * specfun::whittaker_m_reg(C(0, -k), mu / 2, C(0, x1));
    CHECK(rel(lhs, rhs) < 1e-9);
    CHECK_THROWS_AS(hyperbolic_eigenfunction(analog(GeneratorClassTag::Elliptic, 0.0), 0.4, 1.0), ClassMismatchError);
}

TEST_CASE("parabolic Green function") {
    const auto a = analog(GeneratorClassTag::Parabolic, 0.0);
    const double E = 1.0, r1 = 0.8, r2 = 1.1;
    const C gp = green_parabolic(a, E, r1, r2, GreenKind::Retarded).value;
    const C gm = green_parabolic(a, E, r1, r2, GreenKind::Advanced).value;
    CHECK(rel(-(gp - gm) / (2.0 * pi * I), parabolic_product(a, E, r2, r1)) < 1e-10);
    CHECK(gp == green_parabolic(a, E, r2, r1, GreenKind::Retarded).value);
    CHECK(rel(gm, std::conj(gp)) < 1e-15);
    CHECK_THROWS_AS(green_parabolic(a, 0.0, r1, r2, GreenKind::Retarded), DomainError);
}

TEST_CASE("hyperbolic Green function") {
    const auto h = analog(GeneratorClassTag::Hyperbolic, 0.0);
    const double E = 0.4, r1 = 0.7, r2 = 1.2;  // kappa = 0.4
    const C gp = green_hyperbolic(h, E, r1, r2, GreenKind::Retarded).value;
    const C gm = green_hyperbolic(h, E, r1, r2, GreenKind::Advanced).value;
    CHECK(rel(-(gp - gm) / (2.0 * pi * I), hyperbolic_product(h, E, r2, r1)) < 1e-8);
    CHECK(rel(gp, green_hyperbolic(h, E, r2, r1, GreenKind::Retarded).value) < 1e-15);

    std::mt19937 rng(8);
    std::uniform_real_distribution<double> ue(-2.0, 2.0), ur(0.2, 3.0), ug(0.0, 3.0);
    for (int k = 0; k < 10; ++k) {
        const auto hk = analog(GeneratorClassTag::Hyperbolic, ug(rng));
        const double e = ue(rng), a = ur(rng), b = ur(rng);
        const C p = green_hyperbolic(hk, e, a, b, GreenKind::Retarded).value;
        const C m = green_hyperbolic(hk, e, a, b, GreenKind::Advanced).value;
        CHECK(rel(m, std::conj(p)) < 1e-10);
    }
}

TEST_CASE("elliptic continuation gives the oscillator resolvent") {
    const auto a = analog(GeneratorClassTag::Elliptic, 0.0);
    const double E = 1.2, src = 0.7;
    const auto col = fd_green(a, E, 1e-6, RadialGrid{1e-3, 12.0, 12000}, src, GreenKind::Retarded);
    const double rs = col.r[col.source];
    for (double rp : {0.3, 1.2, 2.0, 3.0}) {
        std::size_t i = 0;
        while (col.r[i] < rp) ++i;
        CHECK(std::abs(col.g[i].real() - green_elliptic(a, E, rs, col.r[i])) < 0.02 * std::abs(green_elliptic(a, E, rs, col.r[i])));
    }
    CHECK_THROWS_AS(green_elliptic(a, 0.75, 1.0, 1.0), PoleError);
}

TEST_CASE("Hille-Hardy series") {
    const auto a = analog(GeneratorClassTag::Elliptic, 0.0, 1);
    PropagatorQuery q;
    q.params = params(0.0, 1, 0);
    q.analog = a;
    q.schedule = Schedule::Euclidean;
    const C K = propagator(q);
    const auto s = spectral_series_elliptic(a, 1.0, 1.0, 1.0, 200);
    CHECK(rel(s.value, K) < 1e-8);
    CHECK(s.last_term < 1e-30);

    // ground state dominance
    const auto l = spectral_series_elliptic(a, 0.9, 1.4, 40.0, 200);
    const double g0 = std::exp(-0.75 * 40.0) * elliptic_eigenfunction(a, 0, 0.9) * elliptic_eigenfunction(a, 0, 1.4);
    CHECK(l.value.real() / g0 == doctest::Approx(1.0).epsilon(1e-12));

    // every term is positive at coincident points
    for (int n = 1; n <= 30; ++n) {
        const auto p = spectral_series_elliptic(a, 1.3, 1.3, 0.5, n);
        if (n > 1) {
            const auto prev = spectral_series_elliptic(a, 1.3, 1.3, 0.5, n - 1);
            CHECK(p.value.real() >= prev.value.real());
        }
    }
}
