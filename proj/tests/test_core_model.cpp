#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cqm/core_model.hpp"
#include "cqm/errors.hpp"
#include "cqm/oracle.hpp"
#include "cqm/spectra.hpp"

using namespace cqm;

namespace {

constexpr double pi = std::numbers::pi;

PhysicalParams params(double g, int d, int l) {
    PhysicalParams p;
    p.coupling = g;
    p.dim = d;
    p.ell = l;
    return p;
}

// fourth-order central difference
template <class F>
double deriv(F f, double t, double h) {
    return (8.0 * (f(t + h) - f(t - h)) - (f(t + 2 * h) - f(t - 2 * h))) / (12.0 * h);
}

}  // namespace

TEST_CASE("classify examples") {
    auto c = classify({0.5, 0.0, 0.5}, 0.0);
    CHECK(c.discriminant == -1.0);
    CHECK(c.class_tag == GeneratorClassTag::Elliptic);
    CHECK(c.omega_mag == 0.5);
    CHECK(c.sigma == 1);

    c = classify({1.0, 0.0, 0.0}, 0.0);
    CHECK(c.discriminant == 0.0);
    CHECK(c.class_tag == GeneratorClassTag::Parabolic);
    CHECK(c.omega_mag == 0.0);
    CHECK(c.sigma == 1);

    c = classify({0.5, 0.0, -0.5}, 0.0);
    CHECK(c.discriminant == 1.0);
    CHECK(c.class_tag == GeneratorClassTag::Hyperbolic);
    CHECK(c.omega_mag == 0.5);
    CHECK(c.sigma == 1);

    c = classify({0.0, 1.0, 0.0}, 1.0);
    CHECK(c.discriminant == 1.0);
    CHECK(c.class_tag == GeneratorClassTag::Hyperbolic);
    CHECK(c.sigma == 1);
    CHECK_FALSE(c.sigma_flagged);

    // D at t_ref = 0 sits on the root of f_G
    c = classify({0.0, 1.0, 0.0}, 0.0);
    CHECK(c.sigma == 0);
    CHECK(c.sigma_flagged);
    CHECK(reduce_to_analog({0.0, 1.0, 0.0}, {}).spectral_sign() == 1);

    c = classify({-2.0, 0.0, -1.0});
    CHECK(c.sigma == -1);
    CHECK(c.class_tag == GeneratorClassTag::Elliptic);

    CHECK_THROWS_AS(GeneratorSpec{}.validate(), DomainError);
}

TEST_CASE("canonical names") {
    CHECK(canonical_name({2.0, 0.0, 0.0}) == "H");
    CHECK(canonical_name({0.0, 0.0, 3.0}) == "K");
    CHECK(canonical_name({0.0, 1.0, 0.0}) == "D");
    CHECK(canonical_name({0.5, 0.0, 0.5}) == "R");
    CHECK(canonical_name({0.5, 0.0, -0.5}) == "S'");
    CHECK(canonical_name({-0.5, 0.0, 0.5}) == "S");
    CHECK_FALSE(canonical_name({1.0, 0.3, 0.5}).has_value());
    CHECK(equivalent_operator(GeneratorClassTag::Parabolic) == "sigma*H");
}

TEST_CASE("conformal_index examples") {
    CHECK(conformal_index(params(0.0, 3, 0)) == 0.5);
    CHECK(conformal_index(params(2.0, 3, 0)) == 1.5);
    CHECK(conformal_index(params(0.0, 1, 0)) == 0.5);
    CHECK_THROWS_AS(conformal_index(params(-1.0, 3, 0)), StrongCouplingError);
    // nu exact for every dimension
    for (int d = 1; d <= 12; ++d) CHECK(params(0.0, d, 0).nu() == d / 2.0 - 1.0);
    CHECK(conformal_index(params(0.0, 2, 0)) == 0.0);
    CHECK(conformal_index(params(0.0, 3, 2)) == 2.5);
}

TEST_CASE("effective_time examples") {
    CHECK(effective_time({0.5, 0.0, 0.5}, 1.0) == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK(effective_time({1.0, 0.0, 0.0}, 7.0) == 7.0);
    CHECK(effective_time({0.5, 0.0, -0.5}, 0.5) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
    CHECK_THROWS_AS(effective_time({0.5, 0.0, -0.5}, 2.0), SingularTimeError);
    CHECK(effective_time({0.5, 0.0, 0.5}, 0.0) == 0.0);
    // elliptic beyond the principal arctan branch
    CHECK(effective_time({0.5, 0.0, 0.5}, 1e6) == doctest::Approx(pi).epsilon(1e-6));

    const TimeMap m = time_map({0.5, 0.0, -0.5});
    REQUIRE(m.roots.size() == 2);
    CHECK(m.branch_lo == -1.0);
    CHECK(m.branch_hi == 1.0);
    for (double r : m.roots) CHECK(GeneratorSpec{0.5, 0.0, -0.5}.f(r) == doctest::Approx(0.0));
}

TEST_CASE("effective_time derivative is 1/f_G") {
    std::mt19937 rng(3);
    struct Case {
        GeneratorSpec s;
        double lo, hi;
    };
    const Case cases[] = {
        {{0.5, 0.0, 0.5}, -5.0, 5.0},   {{1.3, 0.4, 0.7}, -4.0, 4.0}, {{1.0, 0.0, 0.0}, -5.0, 5.0},
        {{1.0, 2.0, 1.0}, -0.9, 5.0},   {{2.0, 1.0, 0.0}, -1.9, 5.0}, {{0.5, 0.0, -0.5}, -0.95, 0.95},
        {{1.0, 1.0, -2.0}, -0.45, 0.95},
    };
    for (const auto& c : cases) {
        std::uniform_real_distribution<double> ut(c.lo, c.hi);
        for (int k = 0; k < 50; ++k) {
            const double t = ut(rng), h = 1e-4;
            const double d = deriv([&](double s) { return effective_time(c.s, s); }, t, h);
            CHECK(std::abs(d * c.s.f(t) - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("effective_time is increasing where f_G > 0") {
    for (GeneratorSpec s : {GeneratorSpec{0.5, 0.0, 0.5}, GeneratorSpec{0.5, 0.0, -0.5}, GeneratorSpec{1.0, 2.0, 1.0}}) {
        const TimeMap m = time_map(s);
        const double lo = std::max(m.branch_lo, -3.0) + 1e-3, hi = std::min(m.branch_hi, 3.0) - 1e-3;
        double prev = effective_time(s, lo);
        for (int i = 1; i <= 400; ++i) {
            const double t = lo + (hi - lo) * i / 400.0;
            const double cur = effective_time(s, t);
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("elliptic class is invariant under t_ref") {
    const GeneratorSpec s{0.5, 0.0, 0.5};
    for (double t : {-10.0, -1.0, 0.0, 0.3, 7.0}) {
        const auto c = classify(s, t);
        CHECK(c.class_tag == GeneratorClassTag::Elliptic);
        CHECK(c.sigma == 1);
        CHECK(c.omega_mag == 0.5);
    }
}

TEST_CASE("canonical_transform") {
    const PhysicalParams p;
    // identity for H
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 20; ++k) {
        const std::vector<double> Q{u(rng), u(rng)}, P{u(rng), u(rng)};
        const double t = u(rng);
        const auto r = canonical_transform({1.0, 0.0, 0.0}, Q, P, t, p);
        CHECK(r.q == Q);
        CHECK(r.mom == P);
        CHECK(r.tau == t);
    }

    auto r = canonical_transform({0.5, 0.0, 0.5}, {1.0}, {0.0}, 0.0, p);
    CHECK(r.q[0] == doctest::Approx(std::sqrt(2.0)));
    CHECK(r.mom[0] == 0.0);
    CHECK(r.tau == 0.0);

    CHECK_THROWS_AS(canonical_transform({0.5, 0.0, -0.5}, {1.0}, {1.0}, 1.0, p), SingularTimeError);
}

TEST_CASE("canonical momentum equals M dq/dtau along a trajectory") {
    // classical motion under H = P^2/2M + hbar^2 g / (2 M Q^2), integrated by RK4 in t
    PhysicalParams p;
    p.mass = 1.3;
    p.coupling = 0.8;
    const GeneratorSpec s{0.5, 0.0, -0.5};
    const double Q0 = 1.0, P0 = 1.0, t0 = 0.5;
    auto rhs = [&](double Q, double P, double& dQ, double& dP) {
        dQ = P / p.mass;
        dP = p.hbar * p.hbar * p.coupling / (p.mass * Q * Q * Q);
    };
    auto evolve = [&](double dt) {
        double Q = Q0, P = P0;
        const int n = 200;
        const double h = dt / n;
        for (int i = 0; i < n; ++i) {
            double k1q, k1p, k2q, k2p, k3q, k3p, k4q, k4p;
            rhs(Q, P, k1q, k1p);
            rhs(Q + 0.5 * h * k1q, P + 0.5 * h * k1p, k2q, k2p);
            rhs(Q + 0.5 * h * k2q, P + 0.5 * h * k2p, k3q, k3p);
            rhs(Q + h * k3q, P + h * k3p, k4q, k4p);
            Q += h / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q);
            P += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        }
        return std::pair{Q, P};
    };
    const double dt = 1e-4;
    const auto [Qp, Pp] = evolve(dt);
    const auto [Qm, Pm] = evolve(-dt);
    const auto rp = canonical_transform(s, {Qp}, {Pp}, t0 + dt, p);
    const auto rm = canonical_transform(s, {Qm}, {Pm}, t0 - dt, p);
    const auto r0 = canonical_transform(s, {Q0}, {P0}, t0, p);
    const double dq_dtau = (rp.q[0] - rm.q[0]) / (rp.tau - rm.tau);
    CHECK(std::abs(p.mass * dq_dtau - r0.mom[0]) < 1e-6);

    // direct substitution, f = 0.375, fdot = -0.5
    const double f = 0.375, fd = -0.5;
    CHECK(r0.mom[0] == doctest::Approx(std::sqrt(f) * (P0 - fd / (2 * f) * p.mass * Q0)).epsilon(1e-15));
    CHECK(r0.q[0] == doctest::Approx(Q0 / std::sqrt(f)).epsilon(1e-15));
}

TEST_CASE("dimensional_params") {
    auto d = dimensional_params({0.5, 0.0, 0.5});
    CHECK(d.a == doctest::Approx(1.0));
    CHECK(d.omega_hat == doctest::Approx(1.0));
    d = dimensional_params({1.0, 0.0, 0.5});
    CHECK(d.a == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(dimensional_params({0.0, 1.0, 0.0}), NotApplicableError);
    CHECK_THROWS_AS(dimensional_params({1.0, 0.0, 0.0}), NotApplicableError);
}

TEST_CASE("reduce_to_analog") {
    const PhysicalParams p = params(0.0, 1, 0);
    auto a = reduce_to_analog({0.5, 0.0, 0.5}, p);
    CHECK(a.class_tag == GeneratorClassTag::Elliptic);
    CHECK(a.scale == 1.0);
    CHECK(a.omega_mag == 0.5);
    CHECK(a.mu == 0.5);

    a = reduce_to_analog({1.0, 0.0, 0.0}, p);
    CHECK(a.class_tag == GeneratorClassTag::Parabolic);
    CHECK(a.scale == 1.0);
    CHECK(a.omega_mag == 0.0);

    a = reduce_to_analog({2.0, 0.0, 2.0}, p);
    CHECK(classify({2.0, 0.0, 2.0}).discriminant == -16.0);
    CHECK(a.scale == 4.0);
    CHECK(a.omega_mag == 0.5);
}

TEST_CASE("reduced ladder times scale matches the oscillator at the full frequency") {
    // (2,0,2) is 4 R; the analog ladder times 4 must be the spectrum of H at omega = 2
    const PhysicalParams p = params(0.0, 1, 0);
    const auto a = reduce_to_analog({2.0, 0.0, 2.0}, p);
    const auto levels = elliptic_levels(a, 3);
    const auto full = make_analog(GeneratorClassTag::Elliptic, p, 2.0);
    const auto fd = fd_spectrum(full, RadialGrid::from_origin(2.5e-4, 8.0), 4);
    for (int n = 0; n < 4; ++n) CHECK(std::abs(levels[n].energy - fd[n]) < 1e-3);
}

TEST_CASE("homogeneity under positive rescaling") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0), uc(0.1, 5.0);
    const PhysicalParams p = params(0.3, 3, 1);
    int elliptic = 0;
    for (int k = 0; k < 100; ++k) {
        GeneratorSpec s{u(rng), u(rng), u(rng)};
        if (s.u == 0.0) continue;
        const double c = uc(rng);
        const GeneratorSpec cs{c * s.u, c * s.v, c * s.w};
        const auto g1 = classify(s), g2 = classify(cs);
        CHECK(std::abs(g2.discriminant - c * c * g1.discriminant) <= 1e-13 * std::abs(c * c * g1.discriminant) + 1e-15);
        CHECK(g2.sigma == g1.sigma);
        CHECK(g2.class_tag == g1.class_tag);
        const auto a1 = reduce_to_analog(s, p), a2 = reduce_to_analog(cs, p);
        if (a1.class_tag != GeneratorClassTag::Parabolic) CHECK(a2.scale == doctest::Approx(c * a1.scale).epsilon(1e-13));
        if (a1.class_tag == GeneratorClassTag::Elliptic) {
            ++elliptic;
            const auto l1 = elliptic_levels(a1, 4), l2 = elliptic_levels(a2, 4);
            for (int n = 0; n < 5; ++n) CHECK(l2[n].energy == doctest::Approx(c * l1[n].energy).epsilon(1e-13));
        }
    }
    CHECK(elliptic > 10);
}
