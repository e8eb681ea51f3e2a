#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cqm/errors.hpp"
#include "cqm/oracle.hpp"
#include "cqm/propagators.hpp"
#include "cqm/quadrature.hpp"
#include "cqm/specfun.hpp"
#include "cqm/spectra.hpp"

using namespace cqm;
using C = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;

PhysicalParams params(double g, int d, int l = 0) {
    PhysicalParams p;
    p.coupling = g;
    p.dim = d;
    p.ell = l;
    return p;
}

double rel(C a, C b) { return std::abs(a - b) / std::abs(b); }

double euclid(const AnalogOscillator& a, const PhysicalParams& p, double r_in, double r_out, double T) {
    PropagatorQuery q;
    q.params = p;
    q.analog = a;
    q.schedule = Schedule::Euclidean;
    q.r_in = r_in;
    q.r_out = r_out;
    q.time = T;
    return propagator(q).real();
}

double slope(const std::vector<int>& n, const std::vector<double>& e) {
    return -std::log(e.back() / e.front()) / std::log(static_cast<double>(n.back()) / n.front());
}

}  // namespace

TEST_CASE("finite-difference ladder") {
    for (int l : {0, 1}) {
        const auto p = params(0.0, 3, l);
        const auto a = make_analog(GeneratorClassTag::Elliptic, p, 0.5);
        const auto ev = fd_spectrum(a, RadialGrid::from_origin(5e-4, 25.0), 6);
        REQUIRE(ev.size() == 6);
        for (int n = 0; n < 6; ++n) {
            CAPTURE(n);
            CHECK(std::abs(ev[n] - 0.5 * (1.0 + a.mu + 2.0 * n)) < 1e-3);
        }
    }
}

TEST_CASE("finite-difference ladder converges at second order") {
    const auto a = make_analog(GeneratorClassTag::Elliptic, params(0.0, 3, 1), 0.5);
    const double exact = 0.5 * (2.5 + 2.0 * 3);
    const double e1 = std::abs(fd_spectrum(a, RadialGrid::from_origin(1e-2, 20.0), 4)[3] - exact);
    const double e2 = std::abs(fd_spectrum(a, RadialGrid::from_origin(5e-3, 20.0), 4)[3] - exact);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("QL agrees with bisection") {
    // discrete Laplacian: 2 - 2 cos(k pi / (n + 1))
    const int n = 50;
    auto ev = tridiag_eigenvalues_ql(std::vector<double>(n, 2.0), std::vector<double>(n - 1, -1.0));
    for (int k = 1; k <= n; ++k) CHECK(ev[k - 1] == doctest::Approx(2.0 - 2.0 * std::cos(k * pi / (n + 1))).epsilon(1e-12));

    const auto a = make_analog(GeneratorClassTag::Elliptic, params(1.3, 3, 2), 0.5);
    const RadialGrid grid = RadialGrid::from_origin(2e-2, 12.0);
    const double h = grid.h();
    std::vector<double> d(grid.n_points), o(grid.n_points - 1, -0.5 / (h * h));
    for (int i = 0; i < grid.n_points; ++i) d[i] = 1.0 / (h * h) + radial_potential(a, grid.r(i)).real();
    ev = tridiag_eigenvalues_ql(d, o);
    const auto bis = fd_spectrum(a, grid, 8);
    for (int k = 0; k < 8; ++k) CHECK(std::abs(ev[k] - bis[k]) < 1e-10 * (1.0 + std::abs(bis[k])));
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS((RadialGrid{1e-3, 1.0, 100}.validate()), DomainError);
    CHECK_THROWS_AS((RadialGrid{0.0, 1.0, 1000}.validate()), DomainError);
    CHECK_THROWS_AS((RadialGrid{2.0, 1.0, 1000}.validate()), DomainError);
    CHECK_THROWS_AS(RadialGrid::from_origin(-1.0, 2.0), DomainError);
    const RadialGrid g = RadialGrid::from_origin(1e-3, 20.0);
    CHECK(g.r_min == doctest::Approx(g.h()));
    CHECK(g.r(g.n_points - 1) == doctest::Approx(20.0));
}

TEST_CASE("complex-scaled resolvent matches the closed forms") {
    const auto p = params(0.0, 3);
    const RadialGrid grid = RadialGrid::from_origin(1e-3, 20.0);
    struct Case {
        AnalogOscillator a;
        double E;
    };
    for (const Case& c : {Case{make_analog(GeneratorClassTag::Parabolic, p, 0.0), 1.0},
                          Case{make_analog(GeneratorClassTag::Hyperbolic, p, 0.5), 0.4}}) {
        for (GreenKind k : {GreenKind::Retarded, GreenKind::Advanced}) {
            const FdGreenColumn col = fd_green(c.a, c.E, 1e-3, grid, 0.7, k);
            const double rs = col.r[col.source];
            for (double rp : {0.3, 0.7, 1.2, 2.0, 4.0, 8.0}) {
                const int i = static_cast<int>(std::lround((rp - grid.r_min) / grid.h()));
                const C ref = c.a.class_tag == GeneratorClassTag::Parabolic ? green_parabolic(c.a, c.E, rs, col.r[i], k).value
                                                                            : green_hyperbolic(c.a, c.E, rs, col.r[i], k).value;
                CAPTURE(rp);
                CHECK(rel(col.g[i], ref) < 0.02);
            }
            const auto y = fd_apply(c.a, c.E, 1e-3, grid, k, col.g);
            double res = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i)
                res = std::max(res, std::abs(y[i] * grid.h() - (static_cast<int>(i) == col.source ? 1.0 : 0.0)));
            CHECK(res < 1e-8);
        }
    }
}

TEST_CASE("commutators on the grid") {
    const auto p = params(0.0, 3);
    const CommutatorReport r1 = commutator_check(p, RadialGrid{0.5, 5.5, 5001});
    CHECK(r1.dh < 1e-3);
    CHECK(r1.dk < 1e-3);
    CHECK(r1.hk < 1e-3);
    const CommutatorReport r2 = commutator_check(p, RadialGrid{0.5, 5.5, 10001});
    CHECK(r1.dh / r2.dh == doctest::Approx(4.0).epsilon(0.15));
    // the coupling only moves the centrifugal term
    const CommutatorReport r3 = commutator_check(params(2.0, 3), RadialGrid{0.5, 5.5, 5001});
    CHECK(r3.dh < 1e-3);
    CHECK(r3.hk < 1e-3);
}

TEST_CASE("Numerov regular solution") {
    const auto p = params(0.0, 3, 1);
    const RadialGrid grid{1e-2, 8.0, 4000};
    const double rm = 3.0;

    SUBCASE("parabolic Bessel ratio") {
        const auto a = make_analog(GeneratorClassTag::Parabolic, p, 0.0);
        const double E = 1.0, k = std::sqrt(2.0 * E);
        const NumerovResult n = numerov_regular(a, E, grid, rm);
        const double ref_m = std::sqrt(n.match_radius) * specfun::bessel_j(a.mu, k * n.match_radius);
        double worst = 0.0;
        for (std::size_t i = 0; i < n.r.size(); i += 97) {
            const double ref = std::sqrt(n.r[i]) * specfun::bessel_j(a.mu, k * n.r[i]) / ref_m;
            worst = std::max(worst, std::abs(n.u[i] - ref));
        }
        CHECK(worst < 1e-5);
    }

    SUBCASE("hyperbolic Whittaker ratio") {
        const auto a = make_analog(GeneratorClassTag::Hyperbolic, p, 0.5);
        const double E = 0.4, c = 0.5;
        const C lam(0.0, E / (2.0 * 0.5));
        auto exact = [&](double r) { return specfun::whittaker_m_reg(lam, 0.5 * a.mu, C(0.0, -c * r * r)) / std::sqrt(r); };
        const NumerovResult n = numerov_regular(a, E, grid, rm);
        const C em = exact(n.match_radius);
        double worst = 0.0;
        for (std::size_t i = 0; i < n.r.size(); i += 97) worst = std::max(worst, std::abs(n.u[i] - exact(n.r[i]) / em));
        CHECK(worst < 1e-4);
    }

    SUBCASE("elliptic shooting brackets each level") {
        const auto a = make_analog(GeneratorClassTag::Elliptic, p, 0.5);
        const RadialGrid far{1e-2, 9.0, 6000};
        for (int lv = 0; lv <= 3; ++lv) {
            const double E = 0.5 * (1.0 + a.mu + 2.0 * lv);
            const double lo = numerov_regular(a, E - 0.05, far, 1.0).u.back();
            const double hi = numerov_regular(a, E + 0.05, far, 1.0).u.back();
            CAPTURE(lv);
            CHECK(lo * hi < 0.0);
        }
    }

    SUBCASE("fourth order") {
        const auto a = make_analog(GeneratorClassTag::Parabolic, p, 0.0);
        const double E = 1.0, k = std::sqrt(2.0 * E);
        auto err = [&](int n_points) {
            const NumerovResult n = numerov_regular(a, E, RadialGrid{0.5, 6.5, n_points}, 3.5);
            const double ref_m = std::sqrt(3.5) * specfun::bessel_j(a.mu, k * 3.5);
            return std::abs(n.u.back() - std::sqrt(6.5) * specfun::bessel_j(a.mu, k * 6.5) / ref_m);
        };
        CHECK(err(301) / err(601) == doctest::Approx(16.0).epsilon(0.15));
    }
}

TEST_CASE("Wronskian Green functions") {
    const auto p = params(0.0, 3);
    const auto ap = make_analog(GeneratorClassTag::Parabolic, p, 0.0);
    const auto ah = make_analog(GeneratorClassTag::Hyperbolic, p, 0.5);
    const auto ae = make_analog(GeneratorClassTag::Elliptic, p, 0.5);
    const double x1 = std::sqrt(2.0 * 0.9), x2 = std::sqrt(2.0 * 1.7);
    for (GreenKind k : {GreenKind::Retarded, GreenKind::Advanced}) {
        const WronskianGreen wp = wronskian_green(ap, 1.0, 0.8, 1.1, k);
        CHECK(rel(wp.value, green_parabolic(ap, 1.0, 0.8, 1.1, k).value) < 1e-8);
        CHECK(rel(wp.wronskian, wp.wronskian_analytic) < 1e-8);
        const WronskianGreen wh = wronskian_green(ah, 0.4, x1, x2, k);
        CHECK(rel(wh.value, green_hyperbolic(ah, 0.4, x1, x2, k).value) < 1e-8);
        CHECK(rel(wh.wronskian, wh.wronskian_analytic) < 1e-8);
    }
    const WronskianGreen we = wronskian_green(ae, 1.2, 0.8, 1.1, GreenKind::Retarded);
    CHECK(rel(we.value, green_elliptic(ae, 1.2, 0.8, 1.1)) < 1e-8);
    // E = 0.75 is the ground level for mu = 1/2, omega = 1/2
    CHECK_THROWS_AS(wronskian_green(ae, 0.75, 0.8, 1.1, GreenKind::Retarded), DegenerateWronskianError);
    CHECK_THROWS_AS(wronskian_green(ap, -1.0, 0.8, 1.1, GreenKind::Retarded), DomainError);
}

TEST_CASE("time-sliced kernel") {
    const auto p = params(0.0, 1);
    const auto a = make_analog(GeneratorClassTag::Elliptic, p, 0.5);
    REQUIRE(a.mu == doctest::Approx(0.5));

    SUBCASE("one slice") {
        const double eps = 0.3, v = 0.5 * 0.25 * 1.2 * 1.2;
        SliceGrid left;
        left.potential = PotentialNode::Left;
        CHECK(timesliced_propagator(a, 1.2, 0.9, eps, 1, left) == one_slice_kernel(a, 0.9, 1.2, eps));
        CHECK(timesliced_propagator(a, 1.2, 0.9, eps, 1) ==
              doctest::Approx(one_slice_kernel(a, 0.9, 1.2, eps) * std::exp(eps * v)).epsilon(1e-14));
    }

    SUBCASE("two slices against a direct integral") {
        const double T = 0.6, eps = T / 2;
        auto f = [&](double r) {
            return one_slice_kernel(a, 1.1, r, eps) * one_slice_kernel(a, r, 0.8, eps) * std::exp(eps * 0.5 * 0.25 * 0.64);
        };
        const double direct = quad::integrate_adaptive(f, 1e-12, 8.0, 1e-14);
        CHECK(timesliced_propagator(a, 0.8, 1.1, T, 2) == doctest::Approx(direct).epsilon(1e-10));
    }

    SUBCASE("first-order convergence on the diagonal") {
        const double exact = euclid(a, p, 1.0, 1.0, 1.0);
        const std::vector<int> ns{16, 32, 64, 128};
        std::vector<double> e;
        for (int n : ns) e.push_back(std::abs(timesliced_propagator(a, 1.0, 1.0, 1.0, n) - exact));
        CHECK(slope(ns, e) == doctest::Approx(1.0).epsilon(0.2));
        // leading coefficient eps (V(r') + V(r'')) / 2 hbar, relative
        CHECK(e.back() / exact == doctest::Approx(0.25 / 128).epsilon(0.05));
    }

    SUBCASE("left-node placement cancels the diagonal first-order term") {
        SliceGrid left;
        left.potential = PotentialNode::Left;
        const double exact = euclid(a, p, 1.0, 1.0, 1.0);
        const std::vector<int> ns{16, 32};
        std::vector<double> e;
        for (int n : ns) e.push_back(std::abs(timesliced_propagator(a, 1.0, 1.0, 1.0, n, left) - exact));
        CHECK(slope(ns, e) == doctest::Approx(2.0).epsilon(0.1));
    }

    CHECK_THROWS_AS(timesliced_propagator(a, 1.0, 1.0, 1.0, 0), DomainError);
    CHECK_THROWS_AS(timesliced_propagator(a, 1.0, 1.0, -1.0, 4), DomainError);
    CHECK_THROWS_AS(one_slice_kernel(a, 1.0, 1.0, 0.0), DomainError);
}

TEST_CASE("semigroup composition") {
    for (double g : {0.0, 1.5}) {
        const auto p = params(g, 3);
        for (auto [tag, w] : {std::pair{GeneratorClassTag::Elliptic, 0.5}, std::pair{GeneratorClassTag::Parabolic, 0.0},
                              std::pair{GeneratorClassTag::Hyperbolic, 0.5}}) {
            const auto a = make_analog(tag, p, w);
            const SemigroupReport r = semigroup_check(a, p, 0.9, 1.4, 0.4, 0.7);
            CAPTURE(to_string(tag));
            CHECK(r.rel_err < 1e-6);
            CHECK(r.direct == doctest::Approx(euclid(a, p, 0.9, 1.4, 1.1)).epsilon(1e-14));
        }
    }
    CHECK_THROWS_AS(semigroup_check(make_analog(GeneratorClassTag::Parabolic, params(0.0, 3), 0.0), params(0.0, 3), 1.0,
                                    1.0, 0.0, 1.0),
                    DomainError);
}
