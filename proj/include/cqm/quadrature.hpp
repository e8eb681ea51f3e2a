#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <type_traits>
#include <vector>

#include "cqm/errors.hpp"

namespace cqm::quad {

struct Rule {
    std::vector<double> x;  // nodes on [-1, 1]
    std::vector<double> w;
};

// Gauss-Legendre rule with n nodes; computed once per n and cached.
const Rule& gauss_legendre(int n);

template <class F>
using result_t = std::invoke_result_t<F&, double>;

template <class F>
result_t<F> integrate_gl(F&& f, double a, double b, int n = 64) {
    const Rule& r = gauss_legendre(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    result_t<F> s{};
    for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(c + h * r.x[i]);
    return s * h;
}

// Fixed panels of at most `width`, n nodes each.
template <class F>
result_t<F> integrate_panels(F&& f, double a, double b, double width, int n = 64) {
    if (!(b > a)) return result_t<F>{};
    const long np = std::max(1L, static_cast<long>(std::ceil((b - a) / width)));
    const double step = (b - a) / static_cast<double>(np);
    result_t<F> s{};
    for (long k = 0; k < np; ++k) s += integrate_gl(f, a + k * step, a + (k + 1) * step, n);
    return s;
}

namespace detail {
template <class F>
result_t<F> adapt(F& f, double a, double b, result_t<F> whole, double tol, int depth, int n) {
    const double m = 0.5 * (a + b);
    const result_t<F> l = integrate_gl(f, a, m, n), r = integrate_gl(f, m, b, n);
    const result_t<F> both = l + r;
    if (std::abs(both - whole) <= tol || depth <= 0) return both;
    return adapt(f, a, m, l, 0.5 * tol, depth - 1, n) + adapt(f, m, b, r, 0.5 * tol, depth - 1, n);
}
}  // namespace detail

// Deterministic bisection on a Gauss-Legendre pair; tol is absolute.
template <class F>
result_t<F> integrate_adaptive(F&& f, double a, double b, double tol, int n = 20, int max_depth = 40) {
    const result_t<F> whole = integrate_gl(f, a, b, n);
    return detail::adapt(f, a, b, whole, tol, max_depth, n);
}

// Double-exponential (exp-sinh) rule on [0, inf): x = scale*exp(pi/2 sinh t).
// Tolerates integrable endpoint singularities at 0; the integrand must decay at infinity.
template <class F>
result_t<F> integrate_half_line_de(F&& f, double scale, double rel_tol = 1e-14, double t_max = 5.0) {
    using R = result_t<F>;
    constexpr double hp = 0.5 * std::numbers::pi;
    auto term = [&](double t) -> R {
        const double e = hp * std::sinh(t);
        if (e > 700.0) return R{};
        const double x = scale * std::exp(e);
        if (x == 0.0) return R{};
        const double wt = scale * hp * std::cosh(t) * std::exp(e);
        const R v = f(x);
        return v * wt;
    };
    double h = 0.5;
    R sum = term(0.0);
    for (int k = 1; k * h <= t_max; ++k) sum += term(k * h) + term(-k * h);
    R prev = sum * h;
    for (int level = 0; level < 9; ++level) {
        // add midpoints of the current grid
        for (int k = 0; (k + 0.5) * h <= t_max; ++k) sum += term((k + 0.5) * h) + term(-(k + 0.5) * h);
        h *= 0.5;
        const R cur = sum * h;
        if (std::abs(cur - prev) <= rel_tol * std::abs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace cqm::quad
