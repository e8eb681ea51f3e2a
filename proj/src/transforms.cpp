#include "cqm/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cqm/errors.hpp"
#include "cqm/propagators.hpp"
#include "cqm/quadrature.hpp"

namespace cqm {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

struct Node {
    double t, w;
};

// Gauss-Legendre nodes for consecutive panels [edges[k], edges[k+1]].
std::vector<Node> panel_nodes(const std::vector<double>& edges, int n) {
    const quad::Rule& r = quad::gauss_legendre(n);
    std::vector<Node> out;
    out.reserve((edges.size() - 1) * r.x.size());
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double c = 0.5 * (edges[k] + edges[k + 1]), h = 0.5 * (edges[k + 1] - edges[k]);
        for (std::size_t i = 0; i < r.x.size(); ++i) out.push_back({c + h * r.x[i], h * r.w[i]});
    }
    return out;
}

std::vector<double> uniform_edges(double a, double b, long n) {
    std::vector<double> e(n + 1);
    for (long k = 0; k <= n; ++k) e[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n);
    return e;
}

// Neville extrapolation of (eps_i, f_i) to eps = 0 using the last m points.
template <class T>
T extrapolate(const std::vector<double>& eps, const std::vector<T>& f, std::size_t m) {
    const std::size_t n = eps.size(), s = n - m;
    T acc{};
    for (std::size_t i = s; i < n; ++i) {
        double l = 1.0;
        for (std::size_t j = s; j < n; ++j)
            if (j != i) l *= eps[j] / (eps[j] - eps[i]);
        acc += l * f[i];
    }
    return acc;
}

TransformResult finish(const std::vector<double>& eps, const std::vector<Complex>& vals, const QuadratureSpec& q,
                       const char* who) {
    TransformResult out;
    out.ladder = vals;
    const std::size_t n = eps.size();
    if (n == 1) {
        out.value = vals[0];
        out.residual = std::abs(vals[0]);
    } else {
        out.value = extrapolate(eps, vals, n);
        out.residual = std::abs(out.value - extrapolate(eps, vals, n - 1));
    }
    if (!std::isfinite(std::abs(out.value)) || out.residual > std::max(q.residual_rel * std::abs(out.value), q.residual_abs))
        throw NonConvergence(std::string(who) + ": damping extrapolation residual exceeds tolerance");
    return out;
}

void require_continuous(GeneratorClassTag tag, const AnalogOscillator& a, const char* who) {
    if (tag == GeneratorClassTag::Elliptic)
        throw ClassMismatchError(std::string(who) + ": needs a continuous-spectrum class");
    if (a.class_tag != tag) throw ClassMismatchError(std::string(who) + ": analog class differs from class_tag");
}

// --- parabolic: contour 0 -> -i tau0 -> +-inf - i tau0 ---

struct ParabolicLegs {
    // leg 1: T = -i tau, with weights already including dT
    std::vector<double> tau;
    std::vector<Complex> k1w;
    // leg 2: T = +-t - i tau0
    std::vector<double> t;
    std::vector<Complex> k2w;
    double tau0 = 0.0;
};

ParabolicLegs parabolic_legs(const PhysicalParams& p, double E, double r_in, double r_out, const QuadratureSpec& q,
                             int direction) {
    const double M = p.mass, hb = p.hbar, mu = conformal_index(p);
    ParabolicLegs L;
    L.tau0 = 0.5 * hb / std::max(std::abs(E), 1.0);
    // tau = s^2 removes the tau^{-1/2} endpoint behaviour at coincident radii
    const double smax = std::sqrt(L.tau0);
    for (const Node& nd : panel_nodes(uniform_edges(0.0, smax, 4), q.gl_nodes)) {
        const double tau = nd.t * nd.t;
        const Complex k = kernel_complex_time(GeneratorClassTag::Parabolic, M, hb, mu, 0.0, r_in, r_out, Complex(0.0, -tau));
        L.tau.push_back(tau);
        L.k1w.push_back(k * Complex(0.0, -1.0) * (2.0 * nd.t * nd.w));
    }
    const double eps_min = *std::min_element(q.damping_eps.begin(), q.damping_eps.end());
    const double tmax = q.t_max > 0.0 ? q.t_max : 40.0 * hb / eps_min;
    std::vector<double> edges;
    if (q.n_panels > 0) {
        edges = uniform_edges(0.0, tmax, q.n_panels);
    } else {
        // panel width follows e^{iEt} and, near t = 0, the kernel's own phase A/|T|
        const double base = kPi * hb / std::max(std::abs(E), 1.0);
        const double A = M * (r_in * r_in + r_out * r_out) / (2.0 * hb) + 1e-300;
        edges.push_back(0.0);
        while (edges.back() < tmax) {
            const double t = edges.back();
            const double w = std::min(base, 20.0 * (t * t + L.tau0 * L.tau0) / A);
            edges.push_back(std::min(tmax, t + w));
        }
    }
    for (const Node& nd : panel_nodes(edges, q.gl_nodes)) {
        const Complex T(direction * nd.t, -L.tau0);
        L.t.push_back(nd.t);
        L.k2w.push_back(kernel_complex_time(GeneratorClassTag::Parabolic, M, hb, mu, 0.0, r_in, r_out, T) * nd.w);
    }
    return L;
}

// int_0^{-i tau0} e^{i(E + i s eps)T/hbar} K dT for damping sign s
Complex leg1(const ParabolicLegs& L, double E, double eps, double hb) {
    Complex acc = 0.0;
    const Complex e(E, eps);
    for (std::size_t i = 0; i < L.tau.size(); ++i) acc += std::exp(e * L.tau[i] / hb) * L.k1w[i];
    return acc;
}

// int over T = direction * t - i tau0 of e^{i e T/hbar} K dt, with e = E + i s eps
Complex leg2(const ParabolicLegs& L, Complex e, int direction, double hb) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < L.t.size(); ++i) {
        const Complex T(direction * L.t[i], -L.tau0);
        acc += std::exp(kI * e * T / hb) * L.k2w[i];
    }
    return acc;
}

// --- hyperbolic: zeta = omega T ---

Complex hyp_integrand(const PhysicalParams& p, const AnalogOscillator& a, double r_in, double r_out, double kappa,
                      Complex zeta) {
    const double w = a.omega_mag;
    const Complex k = kernel_complex_time(GeneratorClassTag::Hyperbolic, p.mass, p.hbar, conformal_index(p), w, r_in,
                                          r_out, zeta / w);
    return std::exp(2.0 * kI * kappa * zeta) * k;
}

std::vector<double> hyp_edges(double a, double b, double kappa, const QuadratureSpec& q) {
    if (q.n_panels > 0) return uniform_edges(a, b, q.n_panels);
    const double width = std::min(0.5, kPi / (2.0 * std::abs(kappa) + 1.0));
    return uniform_edges(a, b, std::max(1L, static_cast<long>(std::ceil((b - a) / width))));
}

void check_offset(double c) {
    if (!(c > -0.5 * kPi && c < 0.0)) throw ContourError("contour_offset must lie in (-pi/2, 0)");
}

}  // namespace

void QuadratureSpec::validate() const {
    if (t_max < 0.0) throw DomainError("QuadratureSpec: t_max must be nonnegative");
    if (n_panels < 0) throw DomainError("QuadratureSpec: n_panels must be nonnegative");
    if (damping_eps.empty()) throw DomainError("QuadratureSpec: damping_eps ladder is empty");
    for (std::size_t i = 0; i < damping_eps.size(); ++i) {
        if (!(damping_eps[i] > 0.0)) throw DomainError("QuadratureSpec: damping_eps entries must be positive");
        if (i > 0 && !(damping_eps[i] < damping_eps[i - 1]))
            throw DomainError("QuadratureSpec: damping_eps must be strictly decreasing");
    }
    if (gl_nodes < 2 || gl_nodes > 256) throw DomainError("QuadratureSpec: gl_nodes out of range");
}

TransformResult fourier_invert(GeneratorClassTag tag, const PhysicalParams& params, const AnalogOscillator& analog,
                               double E, double r_in, double r_out, const QuadratureSpec& q) {
    q.validate();
    params.validate();
    require_continuous(tag, analog, "fourier_invert");
    if (!(r_in > 0.0) || !(r_out > 0.0)) throw DomainError("fourier_invert: radii must be positive");
    const double hb = params.hbar;
    if (tag == GeneratorClassTag::Parabolic) {
        // folded form (1/pi hbar) Re int_0^inf, relying on K(-T) = conj K(T)
        const ParabolicLegs L = parabolic_legs(params, E, r_in, r_out, q, +1);
        std::vector<Complex> vals;
        for (double eps : q.damping_eps) {
            const Complex I = leg1(L, E, eps, hb) + leg2(L, Complex(E, eps), +1, hb);
            vals.push_back(I.real() / (kPi * hb));
        }
        return finish(q.damping_eps, vals, q, "fourier_invert");
    }
    check_offset(q.contour_offset);
    const double w = analog.omega_mag;
    const double kappa = E / (2.0 * hb * w);
    const double tmax = q.t_max > 0.0 ? q.t_max : 40.0;
    Complex acc = 0.0;
    for (const Node& nd : panel_nodes(hyp_edges(-tmax, tmax, kappa, q), q.gl_nodes))
        acc += nd.w * hyp_integrand(params, analog, r_in, r_out, kappa, Complex(nd.t, q.contour_offset));
    TransformResult out;
    out.value = acc / (2.0 * kPi * hb * w);
    return out;
}

TransformResult half_line_transform(GeneratorClassTag tag, const PhysicalParams& params,
                                    const AnalogOscillator& analog, double E, double r_in, double r_out,
                                    GreenKind kind, const QuadratureSpec& q) {
    q.validate();
    params.validate();
    require_continuous(tag, analog, "half_line_transform");
    if (!(r_in > 0.0) || !(r_out > 0.0)) throw DomainError("half_line_transform: radii must be positive");
    const double hb = params.hbar;
    const bool ret = kind == GreenKind::Retarded;
    if (tag == GeneratorClassTag::Parabolic) {
        const int dir = ret ? 1 : -1;
        const ParabolicLegs L = parabolic_legs(params, E, r_in, r_out, q, dir);
        std::vector<Complex> vals;
        for (double eps : q.damping_eps) {
            // E + i eps for T > 0, E - i eps for T < 0
            const double se = ret ? eps : -eps;
            const Complex l1 = leg1(L, E, se, hb), l2 = leg2(L, Complex(E, se), dir, hb);
            // along the real axis T < 0 is reached as (-inf - i tau0) -> -i tau0 -> 0
            const Complex I = ret ? l1 + l2 : l2 - l1;
            vals.push_back((ret ? 1.0 : -1.0) * I / (kI * hb));
        }
        return finish(q.damping_eps, vals, q, "half_line_transform");
    }
    check_offset(q.contour_offset);
    const double c = q.contour_offset;
    const double w = analog.omega_mag;
    const double kappa = E / (2.0 * hb * w);
    const double tmax = q.t_max > 0.0 ? q.t_max : 40.0;
    // leg 1: zeta = -i sigma^2 from 0 to i c
    Complex l1 = 0.0;
    for (const Node& nd : panel_nodes(uniform_edges(0.0, std::sqrt(-c), 4), q.gl_nodes)) {
        const Complex zeta(0.0, -nd.t * nd.t);
        l1 += nd.w * Complex(0.0, -2.0 * nd.t) * hyp_integrand(params, analog, r_in, r_out, kappa, zeta);
    }
    Complex l2 = 0.0;
    const std::vector<double> edges = ret ? hyp_edges(0.0, tmax, kappa, q) : hyp_edges(-tmax, 0.0, kappa, q);
    for (const Node& nd : panel_nodes(edges, q.gl_nodes))
        l2 += nd.w * hyp_integrand(params, analog, r_in, r_out, kappa, Complex(nd.t, c));
    TransformResult out;
    const Complex I = ret ? l1 + l2 : l2 - l1;
    out.value = (ret ? 1.0 : -1.0) * I / (kI * hb * w);
    return out;
}

double hermiticity_defect(GeneratorClassTag tag, const PhysicalParams& params, const AnalogOscillator& analog,
                          double r_in, double r_out, const std::vector<double>& times) {
    require_continuous(tag, analog, "hermiticity_defect");
    PropagatorQuery pq;
    pq.params = params;
    pq.analog = analog;
    pq.r_in = r_in;
    pq.r_out = r_out;
    pq.schedule = Schedule::RealTime;
    double worst = 0.0;
    for (double T : times) {
        pq.time = T;
        const Complex kp = propagator(pq);
        pq.time = -T;
        const Complex km = propagator(pq);
        worst = std::max(worst, std::abs(km - std::conj(kp)) / std::max(std::abs(kp), 1e-300));
    }
    return worst;
}

}  // namespace cqm
