#include "cqm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "cqm/errors.hpp"
#include "cqm/propagators.hpp"
#include "cqm/quadrature.hpp"
#include "cqm/specfun.hpp"

namespace cqm {

namespace sf = specfun;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

double class_sign(GeneratorClassTag t) {
    switch (t) {
        case GeneratorClassTag::Elliptic: return 1.0;
        case GeneratorClassTag::Parabolic: return 0.0;
        case GeneratorClassTag::Hyperbolic: return -1.0;
    }
    return 0.0;
}

// Sturm count: number of eigenvalues below x.
int sturm_count(const std::vector<double>& d, const std::vector<double>& e2, double x) {
    int count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        q = d[i] - x - (i > 0 ? e2[i - 1] / q : 0.0);
        if (q == 0.0) q = -1e-300;
        if (q < 0.0) ++count;
    }
    return count;
}

// Scaled coordinate for the absorbing layer.
struct Ecs {
    double r0 = 0.0, len = 0.0;
    Complex rot{1.0, 0.0};

    double ramp(double r) const {
        if (r <= r0) return 0.0;
        const double t = (r - r0) / len;
        return t >= 1.0 ? 1.0 : t * t * (3.0 - 2.0 * t);
    }
    double ramp_integral(double r) const {
        if (r <= r0) return 0.0;
        const double t = (r - r0) / len;
        if (t >= 1.0) return 0.5 * len + (r - r0 - len);
        return len * (t * t * t - 0.5 * t * t * t * t);
    }
    Complex z(double r) const { return r + (rot - 1.0) * ramp_integral(r); }
    Complex dz(double r) const { return 1.0 + (rot - 1.0) * ramp(r); }
};

Ecs make_ecs(const RadialGrid& g, const EcsSpec& s, GreenKind kind) {
    if (!(s.theta > 0.0 && s.theta < 0.5 * kPi)) throw DomainError("fd_green: ECS angle must lie in (0, pi/2)");
    if (!(s.start > 0.0 && s.ramp > 0.0 && s.start + s.ramp < 1.0))
        throw DomainError("fd_green: ECS layer must fit inside the grid");
    Ecs e;
    e.r0 = s.start * g.r_max;
    e.len = s.ramp * g.r_max;
    const double th = kind == GreenKind::Retarded ? s.theta : -s.theta;
    e.rot = std::polar(1.0, th);
    return e;
}

// Tridiagonal coefficients of E +- i eps - H in row i: lo * U_{i-1} + di * U_i + up * U_{i+1}.
struct Tri {
    std::vector<Complex> lo, di, up;
};

Tri build_resolvent(const AnalogOscillator& a, double E, double eps, const RadialGrid& g, GreenKind kind,
                    const EcsSpec& s) {
    g.validate();
    if (!(eps > 0.0)) throw DomainError("fd_green: epsilon must be positive");
    const Ecs ecs = make_ecs(g, s, kind);
    const int n = g.n_points;
    const double h = g.h();
    const double t = a.hbar * a.hbar / (2.0 * a.mass * h * h);
    const Complex e = E + (kind == GreenKind::Retarded ? 1.0 : -1.0) * kI * eps;
    Tri m;
    m.lo.resize(n);
    m.di.resize(n);
    m.up.resize(n);
    for (int i = 0; i < n; ++i) {
        const double r = g.r(i);
        const Complex zi = ecs.dz(r), zm = ecs.dz(r - 0.5 * h), zp = ecs.dz(r + 0.5 * h);
        const Complex cm = t / (zi * zm), cp = t / (zi * zp);
        m.lo[i] = cm;
        m.up[i] = cp;
        m.di[i] = e - cm - cp - radial_potential(a, ecs.z(r));
    }
    return m;
}

// Gaussian elimination with partial pivoting for a general tridiagonal system.
std::vector<Complex> solve_tridiagonal(Tri m, std::vector<Complex> b) {
    const std::size_t n = b.size();
    // dl[i] is the subdiagonal entry of row i+1; reused for the fill-in of row i
    std::vector<Complex> dl(n, 0.0), d = m.di, du = m.up;
    for (std::size_t i = 0; i + 1 < n; ++i) dl[i] = m.lo[i + 1];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) throw SolveError("fd_green: singular system");
            const Complex f = dl[i] / d[i];
            d[i + 1] -= f * du[i];
            b[i + 1] -= f * b[i];
            dl[i] = 0.0;
        } else {
            const Complex f = d[i] / dl[i];
            d[i] = dl[i];
            const Complex tmp = d[i + 1];
            d[i + 1] = du[i] - f * tmp;
            if (i + 2 < n) {
                dl[i] = du[i + 1];
                du[i + 1] = -f * dl[i];
            }
            du[i] = tmp;
            const Complex bt = b[i];
            b[i] = b[i + 1];
            b[i + 1] = bt - f * b[i + 1];
        }
    }
    if (d[n - 1] == 0.0) throw SolveError("fd_green: singular system");
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t k = n - 2; k-- > 0;) b[k] = (b[k] - du[k] * b[k + 1] - dl[k] * b[k + 2]) / d[k];
    for (const Complex& v : b)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw SolveError("fd_green: non-finite solution");
    return b;
}

using CVec = std::vector<Complex>;

double norm2(const CVec& v) {
    double s = 0.0;
    for (const Complex& x : v) s += std::norm(x);
    return std::sqrt(s);
}

CVec sub(const CVec& a, const CVec& b, Complex scale) {
    CVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - scale * b[i];
    return out;
}

// 8th-order central first derivative.
template <class F>
Complex deriv8(F&& f, double x, double h) {
    static constexpr double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    Complex s = 0.0;
    for (int k = 1; k <= 4; ++k) s += c[k - 1] * (f(x + k * h) - f(x - k * h));
    return s / h;
}

}  // namespace

void RadialGrid::validate() const {
    if (!(r_min > 0.0)) throw DomainError("RadialGrid: r_min must be positive");
    if (!(r_max > r_min)) throw DomainError("RadialGrid: r_max must exceed r_min");
    if (n_points < 200) throw DomainError("RadialGrid: n_points must be at least 200");
}

RadialGrid RadialGrid::from_origin(double h, double r_max) {
    if (!(h > 0.0) || !(r_max > h)) throw DomainError("RadialGrid::from_origin: need 0 < h < r_max");
    RadialGrid g;
    g.n_points = static_cast<int>(std::lround(r_max / h));
    g.r_min = h;
    g.r_max = h * g.n_points;
    return g;
}

Complex radial_potential(const AnalogOscillator& a, Complex r) {
    const double mu = a.mu;
    const Complex r2 = r * r;
    return a.hbar * a.hbar * (mu * mu - 0.25) / (2.0 * a.mass * r2) +
           class_sign(a.class_tag) * 0.5 * a.mass * a.omega_mag * a.omega_mag * r2;
}

std::vector<double> fd_spectrum(const AnalogOscillator& a, const RadialGrid& grid, int n_eigen) {
    grid.validate();
    if (n_eigen < 1 || n_eigen > grid.n_points) throw DomainError("fd_spectrum: n_eigen out of range");
    const int n = grid.n_points;
    const double h = grid.h();
    const double t = a.hbar * a.hbar / (2.0 * a.mass * h * h);
    std::vector<double> d(n), e2(n - 1, t * t);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < n; ++i) {
        d[i] = 2.0 * t + radial_potential(a, grid.r(i)).real();
        const double rad = (i > 0 ? t : 0.0) + (i + 1 < n ? t : 0.0);
        lo = std::min(lo, d[i] - rad);
        hi = std::max(hi, d[i] + rad);
    }
    std::vector<double> out;
    double floor = lo;
    for (int k = 0; k < n_eigen; ++k) {
        // smallest x with count(x) > k
        double a0 = floor, b0 = hi;
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (a0 + b0);
            if (m <= a0 || m >= b0) break;
            if (sturm_count(d, e2, m) > k)
                b0 = m;
            else
                a0 = m;
            if (b0 - a0 <= 1e-14 * std::max(1.0, std::abs(b0))) break;
        }
        out.push_back(0.5 * (a0 + b0));
        floor = a0;
    }
    return out;
}

std::vector<double> tridiag_eigenvalues_ql(std::vector<double> d, std::vector<double> e) {
    const int n = static_cast<int>(d.size());
    if (n == 0) return d;
    if (static_cast<int>(e.size()) != n - 1) throw DomainError("tridiag_eigenvalues_ql: size mismatch");
    e.push_back(0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (++iter > 60) throw ConvergenceError("tridiag_eigenvalues_ql: no convergence");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

FdGreenColumn fd_green(const AnalogOscillator& a, double E, double eps, const RadialGrid& grid, double r_source,
                       GreenKind kind, const EcsSpec& ecs) {
    Tri m = build_resolvent(a, E, eps, grid, kind, ecs);
    const double h = grid.h();
    const long j = std::lround((r_source - grid.r_min) / h);
    if (j < 1 || j >= grid.n_points - 1) throw DomainError("fd_green: source outside the grid interior");
    if (grid.r(static_cast<int>(j)) >= ecs.start * grid.r_max)
        throw DomainError("fd_green: source inside the absorbing layer");
    std::vector<Complex> b(grid.n_points, 0.0);
    b[j] = 1.0 / h;
    FdGreenColumn out;
    out.g = solve_tridiagonal(std::move(m), std::move(b));
    out.source = static_cast<int>(j);
    out.r.resize(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) out.r[i] = grid.r(i);
    return out;
}

std::vector<Complex> fd_apply(const AnalogOscillator& a, double E, double eps, const RadialGrid& grid, GreenKind kind,
                              const std::vector<Complex>& x, const EcsSpec& ecs) {
    const Tri m = build_resolvent(a, E, eps, grid, kind, ecs);
    const std::size_t n = x.size();
    if (n != static_cast<std::size_t>(grid.n_points)) throw DomainError("fd_apply: size mismatch");
    std::vector<Complex> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = m.di[i] * x[i];
        if (i > 0) y[i] += m.lo[i] * x[i - 1];
        if (i + 1 < n) y[i] += m.up[i] * x[i + 1];
    }
    return y;
}

CommutatorReport commutator_check(const PhysicalParams& p, const RadialGrid& grid) {
    grid.validate();
    p.validate();
    if (grid.r_min >= 1.0 || grid.r_max <= 5.0) throw DomainError("commutator_check: grid must cover [1, 5]");
    const int n = grid.n_points;
    const double h = grid.h(), hb = p.hbar, M = p.mass, mu = p.mu();
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = grid.r(i);
    auto at = [&](const CVec& v, int i) { return (i < 0 || i >= n) ? Complex(0.0) : v[i]; };
    auto H = [&](const CVec& v) {
        CVec o(n);
        for (int i = 0; i < n; ++i)
            o[i] = -hb * hb / (2.0 * M) * (at(v, i + 1) - 2.0 * v[i] + at(v, i - 1)) / (h * h) +
                   hb * hb * (mu * mu - 0.25) / (2.0 * M * r[i] * r[i]) * v[i];
        return o;
    };
    auto K = [&](const CVec& v) {
        CVec o(n);
        for (int i = 0; i < n; ++i) o[i] = 0.5 * M * r[i] * r[i] * v[i];
        return o;
    };
    // D0 = -(r p + p r)/4, p = -i hbar d/dr
    auto D = [&](const CVec& v) {
        CVec o(n);
        for (int i = 0; i < n; ++i) {
            const Complex dv = (at(v, i + 1) - at(v, i - 1)) / (2.0 * h);
            const double rp = i + 1 < n ? r[i + 1] : r[i] + h, rm = i > 0 ? r[i - 1] : r[i] - h;
            const Complex drv = (rp * at(v, i + 1) - rm * at(v, i - 1)) / (2.0 * h);
            o[i] = 0.25 * kI * hb * (r[i] * dv + drv);
        }
        return o;
    };
    CommutatorReport rep;
    for (double c : {2.0, 2.5, 3.0, 3.5, 4.0}) {
        CVec phi(n, 0.0);
        for (int i = 0; i < n; ++i) {
            const double t = r[i] - c;
            if (std::abs(t) < 1.0) phi[i] = std::exp(-1.0 / (1.0 - t * t));
        }
        const CVec Hp = H(phi), Kp = K(phi), Dp = D(phi);
        const CVec dh = sub(sub(D(Hp), H(Dp), 1.0), Hp, -kI * hb);
        const CVec dk = sub(sub(D(Kp), K(Dp), 1.0), Kp, kI * hb);
        const CVec hk = sub(sub(H(Kp), K(Hp), 1.0), Dp, 2.0 * kI * hb);
        rep.dh = std::max(rep.dh, norm2(dh) / norm2(Hp));
        rep.dk = std::max(rep.dk, norm2(dk) / norm2(Kp));
        rep.hk = std::max(rep.hk, norm2(hk) / norm2(Dp));
    }
    return rep;
}

NumerovResult numerov_regular(const AnalogOscillator& a, double E, const RadialGrid& grid, double match_radius) {
    grid.validate();
    const int n = grid.n_points;
    const double h = grid.h(), mu = a.mu;
    const double eps = 2.0 * a.mass * E / (a.hbar * a.hbar);
    const double gam = class_sign(a.class_tag) * std::pow(a.mass * a.omega_mag / a.hbar, 2);
    auto Q = [&](double r) { return (mu * mu - 0.25) / (r * r) + gam * r * r - eps; };
    // Frobenius series r^{mu+1/2} sum a_k r^k, k(2mu+k) a_k = -eps a_{k-2} + gam a_{k-4}
    auto seed = [&](double r) {
        double am4 = 0.0, am2 = 1.0, sum = 1.0, rk = 1.0;
        for (int k = 2; k < 400; k += 2) {
            const double ak = (-eps * am2 + gam * am4) / (k * (2.0 * mu + k));
            rk *= r * r;
            sum += ak * rk;
            am4 = am2;
            am2 = ak;
            if (std::abs(ak * rk) < 1e-18 * std::abs(sum) && k > 8) break;
        }
        return std::pow(r, mu + 0.5) * sum;
    };
    NumerovResult out;
    out.r.resize(n);
    for (int i = 0; i < n; ++i) out.r[i] = grid.r(i);
    std::vector<double> u(n), logs(n, 0.0);
    u[0] = seed(out.r[0]);
    u[1] = seed(out.r[1]);
    const double h12 = h * h / 12.0;
    double f0 = Q(out.r[0]), f1 = Q(out.r[1]), L = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        const double f2 = Q(out.r[i + 1]);
        u[i + 1] = (2.0 * u[i] * (1.0 + 5.0 * h12 * f1) - u[i - 1] * (1.0 - h12 * f0)) / (1.0 - h12 * f2);
        logs[i + 1] = L;
        if ((i + 1) % 100 == 0) {
            const double s = std::abs(u[i + 1]);
            if (s > 1e50 || (s < 1e-50 && s > 0.0)) {
                u[i + 1] /= s;
                u[i] /= s;
                L += std::log(s);
                logs[i + 1] = logs[i] = L;
            }
        }
        if (!std::isfinite(u[i + 1])) throw OverflowError("numerov_regular: overflow");
        f0 = f1;
        f1 = f2;
    }
    const double rm = match_radius > 0.0 ? match_radius : 0.5 * (grid.r_min + grid.r_max);
    const long m = std::clamp<long>(std::lround((rm - grid.r_min) / h), 0, n - 1);
    out.match_radius = out.r[m];
    if (u[m] == 0.0) throw DomainError("numerov_regular: solution vanishes at the match radius");
    out.u.resize(n);
    for (int i = 0; i < n; ++i) {
        const double v = u[i] / u[m] * std::exp(logs[i] - logs[m]);
        if (!std::isfinite(v)) throw OverflowError("numerov_regular: solution overflows relative to the match radius");
        out.u[i] = v;
    }
    return out;
}

WronskianGreen wronskian_green(const AnalogOscillator& a, double E, double r_in, double r_out, GreenKind kind) {
    if (!(r_in > 0.0) || !(r_out > 0.0)) throw DomainError("wronskian_green: radii must be positive");
    const double hb = a.hbar, M = a.mass, mu = a.mu, w = a.omega_mag;
    const double s = kind == GreenKind::Retarded ? 1.0 : -1.0;
    std::function<Complex(double)> reg, out;
    Complex w_an;
    switch (a.class_tag) {
        case GeneratorClassTag::Parabolic: {
            if (!(E > 0.0)) throw DomainError("wronskian_green: parabolic E must be positive");
            const double k = std::sqrt(2.0 * M * E) / hb;
            const int hk = kind == GreenKind::Retarded ? 1 : 2;
            reg = [=](double r) { return Complex(std::sqrt(r) * sf::bessel_j(mu, k * r)); };
            out = [=](double r) { return std::sqrt(r) * sf::hankel(hk, mu, k * r); };
            w_an = s * 2.0 * kI / kPi;
            break;
        }
        case GeneratorClassTag::Hyperbolic: {
            const double c = M * w / hb, kappa = E / (2.0 * hb * w);
            const Complex lam(0.0, s * kappa);
            reg = [=](double r) { return sf::whittaker_m_reg(lam, 0.5 * mu, Complex(0.0, -s * c * r * r)) / std::sqrt(r); };
            out = [=](double r) { return sf::whittaker_w(lam, 0.5 * mu, Complex(0.0, -s * c * r * r)) / std::sqrt(r); };
            // dz/dr / r = -2 i s c
            w_an = -2.0 * kI * s * c * -sf::rgamma(0.5 * (1.0 + mu) - lam);
            break;
        }
        case GeneratorClassTag::Elliptic: {
            const double c = M * w / hb, kappa = E / (2.0 * hb * w);
            reg = [=](double r) { return sf::whittaker_m_reg(kappa, 0.5 * mu, c * r * r) / std::sqrt(r); };
            out = [=](double r) { return sf::whittaker_w(kappa, 0.5 * mu, c * r * r) / std::sqrt(r); };
            w_an = 2.0 * c * -sf::rgamma(Complex(0.5 * (1.0 + mu) - kappa));
            break;
        }
    }
    const double rw = std::sqrt(r_in * r_out), h = 1e-2 * rw;
    const Complex u1 = reg(rw), u2 = out(rw), d1 = deriv8(reg, rw, h), d2 = deriv8(out, rw, h);
    const Complex W = u1 * d2 - d1 * u2;
    const double scale = std::abs(u1 * d2) + std::abs(d1 * u2);
    if (!(std::abs(W) > 1e-9 * scale)) throw DegenerateWronskianError("wronskian_green: vanishing Wronskian");
    const double rl = std::min(r_in, r_out), rg = std::max(r_in, r_out);
    WronskianGreen g;
    g.wronskian = W;
    g.wronskian_analytic = w_an;
    g.value = 2.0 * M / (hb * hb) * reg(rl) * out(rg) / W;
    return g;
}

namespace {

double slice_kernel(const AnalogOscillator& a, double r_next, double r_prev, double eps, bool potential) {
    const double al = a.mass / (a.hbar * eps);
    const double d = r_next - r_prev;
    // centrifugal part lives in I_mu; only the oscillator term enters here
    double ex = -0.5 * al * d * d;
    if (potential) ex -= eps * class_sign(a.class_tag) * 0.5 * a.mass * a.omega_mag * a.omega_mag * r_prev * r_prev / a.hbar;
    return al * std::sqrt(r_prev * r_next) * std::exp(ex) * sf::bessel_i_scaled(a.mu, al * r_prev * r_next);
}

}  // namespace

double one_slice_kernel(const AnalogOscillator& a, double r_next, double r_prev, double eps) {
    if (!(eps > 0.0)) throw DomainError("one_slice_kernel: eps must be positive");
    return slice_kernel(a, r_next, r_prev, eps, true);
}

double timesliced_propagator(const AnalogOscillator& a, double r_in, double r_out, double T_euclid, int n_slices,
                             const SliceGrid& grid) {
    if (!(T_euclid > 0.0)) throw DomainError("timesliced_propagator: T must be positive");
    if (n_slices < 1) throw DomainError("timesliced_propagator: need at least one slice");
    if (!(r_in > 0.0) || !(r_out > 0.0)) throw DomainError("timesliced_propagator: radii must be positive");
    const double eps = T_euclid / n_slices;
    // the first slice leaves r' unweighted unless the potential sits on left nodes
    const bool at_start = grid.potential == PotentialNode::Left;
    if (n_slices == 1) return slice_kernel(a, r_out, r_in, eps, at_start);

    const quad::Rule& rule = quad::gauss_legendre(grid.nodes);
    const int np = std::max(1, static_cast<int>(std::ceil(grid.r_max / grid.panel)));
    const double step = grid.r_max / np;
    std::vector<double> x, wt;
    for (int k = 0; k < np; ++k)
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            x.push_back((k + 0.5) * step + 0.5 * step * rule.x[i]);
            wt.push_back(0.5 * step * rule.w[i]);
        }
    const int n = static_cast<int>(x.size());
    const double al = a.mass / (a.hbar * eps);
    const double band = std::sqrt(2.0 * 60.0 / al);  // drop entries below e^{-60}

    // row i: weighted kernel entries w_j K1(x_i, x_j) for j in [lo_i, lo_i + size)
    std::vector<int> lo(n);
    std::vector<std::vector<double>> rows(n);
    for (int i = 0; i < n; ++i) {
        const int j0 = static_cast<int>(std::lower_bound(x.begin(), x.end(), x[i] - band) - x.begin());
        const int j1 = static_cast<int>(std::upper_bound(x.begin(), x.end(), x[i] + band) - x.begin());
        lo[i] = j0;
        rows[i].resize(j1 - j0);
        for (int j = j0; j < j1; ++j) rows[i][j - j0] = wt[j] * one_slice_kernel(a, x[i], x[j], eps);
    }
    std::vector<double> psi(n), next(n);
    for (int i = 0; i < n; ++i) psi[i] = slice_kernel(a, x[i], r_in, eps, at_start);
    for (int k = 2; k < n_slices; ++k) {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < rows[i].size(); ++j) s += rows[i][j] * psi[lo[i] + j];
            next[i] = s;
        }
        std::swap(psi, next);
    }
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += wt[j] * one_slice_kernel(a, r_out, x[j], eps) * psi[j];
    if (!std::isfinite(s)) throw OverflowError("timesliced_propagator: overflow");
    return s;
}

SemigroupReport semigroup_check(const AnalogOscillator& a, const PhysicalParams& p, double r_in, double r_out,
                                double T1, double T2) {
    if (!(T1 > 0.0) || !(T2 > 0.0)) throw DomainError("semigroup_check: times must be positive");
    PropagatorQuery q;
    q.params = p;
    q.analog = a;
    q.schedule = Schedule::Euclidean;
    auto K = [&](double ro, double ri, double T) {
        PropagatorQuery qq = q;
        qq.r_in = ri;
        qq.r_out = ro;
        qq.time = T;
        return propagator(qq).real();
    };
    SemigroupReport rep;
    q.r_in = r_in;
    q.r_out = r_out;
    q.time = T1 + T2;
    rep.direct = propagator(q).real();
    const double width = std::sqrt(p.hbar * (T1 + T2) / p.mass);
    const double R = std::max(r_in, r_out) + 15.0 * width;
    auto f = [&](double r) { return r <= 0.0 ? 0.0 : K(r_out, r, T1) * K(r, r_in, T2); };
    rep.composed = quad::integrate_adaptive(f, 0.0, R, 1e-14 * std::abs(rep.direct), 20, 30);
    rep.rel_err = std::abs(rep.composed - rep.direct) / std::max(std::abs(rep.direct), 1e-300);
    return rep;
}

}  // namespace cqm
