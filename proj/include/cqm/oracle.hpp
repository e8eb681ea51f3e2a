#pragma once

#include <complex>
#include <vector>

#include "cqm/core_model.hpp"
#include "cqm/spectra.hpp"

namespace cqm {

using Complex = std::complex<double>;

// Uniform nodes r_i = r_min + i h, i = 0..n_points-1. Dirichlet values sit at
// the virtual nodes r_min - h and r_max + h.
struct RadialGrid {
    double r_min = 1e-3;
    double r_max = 20.0;
    int n_points = 20000;

    double h() const { return (r_max - r_min) / (n_points - 1); }
    double r(int i) const { return r_min + i * h(); }
    void validate() const;

    // r_min = h, so the Dirichlet point lands on r = 0
    static RadialGrid from_origin(double h, double r_max);
};

// Potential of the radial operator, including the centrifugal term:
// hbar^2 (mu^2 - 1/4) / (2 M r^2) + s M omega^2 r^2 / 2, s = +1, 0, -1 by class.
Complex radial_potential(const AnalogOscillator& a, Complex r);

// Lowest n_eigen eigenvalues of the three-point discretization (Sturm bisection).
std::vector<double> fd_spectrum(const AnalogOscillator& a, const RadialGrid& grid, int n_eigen);

// All eigenvalues of a symmetric tridiagonal matrix by implicit QL, ascending.
// diag has n entries, off has n - 1.
std::vector<double> tridiag_eigenvalues_ql(std::vector<double> diag, std::vector<double> off);

// Exterior complex scaling layer used by fd_green: r -> z(r), with z' ramped
// smoothly from 1 to e^{+-i theta} over [start, start + ramp] (fractions of r_max).
struct EcsSpec {
    double theta = 0.7853981633974483;  // pi/4
    double start = 0.6;
    double ramp = 0.15;
};

struct FdGreenColumn {
    std::vector<double> r;
    std::vector<Complex> g;  // G(r_i, r_source)
    int source = 0;
};

// Solves (E +- i eps - H_FD) x = e_j / h with j the node nearest r_source.
FdGreenColumn fd_green(const AnalogOscillator& a, double E, double eps, const RadialGrid& grid, double r_source,
                       GreenKind kind, const EcsSpec& ecs = {});

// (E +- i eps - H_FD) x on the same discretization, for residual checks.
std::vector<Complex> fd_apply(const AnalogOscillator& a, double E, double eps, const RadialGrid& grid, GreenKind kind,
                              const std::vector<Complex>& x, const EcsSpec& ecs = {});

struct CommutatorReport {
    double dh = 0.0;  // ||([D0,H] + i hbar H) phi|| / ||H phi||
    double dk = 0.0;  // ||([D0,K0] - i hbar K0) phi|| / ||K0 phi||
    double hk = 0.0;  // ||([H,K0] - 2 i hbar D0) phi|| / ||D0 phi||
};

// Maxima over five smooth bumps supported in [1, 5].
CommutatorReport commutator_check(const PhysicalParams& p, const RadialGrid& grid);

struct NumerovResult {
    std::vector<double> r;
    std::vector<double> u;
    double match_radius = 0.0;
};

// Regular solution of -hbar^2/2M u'' + V u = E u, seeded with the Frobenius
// series of r^{mu+1/2}, normalized to 1 at the match radius (<= 0: midpoint).
NumerovResult numerov_regular(const AnalogOscillator& a, double E, const RadialGrid& grid,
                              double match_radius = 0.0);

struct WronskianGreen {
    Complex value;
    Complex wronskian;           // finite-difference W = U_reg U_out' - U_reg' U_out
    Complex wronskian_analytic;  // chain-rule factor times -1/Gamma((1+mu)/2 - lambda)
};

// G = (2M/hbar^2) U_reg(r<) U_out(r>) / W. kind is ignored for elliptic.
WronskianGreen wronskian_green(const AnalogOscillator& a, double E, double r_in, double r_out, GreenKind kind);

// Where e^{-eps V / hbar} is applied: Interior weights r_1..r_{N-1} (the
// evaluated N-th order recursion), Left also weights r' (the raw sliced action).
enum class PotentialNode { Interior, Left };

// Composite Gauss-Legendre grid on [0, r_max] for the slice integrals.
struct SliceGrid {
    double r_max = 8.0;
    double panel = 0.05;
    int nodes = 16;
    PotentialNode potential = PotentialNode::Interior;
};

// Euclidean kernel after n_slices one-slice steps.
double timesliced_propagator(const AnalogOscillator& a, double r_in, double r_out, double T_euclid, int n_slices,
                             const SliceGrid& grid = {});

// The one-slice kernel with V at r_prev.
double one_slice_kernel(const AnalogOscillator& a, double r_next, double r_prev, double eps);

struct SemigroupReport {
    double composed = 0.0;
    double direct = 0.0;
    double rel_err = 0.0;
};

// int_0^inf K(r'', r; T1) K(r, r'; T2) dr against K(r'', r'; T1 + T2), Euclidean.
SemigroupReport semigroup_check(const AnalogOscillator& a, const PhysicalParams& p, double r_in, double r_out,
                                double T1, double T2);

}  // namespace cqm
