#include "cqm/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cqm/errors.hpp"

namespace cqm {

std::string to_string(GeneratorClassTag tag) {
    switch (tag) {
        case GeneratorClassTag::Elliptic: return "Elliptic";
        case GeneratorClassTag::Parabolic: return "Parabolic";
        case GeneratorClassTag::Hyperbolic: return "Hyperbolic";
    }
    return "?";
}

double PhysicalParams::mu() const { return conformal_index(*this); }

void PhysicalParams::validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("mass must be positive");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar must be positive");
    if (!std::isfinite(coupling)) throw DomainError("coupling must be finite");
    if (dim < 1) throw DomainError("dim must be a positive integer");
    if (ell < 0) throw DomainError("ell must be nonnegative");
    conformal_index(*this);
}

void GeneratorSpec::validate() const {
    if (!std::isfinite(u) || !std::isfinite(v) || !std::isfinite(w)) throw DomainError("generator coefficients must be finite");
    if (u == 0.0 && v == 0.0 && w == 0.0) throw DomainError("generator coefficients (u,v,w) are all zero");
}

GeneratorClass classify(const GeneratorSpec& spec, double t_ref) {
    GeneratorClass c;
    c.discriminant = spec.discriminant();
    if (c.discriminant < 0.0)
        c.class_tag = GeneratorClassTag::Elliptic;
    else if (c.discriminant > 0.0)
        c.class_tag = GeneratorClassTag::Hyperbolic;
    else
        c.class_tag = GeneratorClassTag::Parabolic;
    c.omega_mag = 0.5 * std::sqrt(std::abs(c.discriminant));
    const double f = spec.f(t_ref);
    c.sigma = (f > 0.0) - (f < 0.0);
    c.sigma_flagged = (c.sigma == 0);
    return c;
}

double conformal_index(const PhysicalParams& p) {
    const double lnu = p.ell + p.nu();
    const double rad = p.coupling + lnu * lnu;
    if (rad < 0.0) throw StrongCouplingError("g + (l+nu)^2 < 0: strong-coupling regime is not supported");
    return std::sqrt(rad);
}

namespace {

std::vector<double> real_roots(const GeneratorSpec& s) {
    std::vector<double> r;
    if (s.w == 0.0) {
        if (s.v != 0.0) r.push_back(-s.u / s.v);
        return r;
    }
    const double d = s.discriminant();
    if (d < 0.0) return r;
    if (d == 0.0) {
        r.push_back(-s.v / (2.0 * s.w));
        return r;
    }
    // stable quadratic roots
    const double sq = std::sqrt(d);
    const double qq = -0.5 * (s.v + std::copysign(sq, s.v));
    double r1 = qq / s.w, r2 = (qq != 0.0) ? s.u / qq : -r1;
    if (r1 > r2) std::swap(r1, r2);
    r.push_back(r1);
    r.push_back(r2);
    return r;
}

}  // namespace

TimeMap time_map(const GeneratorSpec& spec, double t_ref) {
    spec.validate();
    TimeMap m;
    m.class_tag = classify(spec, t_ref).class_tag;
    m.roots = real_roots(spec);
    m.branch_lo = -std::numeric_limits<double>::infinity();
    m.branch_hi = std::numeric_limits<double>::infinity();
    for (double r : m.roots) {
        if (r <= t_ref) m.branch_lo = std::max(m.branch_lo, r);
        if (r >= t_ref) m.branch_hi = std::min(m.branch_hi, r);
    }
    return m;
}

double effective_time(const GeneratorSpec& spec, double t) {
    spec.validate();
    const double lo = std::min(0.0, t), hi = std::max(0.0, t);
    for (double r : real_roots(spec))
        if (r >= lo && r <= hi) throw SingularTimeError("effective_time: f_G has a root in [0, t]");
    const double u = spec.u, v = spec.v, w = spec.w;
    if (t == 0.0) return 0.0;
    if (w == 0.0) {
        if (v == 0.0) return t / u;
        return std::log1p(v * t / u) / v;
    }
    const double d = spec.discriminant();
    if (d < 0.0) {
        const double s = std::sqrt(-d);
        // arctan difference folded into one call keeps precision for small t
        const double a = (2.0 * w * t + v) / s, b = v / s;
        return (2.0 / s) * std::atan((a - b) / (1.0 + a * b));
    }
    if (d == 0.0) return 2.0 / v - 2.0 / (2.0 * w * t + v);
    const double s = std::sqrt(d);
    const double num_t = (2.0 * w * t + v - s) / (2.0 * w * t + v + s);
    const double num_0 = (v - s) / (v + s);
    return std::log(std::abs(num_t / num_0)) / s;
}

CanonicalResult canonical_transform(const GeneratorSpec& spec, const std::vector<double>& Q,
                                    const std::vector<double>& P, double t, const PhysicalParams& p) {
    if (Q.size() != P.size()) throw DomainError("canonical_transform: Q and P differ in length");
    const double f = spec.f(t);
    if (f == 0.0) throw SingularTimeError("canonical_transform: f_G(t) = 0");
    const double af = std::sqrt(std::abs(f));
    const double sigma = f > 0.0 ? 1.0 : -1.0;
    const double drift = spec.fdot(t) / (2.0 * f) * p.mass;
    CanonicalResult out;
    out.q.resize(Q.size());
    out.mom.resize(Q.size());
    for (std::size_t i = 0; i < Q.size(); ++i) {
        out.q[i] = Q[i] / af;
        out.mom[i] = sigma * af * (P[i] - drift * Q[i]);
    }
    out.tau = effective_time(spec, t);
    return out;
}

DimensionalParams dimensional_params(const GeneratorSpec& spec) {
    const double d = spec.discriminant();
    if (spec.u == 0.0) throw NotApplicableError("dimensional_params: u = 0");
    if (d == 0.0) throw NotApplicableError("dimensional_params: Delta = 0");
    DimensionalParams out;
    out.a = 2.0 * std::abs(spec.u) / std::sqrt(std::abs(d));
    out.omega_hat = 1.0 / out.a;
    return out;
}

AnalogOscillator reduce_to_analog(const GeneratorSpec& spec, const PhysicalParams& p, double t_ref) {
    spec.validate();
    const GeneratorClass c = classify(spec, t_ref);
    AnalogOscillator a;
    a.mass = p.mass;
    a.hbar = p.hbar;
    a.coupling = p.coupling;
    a.mu = conformal_index(p);
    a.class_tag = c.class_tag;
    a.sigma = c.sigma;
    a.sigma_flagged = c.sigma_flagged;
    if (c.class_tag == GeneratorClassTag::Parabolic) {
        a.omega_mag = 0.0;
        a.scale = 1.0;
    } else {
        a.omega_mag = 0.5;
        a.scale = std::sqrt(std::abs(c.discriminant));
    }
    return a;
}

AnalogOscillator make_analog(GeneratorClassTag tag, const PhysicalParams& p, double omega_mag) {
    AnalogOscillator a;
    a.mass = p.mass;
    a.hbar = p.hbar;
    a.coupling = p.coupling;
    a.mu = conformal_index(p);
    a.class_tag = tag;
    a.omega_mag = tag == GeneratorClassTag::Parabolic ? 0.0 : omega_mag;
    if (tag != GeneratorClassTag::Parabolic && !(omega_mag > 0.0))
        throw DomainError("make_analog: omega must be positive for elliptic/hyperbolic");
    return a;
}

std::optional<std::string> canonical_name(const GeneratorSpec& s) {
    auto prop = [&](double u, double v, double w) {
        // positive multiple of (u,v,w)
        const double n1 = std::sqrt(s.u * s.u + s.v * s.v + s.w * s.w), n2 = std::sqrt(u * u + v * v + w * w);
        return std::abs(s.u / n1 - u / n2) < 1e-12 && std::abs(s.v / n1 - v / n2) < 1e-12 &&
               std::abs(s.w / n1 - w / n2) < 1e-12;
    };
    if (prop(1, 0, 0)) return "H";
    if (prop(0, 0, 1)) return "K";
    if (prop(0, 1, 0)) return "D";
    if (prop(1, 0, 1)) return "R";
    if (prop(1, 0, -1)) return "S'";
    if (prop(-1, 0, 1)) return "S";
    return std::nullopt;
}

std::string equivalent_operator(GeneratorClassTag tag) {
    switch (tag) {
        case GeneratorClassTag::Elliptic: return "sigma*sqrt|Delta|*R";
        case GeneratorClassTag::Parabolic: return "sigma*H";
        case GeneratorClassTag::Hyperbolic: return "sigma*sqrt|Delta|*S'";
    }
    return "?";
}

}  // namespace cqm
