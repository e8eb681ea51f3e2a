#include <algorithm>
#include <cmath>
#include <sstream>

#include "cqm/cli.hpp"
#include "cqm/errors.hpp"

namespace cqm::cli {

namespace {

template <class E>
bool is(const std::exception& e) {
    return dynamic_cast<const E*>(&e) != nullptr;
}

std::string error_name(const std::exception& e) {
    if (is<StrongCouplingError>(e)) return "StrongCouplingError";
    if (is<SingularTimeError>(e)) return "SingularTimeError";
    if (is<NotApplicableError>(e)) return "NotApplicableError";
    if (is<PoleError>(e)) return "PoleError";
    if (is<DomainError>(e)) return "DomainError";
    if (is<OverflowError>(e)) return "OverflowError";
    if (is<NonConvergence>(e)) return "NonConvergence";
    if (is<ConvergenceError>(e)) return "ConvergenceError";
    if (is<CausticError>(e)) return "CausticError";
    if (is<ZeroTimeError>(e)) return "ZeroTimeError";
    if (is<ClassMismatchError>(e)) return "ClassMismatchError";
    if (is<ContourError>(e)) return "ContourError";
    if (is<SolveError>(e)) return "SolveError";
    if (is<DegenerateWronskianError>(e)) return "DegenerateWronskianError";
    if (is<ConfigError>(e)) return "ConfigError";
    return "Error";
}

bool is_convergence_failure(const std::exception& e) { return is<NonConvergence>(e) || is<ConvergenceError>(e); }

const char* kind_name(GreenKind k) { return k == GreenKind::Retarded ? "retarded" : "advanced"; }

// Row-level failures are flagged and the batch continues.
struct Batch {
    Table table;
    bool nonconverged = false;
    bool failed = false;

    template <class F>
    void row(std::vector<Cell> head, F&& compute) {
        try {
            std::vector<Cell> tail = compute();
            head.insert(head.end(), tail.begin(), tail.end());
            head.emplace_back(std::string());
        } catch (const Error& e) {
            const std::size_t missing = table.columns.size() - head.size() - 1;
            for (std::size_t i = 0; i < missing; ++i) head.emplace_back(std::nan(""));
            head.emplace_back(error_name(e));
            nonconverged = nonconverged || is_convergence_failure(e);
            failed = true;
        }
        table.rows.push_back(std::move(head));
    }
};

AnalogOscillator analog_of(const RunConfig& cfg) { return reduce_to_analog(cfg.generator, cfg.params, cfg.t_ref); }

CommandResult cmd_classify(const RunConfig& cfg) {
    const GeneratorClass gc = classify(cfg.generator, cfg.t_ref);
    const AnalogOscillator a = analog_of(cfg);
    const auto name = canonical_name(cfg.generator);
    CommandResult res;
    res.table.columns = {"u", "v", "w", "discriminant", "class", "name", "omega", "sigma", "sigma_flagged",
                         "scale", "mu", "a", "omega_hat", "equivalent"};
    double da = std::nan(""), dw = std::nan("");
    try {
        const DimensionalParams dp = dimensional_params(cfg.generator);
        da = dp.a;
        dw = dp.omega_hat;
    } catch (const NotApplicableError&) {
    }
    const std::string eq = equivalent_operator(gc.class_tag);
    res.table.rows.push_back({cfg.generator.u, cfg.generator.v, cfg.generator.w, gc.discriminant,
                              to_string(gc.class_tag), name.value_or(""), gc.omega_mag,
                              static_cast<long long>(gc.sigma), gc.sigma_flagged, a.scale, a.mu, da, dw, eq});
    std::ostringstream line;
    line << to_string(gc.class_tag);
    if (name) line << " (" << *name << ")";
    line << ", Delta=" << gc.discriminant << ", omega=" << gc.omega_mag << ", equivalent: " << eq;
    res.summary["line"] = line.str();
    return res;
}

CommandResult cmd_propagator(const RunConfig& cfg) {
    const PropagatorBlock blk = cfg.propagator.value_or(PropagatorBlock{});
    Batch b;
    b.table.columns = {"r_in", "r_out", "T", "schedule", "re", "im", "err_flag"};
    PropagatorQuery q;
    q.params = cfg.params;
    q.analog = analog_of(cfg);
    q.schedule = blk.schedule;
    const std::string sched = blk.schedule == Schedule::RealTime ? "realtime" : "euclidean";
    for (double ri : blk.r_in)
        for (double ro : blk.r_out)
            for (double t : blk.time)
                b.row({ri, ro, t, sched}, [&]() -> std::vector<Cell> {
                    q.r_in = ri;
                    q.r_out = ro;
                    q.time = t;
                    const Complex k = propagator(q);
                    return {k.real(), k.imag()};
                });
    CommandResult res;
    res.table = std::move(b.table);
    res.summary["rows"] = res.table.rows.size();
    res.exit_code = b.nonconverged ? kNonConvergence : kOk;
    return res;
}

CommandResult cmd_spectrum(const RunConfig& cfg) {
    const SpectrumBlock blk = cfg.spectrum.value_or(SpectrumBlock{});
    const AnalogOscillator a = analog_of(cfg);
    CommandResult res;
    if (a.class_tag == GeneratorClassTag::Elliptic) {
        res.table.columns = {"n", "r_n", "e_tilde", "energy", "g_eigen"};
        for (const EigenData& e : elliptic_levels(a, blk.n_max))
            res.table.rows.push_back({static_cast<long long>(e.n), e.r_n, e.e_tilde, e.energy, e.g_eigen});
        res.summary["spectrum"] = "discrete";
    } else {
        res.table.columns = {"E_label", "kappa", "energy", "g_eigen"};
        for (double E : blk.energies) {
            const EigenData e = continuum_label(a, E);
            res.table.rows.push_back({e.E_label, e.kappa, e.energy, e.g_eigen});
        }
        res.summary["spectrum"] = a.class_tag == GeneratorClassTag::Parabolic ? "continuous [0, inf)" : "continuous (-inf, inf)";
    }
    res.summary["class"] = to_string(a.class_tag);
    return res;
}

CommandResult cmd_eigfn(const RunConfig& cfg) {
    const EigfnBlock blk = cfg.eigfn.value_or(EigfnBlock{});
    const AnalogOscillator a = analog_of(cfg);
    Batch b;
    if (a.class_tag == GeneratorClassTag::Elliptic) {
        b.table.columns = {"n", "r", "re", "im", "err_flag"};
        for (int n : blk.levels)
            for (double r : blk.r)
                b.row({static_cast<long long>(n), r},
                      [&]() -> std::vector<Cell> { return {elliptic_eigenfunction(a, n, r), 0.0}; });
    } else {
        b.table.columns = {"E", "r", "re", "im", "err_flag"};
        for (double E : blk.energies)
            for (double r : blk.r)
                b.row({E, r}, [&]() -> std::vector<Cell> {
                    if (a.class_tag == GeneratorClassTag::Parabolic) return {parabolic_eigenfunction(a, E, r), 0.0};
                    const Complex u = hyperbolic_eigenfunction(a, E, r);
                    return {u.real(), u.imag()};
                });
    }
    CommandResult res;
    res.table = std::move(b.table);
    res.summary["rows"] = res.table.rows.size();
    return res;
}

CommandResult cmd_green(const RunConfig& cfg) {
    const GreenBlock blk = cfg.green.value_or(GreenBlock{});
    const AnalogOscillator a = analog_of(cfg);
    Batch b;
    b.table.columns = {"E", "r_in", "r_out", "kind", "re", "im", "err_flag"};
    for (double E : blk.energies)
        for (double ri : blk.r_in)
            for (double ro : blk.r_out) {
                if (a.class_tag == GeneratorClassTag::Elliptic) {
                    b.row({E, ri, ro, std::string("resolvent")},
                          [&]() -> std::vector<Cell> { return {green_elliptic(a, E, ri, ro), 0.0}; });
                    continue;
                }
                for (GreenKind k : blk.kinds)
                    b.row({E, ri, ro, std::string(kind_name(k))}, [&]() -> std::vector<Cell> {
                        const GreenValue g = a.class_tag == GeneratorClassTag::Parabolic ? green_parabolic(a, E, ri, ro, k)
                                                                                         : green_hyperbolic(a, E, ri, ro, k);
                        return {g.value.real(), g.value.imag()};
                    });
            }
    CommandResult res;
    res.table = std::move(b.table);
    res.summary["rows"] = res.table.rows.size();
    res.exit_code = b.nonconverged ? kNonConvergence : kOk;
    return res;
}

CommandResult cmd_fourier(const RunConfig& cfg) {
    const FourierBlock blk = cfg.fourier.value_or(FourierBlock{});
    const AnalogOscillator a = analog_of(cfg);
    Batch b;
    b.table.columns = {"E", "r_in", "r_out", "transform", "re", "im", "residual", "err_flag"};
    const std::string mode = blk.mode == FourierMode::Whole      ? "whole"
                             : blk.mode == FourierMode::Retarded ? "retarded"
                                                                 : "advanced";
    for (double E : blk.energies)
        for (double ri : blk.r_in)
            for (double ro : blk.r_out)
                b.row({E, ri, ro, mode}, [&]() -> std::vector<Cell> {
                    const TransformResult t =
                        blk.mode == FourierMode::Whole
                            ? fourier_invert(a.class_tag, cfg.params, a, E, ri, ro, blk.quadrature)
                            : half_line_transform(a.class_tag, cfg.params, a, E, ri, ro,
                                                  blk.mode == FourierMode::Retarded ? GreenKind::Retarded
                                                                                    : GreenKind::Advanced,
                                                  blk.quadrature);
                    return {t.value.real(), t.value.imag(), t.residual};
                });
    CommandResult res;
    res.table = std::move(b.table);
    res.summary["rows"] = res.table.rows.size();
    res.exit_code = b.nonconverged ? kNonConvergence : kOk;
    return res;
}

std::vector<IdentityId> parse_subset(const std::string& s) {
    std::vector<IdentityId> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty()) continue;
        const auto id = identity_from_string(item);
        if (!id) throw ConfigError("--subset: unknown identity '" + item + "'");
        out.push_back(*id);
    }
    if (out.empty()) throw ConfigError("--subset is empty");
    return out;
}

CommandResult cmd_verify(const RunConfig& cfg, const std::optional<std::string>& subset) {
    const VerifyBlock blk = cfg.verify.value_or(VerifyBlock{});
    std::vector<IdentityId> ids = subset ? parse_subset(*subset) : blk.identities;
    if (ids.empty()) ids = all_identities();
    CommandResult res;
    res.table.columns = {"identity", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err", "rel_err",
                         "tolerance", "tolerance_kind", "series_terms", "passed", "error"};
    int passed = 0;
    bool nonconv = false;
    for (IdentityId id : ids) {
        const auto it = blk.samples.find(id);
        const IdentitySample over = it == blk.samples.end() ? IdentitySample{} : it->second;
        try {
            const CheckReport r = verify_identity(id, over, blk.quadrature);
            res.table.rows.push_back({to_string(id), r.lhs.real(), r.lhs.imag(), r.rhs.real(), r.rhs.imag(), r.abs_err,
                                      r.rel_err, r.tolerance,
                                      std::string(r.tolerance_kind == ToleranceKind::Relative ? "relative" : "absolute"),
                                      static_cast<long long>(r.series_terms), r.passed, std::string()});
            passed += r.passed;
        } catch (const Error& e) {
            const double nan = std::nan("");
            res.table.rows.push_back({to_string(id), nan, nan, nan, nan, nan, nan, nan, std::string(), 0LL, false,
                                      error_name(e) + ": " + e.what()});
            nonconv = nonconv || is_convergence_failure(e);
        }
    }
    res.summary["total"] = ids.size();
    res.summary["passed"] = passed;
    if (passed != static_cast<int>(ids.size())) res.exit_code = nonconv ? kNonConvergence : kCheckFailure;
    return res;
}

double fitted_order(const std::vector<int>& n, const std::vector<double>& err) {
    // least-squares slope of log err against log N
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double x = std::log(static_cast<double>(n[i])), y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

CommandResult cmd_oracle(const RunConfig& cfg) {
    OracleBlock blk = cfg.oracle.value_or(OracleBlock{});
    const AnalogOscillator a = analog_of(cfg);
    if (!blk.spectrum && !blk.green && !blk.timesliced && !blk.commutator) {
        if (a.class_tag == GeneratorClassTag::Elliptic) blk.spectrum = OracleSpectrum{};
        if (a.class_tag != GeneratorClassTag::Elliptic) blk.green = OracleGreen{};
        blk.timesliced = OracleTimesliced{};
        blk.commutator = OracleCommutator{};
    }
    CommandResult res;
    res.table.columns = {"section", "label", "value", "reference", "abs_err", "rel_err", "tolerance", "passed", "error"};
    bool ok = true, nonconv = false;
    auto add = [&](const std::string& sec, const std::string& label, double v, double ref, double tol, bool rel) {
        const double ae = std::abs(v - ref), re = ref != 0.0 ? ae / std::abs(ref) : std::nan("");
        const bool pass = (rel ? re : ae) <= tol;
        ok = ok && pass;
        res.table.rows.push_back({sec, label, v, ref, ae, re, tol, pass, std::string()});
    };
    auto fail = [&](const std::string& sec, const Error& e) {
        const double nan = std::nan("");
        ok = false;
        nonconv = nonconv || is_convergence_failure(e);
        res.table.rows.push_back({sec, std::string(), nan, nan, nan, nan, nan, false, error_name(e) + ": " + e.what()});
    };

    if (blk.spectrum) {
        const OracleSpectrum& s = *blk.spectrum;
        try {
            if (a.class_tag != GeneratorClassTag::Elliptic)
                throw ClassMismatchError("oracle.spectrum needs an elliptic generator");
            const auto ev = fd_spectrum(a, RadialGrid::from_origin(s.h, s.r_max), s.n_eigen);
            for (int n = 0; n < s.n_eigen; ++n)
                add("fd_spectrum", "n=" + std::to_string(n), ev[n], a.hbar * a.omega_mag * (1.0 + a.mu + 2.0 * n),
                    s.tolerance, false);
        } catch (const Error& e) {
            fail("fd_spectrum", e);
        }
    }
    if (blk.green) {
        const OracleGreen& g = *blk.green;
        const std::vector<GreenKind> kinds = a.class_tag == GeneratorClassTag::Elliptic
                                                 ? std::vector<GreenKind>{GreenKind::Retarded}
                                                 : std::vector<GreenKind>{GreenKind::Retarded, GreenKind::Advanced};
        for (GreenKind k : kinds) {
            const std::string sec = std::string("fd_green_") + kind_name(k);
            try {
                const RadialGrid grid = RadialGrid::from_origin(g.h, g.r_max);
                const FdGreenColumn col = fd_green(a, g.energy, g.epsilon, grid, g.r_source, k);
                const double rs = col.r[col.source];
                for (double rp : g.r_probe) {
                    const long i = std::clamp<long>(std::lround((rp - grid.r_min) / grid.h()), 0, grid.n_points - 1);
                    const double r = col.r[i];
                    Complex ref;
                    if (a.class_tag == GeneratorClassTag::Elliptic)
                        ref = green_elliptic(a, g.energy, rs, r);
                    else if (a.class_tag == GeneratorClassTag::Parabolic)
                        ref = green_parabolic(a, g.energy, rs, r, k).value;
                    else
                        ref = green_hyperbolic(a, g.energy, rs, r, k).value;
                    const double re = std::abs(col.g[i] - ref) / std::abs(ref);
                    ok = ok && re <= g.tolerance;
                    std::ostringstream lab;
                    lab << "r=" << r;
                    res.table.rows.push_back({sec, lab.str(), std::abs(col.g[i]), std::abs(ref), std::abs(col.g[i] - ref),
                                              re, g.tolerance, re <= g.tolerance, std::string()});
                }
                const auto y = fd_apply(a, g.energy, g.epsilon, grid, k, col.g);
                double resid = 0.0;
                for (std::size_t i = 0; i < y.size(); ++i)
                    resid = std::max(resid, std::abs(y[i] * grid.h() - (static_cast<int>(i) == col.source ? 1.0 : 0.0)));
                add(sec, "residual", resid, 0.0, 1e-8, false);
            } catch (const Error& e) {
                fail(sec, e);
            }
        }
    }
    if (blk.timesliced) {
        const OracleTimesliced& t = *blk.timesliced;
        try {
            PropagatorQuery q;
            q.params = cfg.params;
            q.analog = a;
            q.schedule = Schedule::Euclidean;
            q.r_in = t.r_in;
            q.r_out = t.r_out;
            q.time = t.time;
            const double exact = propagator(q).real();
            std::vector<double> errs;
            for (int n : t.slices) {
                const double v = timesliced_propagator(a, t.r_in, t.r_out, t.time, n);
                errs.push_back(std::abs(v - exact));
                res.table.rows.push_back({std::string("timesliced"), "N=" + std::to_string(n), v, exact,
                                          std::abs(v - exact), std::abs(v - exact) / std::abs(exact), std::nan(""), true,
                                          std::string()});
            }
            const double order = fitted_order(t.slices, errs);
            const bool pass = std::abs(order - 1.0) <= t.order_tolerance;
            ok = ok && pass;
            res.table.rows.push_back({std::string("timesliced"), std::string("fitted_order"), order, 1.0,
                                      std::abs(order - 1.0), std::abs(order - 1.0), t.order_tolerance, pass, std::string()});
            res.summary["timesliced_order"] = order;
        } catch (const Error& e) {
            fail("timesliced", e);
        }
    }
    if (blk.commutator) {
        const OracleCommutator& c = *blk.commutator;
        try {
            const RadialGrid grid{0.5, 5.5, static_cast<int>(std::lround(5.0 / c.h)) + 1};
            const CommutatorReport r = commutator_check(cfg.params, grid);
            add("commutator", "[D,H]+i hbar H", r.dh, 0.0, c.tolerance, false);
            add("commutator", "[D,K]-i hbar K", r.dk, 0.0, c.tolerance, false);
            add("commutator", "[H,K]-2i hbar D", r.hk, 0.0, c.tolerance, false);
        } catch (const Error& e) {
            fail("commutator", e);
        }
    }
    res.summary["rows"] = res.table.rows.size();
    res.summary["passed"] = ok;
    if (!ok) res.exit_code = nonconv ? kNonConvergence : kCheckFailure;
    return res;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"classify", "propagator", "spectrum", "eigfn",
                                                "green",    "fourier",    "verify",   "oracle"};
    return names;
}

CommandResult run_command(const std::string& command, const RunConfig& cfg, const std::optional<std::string>& subset) {
    if (command == "classify") return cmd_classify(cfg);
    if (command == "propagator") return cmd_propagator(cfg);
    if (command == "spectrum") return cmd_spectrum(cfg);
    if (command == "eigfn") return cmd_eigfn(cfg);
    if (command == "green") return cmd_green(cfg);
    if (command == "fourier") return cmd_fourier(cfg);
    if (command == "verify") return cmd_verify(cfg, subset);
    if (command == "oracle") return cmd_oracle(cfg);
    throw ConfigError("unknown command '" + command + "'");
}

}  // namespace cqm::cli
