#include <cmath>
#include <fstream>
#include <sstream>

#include "cqm/cli.hpp"
#include "cqm/errors.hpp"

namespace cqm::cli {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError("'" + path + "' must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError("'" + path + "' must be finite");
    return v;
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError("'" + path + "' must be an integer");
    return j.get<int>();
}

// Object reader that remembers which keys were consumed; finish() rejects the rest.
class Block {
public:
    Block(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError("'" + (path_.empty() ? std::string("<root>") : path_) + "' must be an object");
    }

    bool has(const std::string& k) {
        seen_.insert(k);
        return j_.contains(k);
    }
    const json& at(const std::string& k) {
        seen_.insert(k);
        return j_.at(k);
    }
    std::string key(const std::string& k) const { return join(path_, k); }

    double number(const std::string& k, double def) { return has(k) ? as_number(at(k), key(k)) : def; }
    int integer(const std::string& k, int def) { return has(k) ? as_int(at(k), key(k)) : def; }
    std::vector<double> range(const std::string& k, std::vector<double> def) {
        return has(k) ? parse_range(at(k), key(k)) : def;
    }
    std::string string(const std::string& k, const std::string& def, std::initializer_list<const char*> allowed) {
        if (!has(k)) return def;
        const json& v = at(k);
        if (!v.is_string()) throw ConfigError("'" + key(k) + "' must be a string");
        const std::string s = v.get<std::string>();
        for (const char* a : allowed)
            if (s == a) return s;
        throw ConfigError("'" + key(k) + "' has unsupported value '" + s + "'");
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError("unknown key '" + join(path_, it.key()) + "'");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

QuadratureSpec parse_quadrature(const json& j, const std::string& path) {
    Block b(j, path);
    QuadratureSpec q;
    q.t_max = b.number("t_max", q.t_max);
    q.n_panels = b.integer("n_panels", q.n_panels);
    if (b.has("damping_eps")) q.damping_eps = parse_range(b.at("damping_eps"), b.key("damping_eps"));
    q.contour_offset = b.number("contour_offset", q.contour_offset);
    q.gl_nodes = b.integer("gl_nodes", q.gl_nodes);
    q.residual_rel = b.number("residual_rel", q.residual_rel);
    q.residual_abs = b.number("residual_abs", q.residual_abs);
    b.finish();
    try {
        q.validate();
    } catch (const DomainError& e) {
        throw ConfigError("'" + path + "': " + e.what());
    }
    return q;
}

json quadrature_json(const QuadratureSpec& q) {
    return {{"t_max", q.t_max},
            {"n_panels", q.n_panels},
            {"damping_eps", q.damping_eps},
            {"contour_offset", q.contour_offset},
            {"gl_nodes", q.gl_nodes},
            {"residual_rel", q.residual_rel},
            {"residual_abs", q.residual_abs}};
}

std::vector<GreenKind> parse_kinds(Block& b, const std::string& k, std::vector<GreenKind> def) {
    const std::string s = b.string(k, "", {"retarded", "advanced", "both"});
    if (s.empty()) return def;
    if (s == "retarded") return {GreenKind::Retarded};
    if (s == "advanced") return {GreenKind::Advanced};
    return {GreenKind::Retarded, GreenKind::Advanced};
}

std::string kinds_name(const std::vector<GreenKind>& k) {
    if (k.size() == 2) return "both";
    return k.at(0) == GreenKind::Retarded ? "retarded" : "advanced";
}

void require_positive(const std::vector<double>& v, const std::string& path) {
    for (double x : v)
        if (!(x > 0.0)) throw ConfigError("'" + path + "' values must be positive");
}

}  // namespace

std::vector<double> parse_range(const json& j, const std::string& path) {
    if (j.is_number()) return {as_number(j, path)};
    if (j.is_array()) {
        std::vector<double> out;
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
        if (out.empty()) throw ConfigError("'" + path + "' must not be empty");
        return out;
    }
    if (j.is_object()) {
        Block b(j, path);
        if (!b.has("start") || !b.has("stop") || !b.has("num"))
            throw ConfigError("'" + path + "' needs start, stop and num");
        const double a = b.number("start", 0.0), z = b.number("stop", 0.0);
        const int n = b.integer("num", 0);
        b.finish();
        if (n < 1) throw ConfigError("'" + path + ".num' must be at least 1");
        std::vector<double> out(n);
        for (int i = 0; i < n; ++i) out[i] = n == 1 ? a : a + (z - a) * i / (n - 1);
        return out;
    }
    throw ConfigError("'" + path + "' must be a number, an array or {start, stop, num}");
}

RunConfig parse_config(const json& j) {
    RunConfig c;
    Block root(j, "");
    if (root.has("params")) {
        Block b(root.at("params"), "params");
        c.params.mass = b.number("mass", c.params.mass);
        c.params.hbar = b.number("hbar", c.params.hbar);
        c.params.coupling = b.number("coupling", c.params.coupling);
        c.params.dim = b.integer("dim", c.params.dim);
        c.params.ell = b.integer("ell", c.params.ell);
        b.finish();
        try {
            c.params.validate();
        } catch (const StrongCouplingError& e) {
            throw ConfigError(std::string("'params.coupling': ") + e.what());
        } catch (const Error& e) {
            throw ConfigError(std::string("'params': ") + e.what());
        }
    }
    if (root.has("generator")) {
        Block b(root.at("generator"), "generator");
        c.generator.u = b.number("u", 0.0);
        c.generator.v = b.number("v", 0.0);
        c.generator.w = b.number("w", 0.0);
        b.finish();
    } else {
        c.generator = {1.0, 0.0, 0.0};
    }
    try {
        c.generator.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("'generator': ") + e.what());
    }
    c.t_ref = root.number("t_ref", 0.0);
    if (root.has("output_dir")) {
        const json& o = root.at("output_dir");
        if (!o.is_string()) throw ConfigError("'output_dir' must be a string");
        c.output_dir = o.get<std::string>();
    }
    if (root.has("formats")) {
        const json& f = root.at("formats");
        if (!f.is_array() || f.empty()) throw ConfigError("'formats' must be a non-empty array");
        c.formats.clear();
        for (const json& x : f) {
            if (!x.is_string() || (x != "csv" && x != "json")) throw ConfigError("'formats' entries must be \"csv\" or \"json\"");
            c.formats.insert(x.get<std::string>());
        }
    }
    if (root.has("propagator")) {
        Block b(root.at("propagator"), "propagator");
        PropagatorBlock p;
        p.r_in = b.range("r_in", p.r_in);
        p.r_out = b.range("r_out", p.r_out);
        p.time = b.range("time", p.time);
        p.schedule = b.string("schedule", "euclidean", {"euclidean", "realtime"}) == "realtime" ? Schedule::RealTime
                                                                                               : Schedule::Euclidean;
        b.finish();
        c.propagator = p;
    }
    if (root.has("spectrum")) {
        Block b(root.at("spectrum"), "spectrum");
        SpectrumBlock s;
        s.n_max = b.integer("n_max", s.n_max);
        if (s.n_max < 0) throw ConfigError("'spectrum.n_max' must be nonnegative");
        s.energies = b.range("energies", s.energies);
        b.finish();
        c.spectrum = s;
    }
    if (root.has("eigfn")) {
        Block b(root.at("eigfn"), "eigfn");
        EigfnBlock e;
        if (b.has("levels")) {
            const json& l = b.at("levels");
            if (!l.is_array() || l.empty()) throw ConfigError("'eigfn.levels' must be a non-empty array");
            e.levels.clear();
            for (std::size_t i = 0; i < l.size(); ++i) {
                const int n = as_int(l[i], "eigfn.levels[" + std::to_string(i) + "]");
                if (n < 0) throw ConfigError("'eigfn.levels' entries must be nonnegative");
                e.levels.push_back(n);
            }
        }
        e.energies = b.range("energies", e.energies);
        e.r = b.range("r", e.r);
        require_positive(e.r, "eigfn.r");
        b.finish();
        c.eigfn = e;
    }
    if (root.has("green")) {
        Block b(root.at("green"), "green");
        GreenBlock g;
        g.energies = b.range("energies", g.energies);
        g.r_in = b.range("r_in", g.r_in);
        g.r_out = b.range("r_out", g.r_out);
        g.kinds = parse_kinds(b, "kind", g.kinds);
        b.finish();
        c.green = g;
    }
    if (root.has("fourier")) {
        Block b(root.at("fourier"), "fourier");
        FourierBlock f;
        f.energies = b.range("energies", f.energies);
        f.r_in = b.range("r_in", f.r_in);
        f.r_out = b.range("r_out", f.r_out);
        const std::string m = b.string("transform", "whole", {"whole", "retarded", "advanced"});
        f.mode = m == "whole" ? FourierMode::Whole : m == "retarded" ? FourierMode::Retarded : FourierMode::Advanced;
        if (b.has("quadrature")) f.quadrature = parse_quadrature(b.at("quadrature"), "fourier.quadrature");
        b.finish();
        c.fourier = f;
    }
    if (root.has("verify")) {
        Block b(root.at("verify"), "verify");
        VerifyBlock v;
        if (b.has("identities")) {
            const json& l = b.at("identities");
            if (!l.is_array()) throw ConfigError("'verify.identities' must be an array");
            for (const json& x : l) {
                const auto id = x.is_string() ? identity_from_string(x.get<std::string>()) : std::nullopt;
                if (!id) throw ConfigError("'verify.identities' has unknown identity " + x.dump());
                v.identities.push_back(*id);
            }
        }
        if (b.has("samples")) {
            Block s(b.at("samples"), "verify.samples");
            for (const auto& [name, val] : b.at("samples").items()) {
                const auto id = identity_from_string(name);
                if (!id) throw ConfigError("unknown key 'verify.samples." + name + "'");
                Block one(s.at(name), s.key(name));
                IdentitySample smp;
                const IdentitySample def = default_sample(*id);
                for (const auto& [k, x] : val.items()) {
                    if (!def.count(k)) throw ConfigError("unknown key '" + one.key(k) + "'");
                    smp[k] = as_number(one.at(k), one.key(k));
                }
                one.finish();
                v.samples[*id] = smp;
            }
            s.finish();
        }
        if (b.has("quadrature")) v.quadrature = parse_quadrature(b.at("quadrature"), "verify.quadrature");
        b.finish();
        c.verify = v;
    }
    if (root.has("oracle")) {
        Block b(root.at("oracle"), "oracle");
        OracleBlock o;
        if (b.has("spectrum")) {
            Block s(b.at("spectrum"), "oracle.spectrum");
            OracleSpectrum x;
            x.h = s.number("h", x.h);
            x.r_max = s.number("r_max", x.r_max);
            x.n_eigen = s.integer("n_eigen", x.n_eigen);
            x.tolerance = s.number("tolerance", x.tolerance);
            s.finish();
            if (!(x.h > 0.0 && x.r_max > 200.0 * x.h) || x.n_eigen < 1)
                throw ConfigError("'oracle.spectrum' needs h > 0, r_max >= 200 h and n_eigen >= 1");
            o.spectrum = x;
        }
        if (b.has("green")) {
            Block s(b.at("green"), "oracle.green");
            OracleGreen x;
            x.energy = s.number("energy", x.energy);
            x.epsilon = s.number("epsilon", x.epsilon);
            x.h = s.number("h", x.h);
            x.r_max = s.number("r_max", x.r_max);
            x.r_source = s.number("r_source", x.r_source);
            x.r_probe = s.range("r_probe", x.r_probe);
            x.tolerance = s.number("tolerance", x.tolerance);
            s.finish();
            if (!(x.h > 0.0 && x.r_max > 200.0 * x.h && x.epsilon > 0.0))
                throw ConfigError("'oracle.green' needs h > 0, r_max >= 200 h and epsilon > 0");
            o.green = x;
        }
        if (b.has("timesliced")) {
            Block s(b.at("timesliced"), "oracle.timesliced");
            OracleTimesliced x;
            x.r_in = s.number("r_in", x.r_in);
            x.r_out = s.number("r_out", x.r_out);
            x.time = s.number("time", x.time);
            if (s.has("slices")) {
                const json& l = s.at("slices");
                if (!l.is_array() || l.size() < 2) throw ConfigError("'oracle.timesliced.slices' needs at least two entries");
                x.slices.clear();
                for (std::size_t i = 0; i < l.size(); ++i) x.slices.push_back(as_int(l[i], s.key("slices")));
            }
            x.order_tolerance = s.number("order_tolerance", x.order_tolerance);
            s.finish();
            o.timesliced = x;
        }
        if (b.has("commutator")) {
            Block s(b.at("commutator"), "oracle.commutator");
            OracleCommutator x;
            x.h = s.number("h", x.h);
            x.tolerance = s.number("tolerance", x.tolerance);
            s.finish();
            if (!(x.h > 0.0 && x.h < 0.02)) throw ConfigError("'oracle.commutator.h' must lie in (0, 0.02)");
            o.commutator = x;
        }
        b.finish();
        c.oracle = o;
    }
    root.finish();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    json j;
    try {
        j = json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

json to_json(const RunConfig& c) {
    json j;
    j["params"] = {{"mass", c.params.mass},
                   {"hbar", c.params.hbar},
                   {"coupling", c.params.coupling},
                   {"dim", c.params.dim},
                   {"ell", c.params.ell}};
    j["generator"] = {{"u", c.generator.u}, {"v", c.generator.v}, {"w", c.generator.w}};
    j["t_ref"] = c.t_ref;
    j["output_dir"] = c.output_dir;
    j["formats"] = std::vector<std::string>(c.formats.begin(), c.formats.end());
    if (c.propagator)
        j["propagator"] = {{"r_in", c.propagator->r_in},
                           {"r_out", c.propagator->r_out},
                           {"time", c.propagator->time},
                           {"schedule", c.propagator->schedule == Schedule::RealTime ? "realtime" : "euclidean"}};
    if (c.spectrum) {
        j["spectrum"] = {{"n_max", c.spectrum->n_max}};
        if (!c.spectrum->energies.empty()) j["spectrum"]["energies"] = c.spectrum->energies;
    }
    if (c.eigfn) j["eigfn"] = {{"levels", c.eigfn->levels}, {"energies", c.eigfn->energies}, {"r", c.eigfn->r}};
    if (c.green)
        j["green"] = {{"energies", c.green->energies},
                      {"r_in", c.green->r_in},
                      {"r_out", c.green->r_out},
                      {"kind", kinds_name(c.green->kinds)}};
    if (c.fourier) {
        const char* m = c.fourier->mode == FourierMode::Whole      ? "whole"
                        : c.fourier->mode == FourierMode::Retarded ? "retarded"
                                                                   : "advanced";
        j["fourier"] = {{"energies", c.fourier->energies},
                        {"r_in", c.fourier->r_in},
                        {"r_out", c.fourier->r_out},
                        {"transform", m},
                        {"quadrature", quadrature_json(c.fourier->quadrature)}};
    }
    if (c.verify) {
        json v;
        std::vector<std::string> ids;
        for (IdentityId id : c.verify->identities) ids.push_back(to_string(id));
        v["identities"] = ids;
        json s = json::object();
        for (const auto& [id, smp] : c.verify->samples) s[to_string(id)] = smp;
        v["samples"] = s;
        v["quadrature"] = quadrature_json(c.verify->quadrature);
        j["verify"] = v;
    }
    if (c.oracle) {
        json o = json::object();
        if (c.oracle->spectrum) {
            const auto& x = *c.oracle->spectrum;
            o["spectrum"] = {{"h", x.h}, {"r_max", x.r_max}, {"n_eigen", x.n_eigen}, {"tolerance", x.tolerance}};
        }
        if (c.oracle->green) {
            const auto& x = *c.oracle->green;
            o["green"] = {{"energy", x.energy}, {"epsilon", x.epsilon}, {"h", x.h},          {"r_max", x.r_max},
                          {"r_source", x.r_source}, {"r_probe", x.r_probe}, {"tolerance", x.tolerance}};
        }
        if (c.oracle->timesliced) {
            const auto& x = *c.oracle->timesliced;
            o["timesliced"] = {{"r_in", x.r_in},     {"r_out", x.r_out},         {"time", x.time},
                               {"slices", x.slices}, {"order_tolerance", x.order_tolerance}};
        }
        if (c.oracle->commutator) o["commutator"] = {{"h", c.oracle->commutator->h}, {"tolerance", c.oracle->commutator->tolerance}};
        j["oracle"] = o;
    }
    return j;
}

}  // namespace cqm::cli
