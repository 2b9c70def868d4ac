#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lieobs/flow.hpp"
#include "lieobs/observability.hpp"
#include "lieobs/subgroups.hpp"

namespace lieobs {

// Anything wrong with a job description, from malformed JSON values to
// inconsistent combinations, is a ConfigError; the command line maps it to
// its own exit code so scripts can tell bad input from bad verdicts.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

struct SimulateSpec {
    GroupElement g0{};
    std::array<double, 2> s_range{-5.0, 5.0};
    int steps = 100;
};

struct JobConfig {
    GroupClass cls{GroupKind::R2, 0.0};
    FieldSpec field{};

    // Exactly one of the two kernel routes may be configured: a catalogued
    // homomorphism, or raw kernel functionals.
    bool has_hom = false;
    SubgroupId target = SubgroupId::G1;
    bool zero_map = false;
    std::map<std::string, double> coeffs;

    bool has_functionals = false;
    std::vector<KernelFunctional> functionals;

    std::array<double, 2> t_window{-10.0, 10.0};
    SGridSpec s_grid{};
    Tolerances tol{};
    std::uint64_t seed = 12345;

    std::vector<SweepAxis> sweep;
    SimulateSpec sim{};
};

namespace cfg_detail {

using nlohmann::json;

inline double num_at(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    return j.get<double>();
}

inline std::array<double, 2> pair_at(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError(where + ": expected an array of two numbers");
    return {num_at(j[0], where), num_at(j[1], where)};
}

inline void reject_unknown(const json& j, std::initializer_list<const char*> known,
                           const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok) throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
    }
}

inline void parse_group(const json& j, JobConfig& out) {
    reject_unknown(j, {"kind", "lambda"}, "group");
    if (!j.contains("kind") || !j["kind"].is_string())
        throw ConfigError("group.kind: expected a class name string");
    try {
        out.cls.kind = group_kind_from_string(j["kind"].get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("group.kind: ") + e.what());
    }
    if (j.contains("lambda")) out.cls.lambda = num_at(j["lambda"], "group.lambda");
    try {
        out.cls.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("group: ") + e.what());
    }
}

inline void parse_field(const json& j, JobConfig& out) {
    reject_unknown(j, {"dstar", "xi"}, "field");
    if (j.contains("dstar")) {
        const json& d = j["dstar"];
        if (!d.is_array() || d.size() != 2)
            throw ConfigError("field.dstar: expected two rows of two numbers");
        auto r0 = pair_at(d[0], "field.dstar");
        auto r1 = pair_at(d[1], "field.dstar");
        out.field.dstar = {r0[0], r0[1], r1[0], r1[1]};
    }
    if (j.contains("xi")) {
        auto xi = pair_at(j["xi"], "field.xi");
        out.field.xi = {xi[0], xi[1]};
    }
}

inline void parse_hom(const json& j, JobConfig& out) {
    reject_unknown(j, {"target", "coeffs", "zero"}, "hom");
    out.has_hom = true;
    if (!j.contains("target") || !j["target"].is_string())
        throw ConfigError("hom.target: expected a subgroup name string");
    try {
        out.target = subgroup_id_from_string(j["target"].get<std::string>());
    } catch (const UnknownTarget& e) {
        throw ConfigError(std::string("hom.target: ") + e.what());
    }
    if (j.contains("zero")) {
        if (!j["zero"].is_boolean()) throw ConfigError("hom.zero: expected a boolean");
        out.zero_map = j["zero"].get<bool>();
    }
    if (j.contains("coeffs")) {
        if (!j["coeffs"].is_object()) throw ConfigError("hom.coeffs: expected an object");
        for (auto it = j["coeffs"].begin(); it != j["coeffs"].end(); ++it)
            out.coeffs[it.key()] = num_at(it.value(), "hom.coeffs." + it.key());
    }
}

inline void parse_kernel(const json& j, JobConfig& out) {
    reject_unknown(j, {"functionals"}, "kernel");
    out.has_functionals = true;
    if (!j.contains("functionals") || !j["functionals"].is_array())
        throw ConfigError("kernel.functionals: expected an array of [p, qx, qy] triples");
    for (const auto& f : j["functionals"]) {
        if (!f.is_array() || f.size() != 3)
            throw ConfigError("kernel.functionals: each entry must be [p, qx, qy]");
        out.functionals.push_back({num_at(f[0], "kernel.functionals"),
                                   {num_at(f[1], "kernel.functionals"),
                                    num_at(f[2], "kernel.functionals")}});
    }
}

inline void parse_tolerances(const json& j, Tolerances& tol) {
    struct Slot {
        const char* name;
        double Tolerances::*field;
    };
    static const Slot slots[] = {
        {"kernel_membership", &Tolerances::kernel_membership},
        {"flow_membership", &Tolerances::flow_membership},
        {"identity_cluster", &Tolerances::identity_cluster},
        {"dstar_boundary", &Tolerances::dstar_boundary},
        {"symbolic_zero", &Tolerances::symbolic_zero},
        {"root_filter", &Tolerances::root_filter},
        {"rank", &Tolerances::rank},
        {"singular_conjugator", &Tolerances::singular_conjugator},
    };
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool found = false;
        for (const auto& s : slots)
            if (it.key() == s.name) {
                double v = num_at(it.value(), "options.tolerances." + it.key());
                if (v <= 0.0)
                    throw ConfigError("options.tolerances." + it.key() + ": must be positive");
                tol.*(s.field) = v;
                found = true;
            }
        if (!found)
            throw ConfigError("options.tolerances: unknown tolerance \"" + it.key() + "\"");
    }
}

inline void parse_options(const json& j, JobConfig& out) {
    reject_unknown(j, {"t_window", "s_grid", "tolerances", "seed"}, "options");
    if (j.contains("t_window")) {
        out.t_window = pair_at(j["t_window"], "options.t_window");
        if (!(out.t_window[0] < out.t_window[1]))
            throw ConfigError("options.t_window: lower bound must be below the upper bound");
    }
    if (j.contains("s_grid")) {
        const json& g = j["s_grid"];
        reject_unknown(g, {"span", "step"}, "options.s_grid");
        if (g.contains("span")) out.s_grid.span = num_at(g["span"], "options.s_grid.span");
        if (g.contains("step")) out.s_grid.step = num_at(g["step"], "options.s_grid.step");
        if (out.s_grid.span <= 0.0 || out.s_grid.step <= 0.0 ||
            out.s_grid.step > out.s_grid.span)
            throw ConfigError("options.s_grid: need 0 < step <= span");
    }
    if (j.contains("tolerances")) parse_tolerances(j["tolerances"], out.tol);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned())
            throw ConfigError("options.seed: expected a non-negative integer");
        out.seed = j["seed"].get<std::uint64_t>();
    }
}

inline void parse_sweep(const json& j, JobConfig& out) {
    reject_unknown(j, {"axes"}, "sweep");
    if (!j.contains("axes") || !j["axes"].is_array() || j["axes"].empty())
        throw ConfigError("sweep.axes: expected a non-empty array");
    for (const auto& a : j["axes"]) {
        reject_unknown(a, {"name", "values", "range"}, "sweep.axes");
        SweepAxis axis;
        if (!a.contains("name") || !a["name"].is_string())
            throw ConfigError("sweep.axes: each axis needs a name");
        axis.name = a["name"].get<std::string>();
        if (a.contains("values") == a.contains("range"))
            throw ConfigError("sweep axis \"" + axis.name +
                              "\": give exactly one of values or range");
        if (a.contains("values")) {
            if (!a["values"].is_array() || a["values"].empty())
                throw ConfigError("sweep axis \"" + axis.name + "\": values must be non-empty");
            for (const auto& v : a["values"]) axis.values.push_back(num_at(v, axis.name));
        } else {
            const json& r = a["range"];
            if (!r.is_array() || r.size() != 3)
                throw ConfigError("sweep axis \"" + axis.name + "\": range is [lo, hi, count]");
            double lo = num_at(r[0], axis.name), hi = num_at(r[1], axis.name);
            if (!r[2].is_number_integer() || r[2].get<long long>() < 1)
                throw ConfigError("sweep axis \"" + axis.name + "\": count must be >= 1");
            long long count = r[2].get<long long>();
            if (count > 10000)
                throw ConfigError("sweep axis \"" + axis.name + "\": count capped at 10000");
            for (long long i = 0; i < count; ++i)
                axis.values.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
        }
        out.sweep.push_back(std::move(axis));
    }
    long long total = 1;
    for (const auto& a : out.sweep) total *= (long long)a.values.size();
    if (total > 100000) throw ConfigError("sweep: more than 100000 combinations");
}

inline void parse_simulate(const json& j, JobConfig& out) {
    reject_unknown(j, {"g0", "s_range", "steps"}, "simulate");
    if (j.contains("g0")) {
        const json& g = j["g0"];
        if (!g.is_array() || g.size() != 3)
            throw ConfigError("simulate.g0: expected [t, x, y]");
        out.sim.g0 = {num_at(g[0], "simulate.g0"),
                      {num_at(g[1], "simulate.g0"), num_at(g[2], "simulate.g0")}};
    }
    if (j.contains("s_range")) {
        out.sim.s_range = pair_at(j["s_range"], "simulate.s_range");
        if (!(out.sim.s_range[0] < out.sim.s_range[1]))
            throw ConfigError("simulate.s_range: lower bound must be below the upper bound");
    }
    if (j.contains("steps")) {
        if (!j["steps"].is_number_integer() || j["steps"].get<long long>() < 1 ||
            j["steps"].get<long long>() > 1000000)
            throw ConfigError("simulate.steps: expected an integer in [1, 1000000]");
        out.sim.steps = (int)j["steps"].get<long long>();
    }
}

}  // namespace cfg_detail

inline JobConfig config_from_json(const nlohmann::json& j) {
    using namespace cfg_detail;
    if (!j.is_object()) throw ConfigError("top level: expected an object");
    reject_unknown(j, {"group", "field", "hom", "kernel", "options", "sweep", "simulate"},
                   "top level");
    JobConfig out;
    out.tol = Tolerances::from_env();  // config-file values override these
    if (!j.contains("group")) throw ConfigError("group: required");
    parse_group(j["group"], out);
    if (j.contains("field")) parse_field(j["field"], out);
    if (j.contains("hom")) parse_hom(j["hom"], out);
    if (j.contains("kernel")) parse_kernel(j["kernel"], out);
    if (out.has_hom && out.has_functionals)
        throw ConfigError("give either hom or kernel, not both");
    if (j.contains("options")) parse_options(j["options"], out);
    if (j.contains("sweep")) parse_sweep(j["sweep"], out);
    if (j.contains("simulate")) parse_simulate(j["simulate"], out);
    return out;
}

inline JobConfig config_from_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

// The catalogued homomorphism described by the config, built with the family
// constraints enforced.
inline HomSpec resolve_hom(const JobConfig& cfg) {
    if (!cfg.has_hom) throw ConfigError("this operation needs a hom block");
    try {
        if (cfg.zero_map) return zero_hom(cfg.cls, cfg.target);
        return make_hom(cfg.cls, cfg.target, cfg.coeffs);
    } catch (const UnknownTarget& e) {
        throw ConfigError(std::string("hom: ") + e.what());
    } catch (const NonCanonicalHom& e) {
        throw ConfigError(std::string("hom: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("hom: ") + e.what());
    }
}

// Sweep axes mutate a copy of the base config; names follow the row layout
// of dstar, so "dstar.b" is the top-right entry. The rotation pair moves
// both off-diagonal entries in lockstep, keeping dstar in the similarity
// class of a rotation times scaling.
inline void apply_axis(JobConfig& cfg, const std::string& name, double value) {
    if (name == "dstar.a") cfg.field.dstar.a = value;
    else if (name == "dstar.b") cfg.field.dstar.b = value;
    else if (name == "dstar.c") cfg.field.dstar.c = value;
    else if (name == "dstar.d") cfg.field.dstar.d = value;
    else if (name == "xi.1") cfg.field.xi.x = value;
    else if (name == "xi.2") cfg.field.xi.y = value;
    else if (name == "lambda") {
        cfg.cls.lambda = value;
        try {
            cfg.cls.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("sweep lambda: ") + e.what());
        }
    } else if (name == "rotation.a") {
        cfg.field.dstar.a = value;
        cfg.field.dstar.d = value;
    } else if (name == "rotation.b") {
        cfg.field.dstar.b = -value;
        cfg.field.dstar.c = value;
    } else if (name.rfind("coeff.", 0) == 0) {
        std::string coeff = name.substr(6);
        if (coeff.empty()) throw ConfigError("sweep axis \"coeff.\": missing coefficient name");
        if (!cfg.has_hom)
            throw ConfigError("sweep axis \"" + name + "\" needs a hom block");
        cfg.coeffs[coeff] = value;
    } else {
        throw ConfigError("unknown sweep axis \"" + name + "\"");
    }
}

}  // namespace lieobs
