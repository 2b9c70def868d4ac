#pragma once

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "lieobs/config.hpp"

namespace lieobs {

enum class OutFormat { Text, Csv, Json };

inline OutFormat format_from_string(const std::string& s) {
    if (s == "text") return OutFormat::Text;
    if (s == "csv") return OutFormat::Csv;
    if (s == "json") return OutFormat::Json;
    throw ConfigError("unknown format \"" + s + "\" (expected text, csv or json)");
}

struct RunOutput {
    std::string body;
    int exit_code = 0;
};

namespace driver_detail {

inline std::string fmt_g(double v, int prec = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

inline const char* bstr(bool b) { return b ? "true" : "false"; }

struct ClassifiedRow {
    PairReport rep;
    bool numeric_discrete = false;
    bool numeric_agree = false;
};

// One full classification: the analytic pipeline plus the sampling oracle
// cross-check on discreteness. Every reported verdict carries both.
inline ClassifiedRow classify_one(const JobConfig& cfg) {
    ClassifiedRow row;
    if (cfg.has_hom) {
        row.rep = classify_pair(cfg.cls, cfg.field, resolve_hom(cfg), cfg.t_window, cfg.tol);
    } else if (cfg.has_functionals) {
        row.rep =
            classify_functionals(cfg.cls, cfg.field, cfg.functionals, cfg.t_window, cfg.tol);
    } else {
        throw ConfigError("classification needs a hom or kernel block");
    }
    SetDescriptor numeric = indistinguishable_numeric(cfg.cls, cfg.field,
                                                      row.rep.kernel_functionals, cfg.s_grid,
                                                      {}, cfg.tol);
    row.numeric_discrete = is_discrete(numeric, cfg.tol.identity_cluster);
    row.numeric_agree = row.numeric_discrete == row.rep.i_discrete;
    return row;
}

inline std::string kernel_name(const PairReport& rep) {
    if (rep.kernel_named) return to_string(rep.kernel.kind);
    return "RawFunctionals";
}

inline const char* const kRowHeader =
    "group,lambda,kernel,verdict,provenance,i_set,fix_set,i_discrete,fix_trivial,"
    "numeric_discrete,numeric_agree,window_limited,label";

inline std::string row_csv(const JobConfig& cfg, const ClassifiedRow& row) {
    const PairReport& r = row.rep;
    std::string s;
    s += to_string(cfg.cls.kind);
    s += ',';
    s += cfg.cls.has_lambda() ? fmt_g(cfg.cls.lambda) : "";
    s += ',';
    s += kernel_name(r);
    s += ',';
    s += to_string(r.verdict);
    s += ',';
    s += to_string(r.provenance);
    s += ',';
    s += to_string(r.i_set.kind);
    s += ',';
    s += to_string(r.fix_cap_k.kind);
    s += ',';
    s += bstr(r.i_discrete);
    s += ',';
    s += bstr(r.fix_trivial);
    s += ',';
    s += bstr(row.numeric_discrete);
    s += ',';
    s += bstr(row.numeric_agree);
    s += ',';
    s += bstr(r.i_set.window_limited || r.fix_cap_k.window_limited);
    s += ',';
    std::string label = r.label.empty() ? r.notes : r.label;
    for (char& c : label)
        if (c == ',') c = ';';
    s += label;
    return s;
}

inline nlohmann::ordered_json row_json(const JobConfig& cfg, const ClassifiedRow& row) {
    const PairReport& r = row.rep;
    nlohmann::ordered_json j;
    j["group"] = to_string(cfg.cls.kind);
    if (cfg.cls.has_lambda()) j["lambda"] = cfg.cls.lambda;
    j["kernel"] = kernel_name(r);
    j["verdict"] = to_string(r.verdict);
    j["provenance"] = to_string(r.provenance);
    j["i_set"] = to_string(r.i_set.kind);
    j["fix_set"] = to_string(r.fix_cap_k.kind);
    j["i_discrete"] = r.i_discrete;
    j["fix_trivial"] = r.fix_trivial;
    j["numeric_discrete"] = row.numeric_discrete;
    j["numeric_agree"] = row.numeric_agree;
    j["window_limited"] = r.i_set.window_limited || r.fix_cap_k.window_limited;
    j["label"] = r.label;
    j["notes"] = r.notes;
    return j;
}

}  // namespace driver_detail

inline RunOutput run_classify(const JobConfig& cfg, OutFormat format, bool strict) {
    using namespace driver_detail;
    ClassifiedRow row = classify_one(cfg);
    RunOutput out;
    if (strict && row.rep.provenance == Provenance::NumericOnly) out.exit_code = 3;

    if (format == OutFormat::Csv) {
        out.body = std::string(kRowHeader) + "\n" + row_csv(cfg, row) + "\n";
        return out;
    }
    if (format == OutFormat::Json) {
        out.body = row_json(cfg, row).dump(2) + "\n";
        return out;
    }
    const PairReport& r = row.rep;
    auto line = [&out](const char* k, const std::string& v) {
        out.body += k;
        out.body += v;
        out.body += '\n';
    };
    line("group:             ", std::string(to_string(cfg.cls.kind)) +
                                    (cfg.cls.has_lambda()
                                         ? " (lambda " + fmt_g(cfg.cls.lambda, 9) + ")"
                                         : ""));
    line("kernel:            ", kernel_name(r));
    line("verdict:           ", to_string(r.verdict));
    line("provenance:        ", to_string(r.provenance));
    line("indistinguishable: ", std::string(to_string(r.i_set.kind)) +
                                    (r.i_set.note.empty() ? "" : " [" + r.i_set.note + "]"));
    line("fixed-in-kernel:   ", std::string(to_string(r.fix_cap_k.kind)) +
                                    (r.fix_cap_k.note.empty() ? "" : " [" + r.fix_cap_k.note + "]"));
    line("numeric oracle:    ", std::string(row.numeric_discrete ? "discrete" : "not discrete") +
                                    (row.numeric_agree ? ", agrees" : ", DISAGREES"));
    if (!r.label.empty()) line("label:             ", r.label);
    if (!r.notes.empty()) line("notes:             ", r.notes);
    return out;
}

inline RunOutput run_scan(const JobConfig& cfg, OutFormat format, bool strict) {
    using namespace driver_detail;
    if (cfg.sweep.empty()) throw ConfigError("scan needs a sweep block");

    struct ScanRow {
        std::vector<double> coords;
        JobConfig point;
        ClassifiedRow row;
    };
    std::vector<size_t> idx(cfg.sweep.size(), 0);
    bool any_window_limited = false;
    std::vector<ScanRow> rows;
    for (;;) {
        JobConfig point = cfg;
        point.sweep.clear();
        std::vector<double> coords;
        for (size_t i = 0; i < cfg.sweep.size(); ++i) {
            double v = cfg.sweep[i].values[idx[i]];
            apply_axis(point, cfg.sweep[i].name, v);
            coords.push_back(v);
        }
        ClassifiedRow row = classify_one(point);
        if (row.rep.provenance == Provenance::NumericOnly) any_window_limited = true;
        rows.push_back({std::move(coords), std::move(point), std::move(row)});

        // Odometer advance, last axis fastest.
        size_t k = cfg.sweep.size();
        while (k > 0) {
            --k;
            if (++idx[k] < cfg.sweep[k].values.size()) break;
            idx[k] = 0;
            if (k == 0) goto done;
        }
    }
done:
    RunOutput out;
    if (strict && any_window_limited) out.exit_code = 3;

    if (format == OutFormat::Json) {
        nlohmann::ordered_json j;
        j["axes"] = nlohmann::json::array();
        for (const auto& a : cfg.sweep) j["axes"].push_back(a.name);
        j["rows"] = nlohmann::json::array();
        for (const auto& sr : rows) {
            nlohmann::ordered_json rj = row_json(sr.point, sr.row);
            nlohmann::ordered_json merged;
            for (size_t i = 0; i < cfg.sweep.size(); ++i)
                merged[cfg.sweep[i].name] = sr.coords[i];
            for (auto it = rj.begin(); it != rj.end(); ++it) merged[it.key()] = it.value();
            j["rows"].push_back(std::move(merged));
        }
        out.body = j.dump(2) + "\n";
        return out;
    }

    // csv and text share the tabular layout.
    std::string header;
    for (const auto& a : cfg.sweep) {
        header += a.name;
        header += ',';
    }
    header += kRowHeader;
    out.body = header + "\n";
    for (const auto& sr : rows) {
        std::string line;
        for (double v : sr.coords) {
            line += fmt_g(v);
            line += ',';
        }
        line += row_csv(sr.point, sr.row);
        out.body += line + "\n";
    }
    return out;
}

inline RunOutput run_simulate(const JobConfig& cfg, OutFormat format) {
    using namespace driver_detail;
    bool with_hom = cfg.has_hom;
    HomSpec hom;
    if (with_hom) hom = resolve_hom(cfg);

    struct Row {
        double s;
        GroupElement g;
        GroupElement image;
    };
    std::vector<Row> rows;
    for (int i = 0; i <= cfg.sim.steps; ++i) {
        double s = cfg.sim.s_range[0] +
                   (cfg.sim.s_range[1] - cfg.sim.s_range[0]) * i / cfg.sim.steps;
        Row row;
        row.s = s;
        row.g = flow(cfg.cls, cfg.field, s, cfg.sim.g0);
        if (with_hom) row.image = hom_apply(hom, row.g);
        rows.push_back(row);
    }

    RunOutput out;
    if (format == OutFormat::Json) {
        nlohmann::ordered_json j;
        j["group"] = to_string(cfg.cls.kind);
        if (cfg.cls.has_lambda()) j["lambda"] = cfg.cls.lambda;
        j["rows"] = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::ordered_json rj;
            rj["s"] = r.s;
            rj["t"] = r.g.t;
            rj["x"] = r.g.v.x;
            rj["y"] = r.g.v.y;
            if (with_hom) {
                rj["image_t"] = r.image.t;
                rj["image_x"] = r.image.v.x;
                rj["image_y"] = r.image.v.y;
            }
            j["rows"].push_back(std::move(rj));
        }
        out.body = j.dump(2) + "\n";
        return out;
    }
    int prec = format == OutFormat::Csv ? 17 : 9;
    out.body = with_hom ? "s,t,x,y,image_t,image_x,image_y\n" : "s,t,x,y\n";
    for (const auto& r : rows) {
        out.body += fmt_g(r.s, prec) + "," + fmt_g(r.g.t, prec) + "," + fmt_g(r.g.v.x, prec) +
                    "," + fmt_g(r.g.v.y, prec);
        if (with_hom)
            out.body += "," + fmt_g(r.image.t, prec) + "," + fmt_g(r.image.v.x, prec) + "," +
                        fmt_g(r.image.v.y, prec);
        out.body += "\n";
    }
    return out;
}

// Self-audit of the configured job: algebraic laws, flow consistency and
// oracle agreement, each reported as PASS / FAIL / SKIP.
inline RunOutput run_validate(const JobConfig& cfg, OutFormat format, bool strict) {
    using namespace driver_detail;

    struct Check {
        std::string name;
        std::string status;  // PASS, FAIL, SKIP
        double value = 0.0;
        double limit = 0.0;
        std::string detail;
    };
    std::vector<Check> checks;
    auto push = [&checks](const std::string& name, bool pass, double value, double limit,
                          const std::string& detail = "") {
        checks.push_back({name, pass ? "PASS" : "FAIL", value, limit, detail});
    };
    auto skip = [&checks](const std::string& name, const std::string& why) {
        checks.push_back({name, "SKIP", 0.0, 0.0, why});
    };

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    auto rnd_elem = [&]() { return GroupElement{u(rng), {u(rng), u(rng)}}; };

    // Group law on random samples; a failure here would mean the class data
    // itself is wrong, everything downstream depends on it.
    {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            GroupElement a = rnd_elem(), b = rnd_elem(), c = rnd_elem();
            GroupElement ab_c = multiply(cfg.cls, multiply(cfg.cls, a, b), c);
            GroupElement a_bc = multiply(cfg.cls, a, multiply(cfg.cls, b, c));
            worst = std::max(worst, distance_inf(ab_c, a_bc));
            worst = std::max(worst,
                             distance_inf(multiply(cfg.cls, a, inverse(cfg.cls, a)), {}));
        }
        push("group-law", worst < 1e-9, worst, 1e-9);
    }

    // Closed-form flow against a blind RK4 integration.
    {
        double worst = 0.0;
        for (int i = 0; i < 25; ++i) {
            GroupElement g = rnd_elem();
            double s = 2.0 * u(rng) / 1.5;
            GroupElement a = flow(cfg.cls, cfg.field, s, g);
            GroupElement b = flow_rk4(cfg.cls, cfg.field, s, g, 1e-3);
            worst = std::max(worst, distance_inf(a, b));
        }
        push("flow-rk4", worst < 1e-6, worst, 1e-6);
    }

    // One-parameter law of the flow.
    {
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            GroupElement g = rnd_elem();
            double s = u(rng), r = u(rng);
            GroupElement a = flow(cfg.cls, cfg.field, s + r, g);
            GroupElement b = flow(cfg.cls, cfg.field, s, flow(cfg.cls, cfg.field, r, g));
            worst = std::max(worst, distance_inf(a, b));
        }
        push("flow-cocycle", worst < 1e-9, worst, 1e-9);
    }

    if (cfg.has_hom) {
        HomSpec hom = resolve_hom(cfg);
        HomValidation hv = hom_validate(hom, 200, (unsigned)cfg.seed);
        push("hom-law", hv.pass, hv.max_residual, 1e-9);

        KernelDescriptor k = kernel_of(hom, cfg.tol);
        auto basis = kernel_null_basis(k.functionals);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            Vec3 pa{}, pb{};
            for (const auto& b : basis) {
                pa = pa + u(rng) * b;
                pb = pb + u(rng) * b;
            }
            GroupElement prod = multiply(cfg.cls, to_element(pa), to_element(pb));
            worst = std::max(worst, kernel_residual(k, prod));
            worst = std::max(worst, kernel_residual(k, inverse(cfg.cls, to_element(pa))));
        }
        push("kernel-closure", worst < cfg.tol.kernel_membership, worst,
             cfg.tol.kernel_membership);
    } else {
        skip("hom-law", "no hom block");
        skip("kernel-closure", "no hom block");
    }

    bool window_limited = false;
    if (cfg.has_hom || cfg.has_functionals) {
        ClassifiedRow row = classify_one(cfg);
        window_limited = row.rep.provenance == Provenance::NumericOnly;
        push("verdict-agreement", row.numeric_agree, row.numeric_agree ? 0.0 : 1.0, 0.5,
             std::string("analytic ") + (row.rep.i_discrete ? "discrete" : "not discrete") +
                 ", numeric " + (row.numeric_discrete ? "discrete" : "not discrete"));
    } else {
        skip("verdict-agreement", "no hom or kernel block");
    }

    bool any_fail = false;
    for (const auto& c : checks) any_fail = any_fail || c.status == "FAIL";

    RunOutput out;
    if (any_fail && strict)
        out.exit_code = 1;
    else if (window_limited && strict)
        out.exit_code = 3;

    if (format == OutFormat::Json) {
        nlohmann::ordered_json j = nlohmann::json::array();
        for (const auto& c : checks) {
            nlohmann::ordered_json cj;
            cj["check"] = c.name;
            cj["status"] = c.status;
            if (c.status != "SKIP") {
                cj["value"] = c.value;
                cj["limit"] = c.limit;
            }
            if (!c.detail.empty()) cj["detail"] = c.detail;
            j.push_back(std::move(cj));
        }
        out.body = j.dump(2) + "\n";
        return out;
    }
    if (format == OutFormat::Csv) {
        out.body = "check,status,value,limit,detail\n";
        for (const auto& c : checks) {
            std::string detail = c.detail;
            for (char& ch : detail)
                if (ch == ',') ch = ';';
            out.body += c.name + "," + c.status + "," +
                        (c.status == "SKIP" ? "" : fmt_g(c.value)) + "," +
                        (c.status == "SKIP" ? "" : fmt_g(c.limit)) + "," + detail + "\n";
        }
        return out;
    }
    for (const auto& c : checks) {
        out.body += c.status + " " + c.name;
        if (c.status != "SKIP")
            out.body +=
                "  value " + fmt_g(c.value, 6) + " (limit " + fmt_g(c.limit, 6) + ")";
        if (!c.detail.empty()) out.body += "  [" + c.detail + "]";
        out.body += "\n";
    }
    return out;
}

}  // namespace lieobs
