// Command line front end: classify one pair, scan a parameter sweep,
// simulate the flow, or self-audit a configured job. Job descriptions are
// JSON files; results go to stdout or --out in text, csv or json form.
//
// Exit codes: 0 success, 1 failed validation checks under --strict,
// 2 configuration or usage error, 3 window-limited verdict under --strict.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lieobs/driver.hpp"

namespace {

struct CommonOpts {
    std::string config;
    std::string out;
    std::string format = "text";
    bool strict = false;
    std::uint64_t seed = 0;
    std::vector<double> t_window;
    double s_span = 0.0;
    double s_step = 0.0;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* t_window_opt = nullptr;
    CLI::Option* s_span_opt = nullptr;
    CLI::Option* s_step_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "job description (JSON file)")->required();
    cmd->add_option("--out", o.out, "write the report to this file instead of stdout");
    cmd->add_option("--format", o.format, "output format: text, csv or json")
        ->capture_default_str();
    cmd->add_flag("--strict", o.strict,
                  "exit 1 on failed checks, exit 3 on window-limited verdicts");
    o.seed_opt = cmd->add_option("--seed", o.seed, "override options.seed");
    o.t_window_opt = cmd->add_option("--t-window", o.t_window,
                                     "override options.t_window as LO HI")
                         ->expected(2);
    o.s_span_opt = cmd->add_option("--s-span", o.s_span, "override options.s_grid.span");
    o.s_step_opt = cmd->add_option("--s-step", o.s_step, "override options.s_grid.step");
}

lieobs::JobConfig load_config(const CommonOpts& o) {
    std::ifstream in(o.config);
    if (!in) throw lieobs::ConfigError("cannot read config file \"" + o.config + "\"");
    std::stringstream ss;
    ss << in.rdbuf();
    lieobs::JobConfig cfg = lieobs::config_from_string(ss.str());
    if (o.seed_opt->count()) cfg.seed = o.seed;
    if (o.t_window_opt->count()) {
        if (!(o.t_window[0] < o.t_window[1]))
            throw lieobs::ConfigError("--t-window: lower bound must be below the upper bound");
        cfg.t_window = {o.t_window[0], o.t_window[1]};
    }
    if (o.s_span_opt->count()) cfg.s_grid.span = o.s_span;
    if (o.s_step_opt->count()) cfg.s_grid.step = o.s_step;
    if (cfg.s_grid.span <= 0.0 || cfg.s_grid.step <= 0.0 || cfg.s_grid.step > cfg.s_grid.span)
        throw lieobs::ConfigError("--s-span/--s-step: need 0 < step <= span");
    return cfg;
}

int deliver(const lieobs::RunOutput& ro, const CommonOpts& o) {
    if (o.out.empty()) {
        std::cout << ro.body;
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) throw lieobs::ConfigError("cannot write to \"" + o.out + "\"");
        f << ro.body;
    }
    return ro.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "local and global observability of linear pairs on the simply connected "
        "solvable non-nilpotent 3-dimensional Lie groups"};
    app.require_subcommand(1);

    CommonOpts oc, os, om, ov;
    CLI::App* classify =
        app.add_subcommand("classify", "decide observability of the configured pair");
    add_common(classify, oc);
    CLI::App* scan = app.add_subcommand("scan", "classify across a parameter sweep");
    add_common(scan, os);
    CLI::App* simulate = app.add_subcommand("simulate", "sample the flow from a start point");
    add_common(simulate, om);
    CLI::App* validate = app.add_subcommand("validate", "self-audit the configured job");
    add_common(validate, ov);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (classify->parsed())
            return deliver(lieobs::run_classify(load_config(oc),
                                                lieobs::format_from_string(oc.format),
                                                oc.strict),
                           oc);
        if (scan->parsed())
            return deliver(
                lieobs::run_scan(load_config(os), lieobs::format_from_string(os.format),
                                 os.strict),
                os);
        if (simulate->parsed())
            return deliver(
                lieobs::run_simulate(load_config(om), lieobs::format_from_string(om.format)),
                om);
        return deliver(lieobs::run_validate(load_config(ov),
                                            lieobs::format_from_string(ov.format), ov.strict),
                       ov);
    } catch (const lieobs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
