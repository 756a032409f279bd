#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "kinet/scenario.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    kinet::RunOptions opt;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "scenario config file")->required();
    cmd->add_option("--out-dir", args.opt.out_dir, "output directory (default: out)");
    cmd->add_option("--threads", args.opt.threads, "worker threads for cell-parallel substeps");
    cmd->add_option("--seed", args.opt.seed, "override the config's random seed");
    cmd->add_flag("--force", args.opt.force, "override resource guards");
}

// exit codes: 0 success, 1 validation, 2 runtime, 3 acceptance-check failure
int execute(const CommonArgs& args, const std::string& expected_kind) {
    kinet::ConfigMap cfg;
    try {
        cfg = kinet::ConfigMap::parse_file(args.config_path);
        if (!expected_kind.empty()) {
            const std::string kind = cfg.get_string("scenario.kind", expected_kind);
            if (kind != expected_kind)
                throw kinet::config_error("config: scenario.kind '" + kind +
                                          "' does not match subcommand '" + expected_kind + "'");
        }
    } catch (const kinet::config_error& e) {
        std::fprintf(stderr, "kinet: %s\n", e.what());
        return 1;
    }
    try {
        const kinet::ScenarioResult result = kinet::run_scenario(cfg, args.opt);
        std::printf("%s", result.report_json.c_str());
        if (!result.checks_passed) {
            std::fprintf(stderr, "kinet: scenario checks failed (see report)\n");
            return 3;
        }
        return 0;
    } catch (const kinet::config_error& e) {
        std::fprintf(stderr, "kinet: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "kinet: runtime error: %s\n", e.what());
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic Boltzmann solver: spectral and discrete-velocity collision "
                 "operators with asymptotic-preserving time integration"};
    app.require_subcommand(1);

    CommonArgs run_args, km_args, conv_args, ap_args;
    CLI::App* run = app.add_subcommand("run", "run a scenario config");
    add_common(run, run_args);
    CLI::App* km = app.add_subcommand("build-kernel-modes", "build and cache a kernel-mode table");
    add_common(km, km_args);
    CLI::App* conv = app.add_subcommand("convergence", "run a convergence study");
    add_common(conv, conv_args);
    CLI::App* ap = app.add_subcommand("ap-sweep", "stiffness sweep across Knudsen numbers");
    add_common(ap, ap_args);

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return execute(run_args, "");
    if (km->parsed()) return execute(km_args, "kernel-mode-build");
    if (conv->parsed()) return execute(conv_args, "convergence-study");
    if (ap->parsed()) return execute(ap_args, "ap-sweep");
    return 1;
}
