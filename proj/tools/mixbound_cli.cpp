#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mixbound/config.hpp"

namespace {

int run(const std::string& config_path, const std::string& command,
        const std::string& suite, const std::string& out_dir, std::uint64_t seed,
        bool seed_set, int jobs) {
    std::string text = "{}";
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::fprintf(stderr, "error: cannot read config file %s\n", config_path.c_str());
            return 3;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    mixbound::ExperimentConfig cfg;
    try {
        cfg = mixbound::parse_config(text);
    } catch (const mixbound::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    cfg.command = command;
    if (!suite.empty()) cfg.suite = suite;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed_set) {
        cfg.seed = seed;
        cfg.seed_set = true;
    }
    if (jobs > 0) cfg.jobs = jobs;
    return mixbound::run_experiment(cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Convergence bounds and diagnostics for Metropolis chains"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    int jobs = 0;
    bool seed_set = false;
    app.add_option("--config", config_path, "JSON experiment config");
    app.add_option("--out", out_dir, "output directory for reports");
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides config)");
    app.add_option("--jobs", jobs, "worker threads for scan/verify fan-out");
    app.fallthrough();

    auto* bound = app.add_subcommand("bound", "compute convergence bound report");
    auto* sample = app.add_subcommand("sample", "run a Markov chain and record statistics");
    auto* verify = app.add_subcommand("verify", "run a named verification suite");
    std::string suite;
    verify->add_option("suite", suite, "acceptance-floor | gap-sandwich | flow-sandwich | scaling-slope")
        ->required();
    auto* scan = app.add_subcommand("scan", "sweep dimensions and compare to bounds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    seed_set = seed_opt->count() > 0;

    std::string command;
    if (bound->parsed()) command = "bound";
    else if (sample->parsed()) command = "sample";
    else if (verify->parsed()) command = "verify";
    else if (scan->parsed()) command = "scan";
    return run(config_path, command, suite, out_dir, seed, seed_set, jobs);
}
