#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "zlab/errors.hpp"
#include "zlab/lab.hpp"

using namespace zlab;

namespace {

// Exit codes: 0 all criteria pass, 1 a criterion failed, 2 usage, 3 module error.
int run_cli(int argc, char** argv) {
    CLI::App app{"Desk-scale experiments on zeta maxima, the random Euler model and barrier walks"};
    std::string experiment, config_path, out;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    bool list = false;
    app.add_option("experiment", experiment, "suite name (see --list)");
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--seed", seed, "overrides the config seed");
    app.add_option("--workers", workers, "overrides the config worker count")->check(CLI::PositiveNumber);
    app.add_option("--out", out, "directory for CSV tables and the JSON record");
    app.add_flag("--list", list, "list the experiment suites");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (list) {
        for (const auto& s : lab::registry()) {
            std::string ids;
            for (int c : s.criteria) ids += (ids.empty() ? "" : ",") + std::to_string(c);
            std::printf("%-20s %-8s %s\n", s.name.c_str(), ids.empty() ? "-" : ids.c_str(), s.summary.c_str());
        }
        return 0;
    }
    if (experiment.empty()) throw UsageError("lab_cli", "missing experiment name (try --list)");
    if (config_path.empty()) throw UsageError("lab_cli", "--config is required");
    lab::find_suite(experiment);

    lab::ExperimentConfig cfg = lab::load_config(config_path);
    if (!cfg.experiment.empty() && cfg.experiment != experiment)
        throw UsageError("lab_cli", "config is for '" + cfg.experiment + "', not '" + experiment + "'");
    cfg.experiment = experiment;
    if (app.count("--seed")) cfg.seed = seed;
    if (app.count("--workers")) cfg.workers = workers;
    if (app.count("--out")) cfg.out_dir = out;

    const auto rec = lab::run(cfg);
    std::printf("%s  params %s  seed %llu  workers %u  %.2f s\n", rec.experiment.c_str(), rec.params_hash.c_str(),
                static_cast<unsigned long long>(rec.seed), rec.workers, rec.wall_seconds);
    for (const auto& m : rec.metrics) {
        if (std::isnan(m.lo))
            std::printf("  %-32s %.10g\n", m.name.c_str(), m.value);
        else
            std::printf("  %-32s %.10g  [%.10g, %.10g]\n", m.name.c_str(), m.value, m.lo, m.hi);
    }
    for (const auto& c : rec.criteria)
        std::printf("  criterion %d %-22s %s  %s\n", c.id, c.part.c_str(), c.pass ? "PASS" : "FAIL", c.detail.c_str());
    if (!cfg.out_dir.empty()) std::printf("  written to %s\n", cfg.out_dir.c_str());
    return rec.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error in %s: %s\n", e.module().c_str(), e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
