// Scenario runner: solves each configured problem, runs its checks and
// writes reports under the output directory.
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "smm/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Verify gradient estimates for positive solutions of Delta_f u + Sigma(x, u) = 0 on model spaces"};

    std::string config;
    std::string out;
    unsigned jobs = 1;
    int grid = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> checks;

    app.add_option("--config", config, "Scenario config (JSON)")->required();
    auto* out_opt = app.add_option("--out", out, "Output directory (overrides output.dir)");
    app.add_option("--jobs", jobs, "Scenarios run concurrently")->check(CLI::PositiveNumber);
    auto* grid_opt = app.add_option("--grid", grid, "Grid intervals for every scenario");
    auto* seed_opt = app.add_option("--seed", seed, "Seed for every scenario");
    app.add_option("--check", checks, "Run only these checks (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    smm::RunOverrides overrides;
    if (*out_opt) overrides.out = out;
    if (*grid_opt) overrides.grid = grid;
    if (*seed_opt) overrides.seed = seed;
    overrides.jobs = jobs;
    overrides.checks = checks;

    return smm::run(config, overrides, std::cout, std::cerr).exit_code;
}
