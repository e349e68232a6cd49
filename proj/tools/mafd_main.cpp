#include <CLI11.hpp>
#include <string>

#include "mafd/runner.hpp"
#include "mafd/version.hpp"

namespace {

void add_common_flags(CLI::App* cmd, mafd::RunConfig& cfg, std::string& scheme,
                      std::string& mode) {
    cmd->add_option("--problem", cfg.problem, "Problem name from the built-in catalog")
        ->envname("MAFD_PROBLEM");
    cmd->add_option("--custom", cfg.custom_path, "JSON file with tabulated node values")
        ->envname("MAFD_CUSTOM");
    cmd->add_option("--scheme", scheme,
                    "central | compatible-sym | compatible-transpose | compatible-hat")
        ->envname("MAFD_SCHEME");
    cmd->add_option("--mode", mode, "full | interior")->envname("MAFD_MODE");
    cmd->add_option("--nu", cfg.nu, "Damping parameter (<=0 picks the problem default)")
        ->envname("MAFD_NU");
    cmd->add_option("--solver", cfg.solver, "march | newton | chained | rescaled")
        ->envname("MAFD_SOLVER");
    cmd->add_option("--tol-inc", cfg.tol_inc, "Stop when the increment max norm drops below")
        ->envname("MAFD_TOL_INC");
    cmd->add_option("--tol-res", cfg.tol_res, "Stop when the residual max norm drops below")
        ->envname("MAFD_TOL_RES");
    cmd->add_option("--max-iters", cfg.max_iters, "Iteration cap")->envname("MAFD_MAX_ITERS");
    cmd->add_option("--delta", cfg.delta, "Closeness measure for the rescaled solver")
        ->envname("MAFD_DELTA");
    cmd->add_option("--out", cfg.out_dir, "Output directory")->envname("MAFD_OUT");
    cmd->add_option("--seed", cfg.seed, "Seed for randomized property suites")
        ->envname("MAFD_SEED");
    cmd->add_option("--threads", cfg.threads, "Internal thread cap")->envname("MAFD_THREADS");
}

int parse_enums(mafd::RunConfig& cfg, const std::string& scheme, const std::string& mode) {
    try {
        cfg.scheme = mafd::parse_scheme(scheme);
        if (mode == "full")
            cfg.mode = mafd::GridMode::Full;
        else if (mode == "interior")
            cfg.mode = mafd::GridMode::Interior;
        else
            throw std::invalid_argument("unknown mode '" + mode + "'");
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("mafd ") + mafd::kVersion +
                 " - finite-difference solver for det D2u = f on the unit box"};
    app.require_subcommand(1);

    mafd::RunConfig cfg;
    std::string scheme = "compatible-sym";
    std::string mode = "full";
    int n_single = 16;
    std::vector<int> n_list;

    CLI::App* solve = app.add_subcommand("solve", "Run one solve; writes solution.csv, report.json");
    add_common_flags(solve, cfg, scheme, mode);
    solve->add_option("--n", n_single, "Subdivisions per axis (h = 1/n)")->envname("MAFD_N");

    CLI::App* sweep = app.add_subcommand("sweep", "Convergence sweep over n; writes table.csv");
    add_common_flags(sweep, cfg, scheme, mode);
    sweep->add_option("--n", n_list, "List of subdivisions per axis")
        ->envname("MAFD_N")
        ->expected(-1);

    CLI::App* verify = app.add_subcommand("verify", "Run the identity suite; writes verify.json");
    verify->add_option("--seed", cfg.seed, "Seed for randomized checks")->envname("MAFD_SEED");
    verify->add_option("--out", cfg.out_dir, "Output directory")->envname("MAFD_OUT");

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) {
        if (int rc = parse_enums(cfg, scheme, mode)) return rc;
        cfg.n_list = {n_single};
        return mafd::cmd_solve(cfg);
    }
    if (sweep->parsed()) {
        if (int rc = parse_enums(cfg, scheme, mode)) return rc;
        if (!n_list.empty()) cfg.n_list = n_list;
        return mafd::cmd_sweep(cfg);
    }
    return mafd::cmd_verify(cfg);
}
