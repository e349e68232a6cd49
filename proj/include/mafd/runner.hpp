#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mafd/grid.hpp"
#include "mafd/ma_ops.hpp"

namespace mafd {

/// Everything a CLI run needs; validated before any compute and echoed into
/// every output file.
struct RunConfig {
    std::string problem;      // catalog name; empty when custom_path is set
    std::string custom_path;  // JSON file with tabulated node values
    SchemeKind scheme = SchemeKind::CompatibleSym;
    GridMode mode = GridMode::Full;
    std::vector<int> n_list = {16};  // one entry for solve, several for sweep
    double nu = -1.0;                // <= 0 picks the problem default
    std::string solver = "march";    // march | newton | chained | rescaled
    double tol_inc = 1e-8;
    double tol_res = 1e-8;
    int max_iters = 50000;
    double delta = 1.0;  // rescaled solver closeness measure
    std::string out_dir = ".";
    std::uint64_t seed = 12345;
    int threads = 1;

    /// Throws std::invalid_argument with a descriptive message.
    void validate() const;
};

/// Exit codes: 0 success, 1 invalid configuration, 2 diverged solve,
/// 3 verification failures. Failures print a JSON error object to stdout.
int cmd_solve(const RunConfig& cfg);   // writes solution.csv and report.json
int cmd_sweep(const RunConfig& cfg);   // writes table.csv
int cmd_verify(const RunConfig& cfg);  // writes verify.json

}  // namespace mafd
