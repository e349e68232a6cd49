#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mafd/grid.hpp"
#include "mafd/ma_ops.hpp"
#include "mafd/point_matrix.hpp"
#include "mafd/solvers.hpp"

namespace mafd {

/// A named Dirichlet test problem on the unit box.
struct ProblemSpec {
    std::string name;
    std::string description;
    std::function<double(const Point&)> f;        // right-hand side
    std::function<double(const Point&)> g;        // boundary data, defined on all of the box
    std::function<double(const Point&)> exact_u;  // null when unknown
    std::function<Mat(const Point&)> exact_hessian;  // null when unknown; for self-checks
    double default_nu = 50.0;
    std::string notes;  // smooth | not-in-H2 | degenerate | no-exact
    /// False when f blows up somewhere on the boundary (then f is restricted
    /// to interior nodes only; the singular point is never interior).
    bool f_finite_everywhere = true;
};

/// The built-in problems:
///   exp-smooth    u = exp((x^2+y^2)/2), f = (1+x^2+y^2) exp(x^2+y^2)
///   sqrt-singular u = -sqrt(2-x^2-y^2), f = 2/(2-x^2-y^2)^2  (u not in H^2)
///   unit-rhs      f = 1, g = 0, no known exact solution
///   abs-ridge     u = |x-1/2|, f = 0 (degenerate)
///   exp-timing    same data as exp-smooth, defaults tuned for timing studies
std::vector<ProblemSpec> catalog();

/// Looks a problem up by name; nullopt when missing.
std::optional<ProblemSpec> find_problem(const std::string& name);

/// max over interior nodes of |u_h - exact|.
double max_error(const MeshFunction& u_h, const std::function<double(const Point&)>& exact,
                 const GridIndexSets& sets);

/// How to drive a solve in sweeps and the CLI.
struct SolverConfig {
    std::string method = "march";  // march | newton | chained | rescaled
    SchemeKind scheme = SchemeKind::CompatibleSym;
    GridMode mode = GridMode::Full;
    double nu = -1.0;  // <= 0 picks the problem default
    double tol_increment = 1e-8;
    double tol_residual = 1e-8;
    int max_iters = 50000;
    double newton_tol = 1e-10;
    int newton_max_iters = 50;
    double delta = 1.0;               // rescaled method
    int chained_central_iters = 10000;  // cap on the chained central phase
    bool guard_subharmonic = true;
};

struct SolveOutcome {
    Grid grid;
    GridIndexSets sets;
    MeshFunction u;
    SolveReport report;
    double error = 0.0;  // NaN when no exact solution
    ConvexityReport convexity;
};

/// Builds the grid, restricts the data, dispatches the solver, and measures
/// the error against the exact solution when one is known.
SolveOutcome run_problem(const ProblemSpec& prob, const SolverConfig& cfg, int n);

struct ConvergenceRow {
    int n = 0;
    double h = 0.0;
    double error = 0.0;  // NaN when no exact solution
    double order = 0.0;  // NaN on the first row
    int iterations = 0;
    double seconds = 0.0;
};

/// One row per n, emitted with h descending. The order column is
/// log(e_prev/e_cur) / log(h_prev/h_cur) between consecutive rows.
std::vector<ConvergenceRow> convergence_table(const ProblemSpec& prob, const SolverConfig& cfg,
                                              std::vector<int> n_list);

}  // namespace mafd
