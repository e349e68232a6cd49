#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mafd/grid.hpp"
#include "mafd/ma_ops.hpp"
#include "mafd/poisson.hpp"

namespace mafd {

/// Configuration of the damped fixed-point iteration
///   u <- u + (1/nu) * (-lap)^{-1} (N(u) - f),
/// boundary values held fixed every step.
struct MarchConfig {
    double nu = 50.0;             // damping parameter, > 0
    int max_iters = 50000;
    double tol_increment = 1e-8;  // on the interior max norm of the update
    double tol_residual = 1e-8;   // on the interior max norm of N(u) - f
    SchemeKind kind = SchemeKind::CompatibleSym;
    /// The iteration keeps the discrete Laplacian of the iterates
    /// nonnegative when started from a subharmonic guess; losing that sign
    /// marks the onset of the fine-grid boundary instability of the
    /// divergence-form scheme. When enabled and the initial guess is
    /// subharmonic, the march stops at the last subharmonic iterate instead
    /// of following the runaway mode.
    bool guard_subharmonic = true;
};

enum class Termination {
    ConvergedIncrement,
    ConvergedResidual,
    MaxIters,
    Diverged,
    StoppedSubharmonic
};

const char* to_string(Termination t);

/// Iteration trace of a nonlinear solve.
struct SolveReport {
    int iterations = 0;
    Termination termination = Termination::MaxIters;
    double final_increment = 0.0;
    double final_residual = 0.0;
    double total_seconds = 0.0;
    int chained_phase1_iters = 0;  // nonzero only for chained solves

    double initial_min_eig_sym_ns = 0.0;  // monitors of the initial guess
    double initial_min_laplacian = 0.0;

    // One entry per iteration; monitors refer to the post-update iterate.
    std::vector<double> increment_norms;
    std::vector<double> residual_norms;
    std::vector<double> min_eig_sym_ns;   // min over interior of lambda_1(sym H_ns u^k)
    std::vector<double> min_laplacians;   // min over interior of lap u^k
    std::vector<double> iter_seconds;

    /// True when min lap u^k stayed nonnegative (up to roundoff slack) along
    /// the returned trajectory; a trailing guarded-away iterate is ignored.
    bool subharmonic_preserved() const;
};

/// Solves lap(w) = d * f^(1/d) with w = g on the boundary ring (2 sqrt(f)
/// in 2D). Throws std::domain_error if f is negative at an interior node.
MeshFunction initial_guess(const MeshFunction& f, const MeshFunction& g,
                           const PoissonSystem& sys);

/// Damped fixed-point iteration preconditioned by the factorized Laplacian.
/// Returns diverged status (never throws) on runaway or non-finite iterates.
std::pair<MeshFunction, SolveReport> march(const MeshFunction& u0, const MeshFunction& f,
                                           const MeshFunction& g, const MarchConfig& cfg,
                                           const PoissonSystem& sys);

struct NewtonConfig {
    double tol = 1e-10;  // on the interior max norm of det H_central(u) - f
    int max_iters = 50;
};

/// Newton's method for the central discretization. The linearization is
/// cof(H_central u) : H_central v; each step solves the sparse system by a
/// direct factorization with zero boundary increment. A failed factorization
/// or non-finite iterate is reported as diverged.
std::pair<MeshFunction, SolveReport> newton_central(const MeshFunction& u0,
                                                    const MeshFunction& f, const MeshFunction& g,
                                                    const GridIndexSets& sets,
                                                    const NewtonConfig& cfg);

/// Scaling transform parameters: solve with data (beta^d f, beta g), divide
/// the result by beta. beta solves beta * (c0/2) * h^(1+d/2) = delta, with
/// c0 the smallest eigenvalue of sym H_ns of the initial guess.
struct RescaleParams {
    double beta = 1.0;
    double delta = 1.0;
    double c0 = 0.0;
};

/// Computes the scaling from a user closeness measure delta and a guess u0.
/// Throws std::domain_error when the guess is not discrete convex (c0 <= 0).
RescaleParams rescale_params(const MeshFunction& u0, const GridIndexSets& sets, double delta);

using BaseSolver = std::function<std::pair<MeshFunction, SolveReport>(
    const MeshFunction& f, const MeshFunction& g, const MeshFunction& u0)>;

/// Runs `solver` on the transformed data and maps the result back.
std::pair<MeshFunction, SolveReport> rescale_solve_with_beta(const MeshFunction& f,
                                                             const MeshFunction& g, double beta,
                                                             const MeshFunction& u0,
                                                             const BaseSolver& solver);

/// Computes u0 = initial_guess(f, g), derives beta from delta, and marches on
/// the transformed data. The damping is scaled to nu * beta^(d-1): the
/// cofactor spectrum of the scaled problem grows by that factor.
std::pair<MeshFunction, SolveReport> rescale_solve(const MeshFunction& f, const MeshFunction& g,
                                                   double delta, const PoissonSystem& sys,
                                                   const MarchConfig& cfg);

/// Central march from initial_guess, then the compatible march seeded with
/// the central result. Traces are concatenated.
std::pair<MeshFunction, SolveReport> chained_solve(const MeshFunction& f, const MeshFunction& g,
                                                   const MarchConfig& central_cfg,
                                                   const MarchConfig& compatible_cfg,
                                                   const PoissonSystem& sys);

}  // namespace mafd
