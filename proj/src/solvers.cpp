#include "mafd/solvers.hpp"

#include <Eigen/Sparse>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mafd/fd_ops.hpp"
#include "mafd/point_matrix.hpp"

namespace mafd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline NodeIndex shifted(NodeIndex x, int axis, int by) {
    x[axis] += by;
    return x;
}

}  // namespace

const char* to_string(Termination t) {
    switch (t) {
        case Termination::ConvergedIncrement: return "converged-increment";
        case Termination::ConvergedResidual: return "converged-residual";
        case Termination::MaxIters: return "max-iters";
        case Termination::Diverged: return "diverged";
        case Termination::StoppedSubharmonic: return "stopped-subharmonic";
    }
    return "?";
}

bool SolveReport::subharmonic_preserved() const {
    const double slack = 1e-9 * (1.0 + std::fabs(initial_min_laplacian));
    if (initial_min_laplacian < -slack) return false;
    std::size_t count = min_laplacians.size();
    if (termination == Termination::StoppedSubharmonic && count > 0) --count;
    for (std::size_t k = 0; k < count; ++k)
        if (min_laplacians[k] < -slack) return false;
    return true;
}

MeshFunction initial_guess(const MeshFunction& f, const MeshFunction& g,
                           const PoissonSystem& sys) {
    const GridIndexSets& sets = sys.sets();
    const int d = sets.grid.dim;
    MeshFunction rhs(sets.grid);
    for (std::int64_t flat : sets.interior) {
        const double fv = f[flat];
        if (fv < 0.0)
            throw std::domain_error("initial_guess: f negative at an interior node");
        // lap w = d f^(1/d)  <=>  -lap w = -d f^(1/d)
        rhs[flat] = -d * ((d == 2) ? std::sqrt(fv) : std::cbrt(fv));
    }
    return sys.solve(rhs, g);
}

namespace {

// min over interior of lambda_1(sym H_ns u) and of trace(H_ns u) = lap u.
std::pair<double, double> convexity_monitors(const MeshFunction& u, const GridIndexSets& sets) {
    double min_eig = std::numeric_limits<double>::infinity();
    double min_lap = std::numeric_limits<double>::infinity();
    for (std::int64_t flat : sets.interior) {
        const Mat H = hessian_ns_at(u, sets.grid.unflatten(flat));
        min_eig = std::min(min_eig, eig_minmax_sym(mat_sym(H)).first);
        min_lap = std::min(min_lap, mat_trace(H));
    }
    return {min_eig, min_lap};
}

}  // namespace

std::pair<MeshFunction, SolveReport> march(const MeshFunction& u0, const MeshFunction& f,
                                           const MeshFunction& g, const MarchConfig& cfg,
                                           const PoissonSystem& sys) {
    if (cfg.nu <= 0.0 || cfg.tol_increment <= 0.0 || cfg.tol_residual <= 0.0)
        throw std::invalid_argument("march: nu and tolerances must be positive");
    const GridIndexSets& sets = sys.sets();
    if (!(u0.grid() == sets.grid) || !(f.grid() == sets.grid) || !(g.grid() == sets.grid))
        throw std::invalid_argument("march: grid mismatch");

    const auto t_start = Clock::now();
    MeshFunction u = set_boundary(u0, g, sets);
    MeshFunction prev = u;
    MeshFunction zero_bc(sets.grid);
    SolveReport rep;

    std::tie(rep.initial_min_eig_sym_ns, rep.initial_min_laplacian) =
        convexity_monitors(u, sets);
    const double subh_slack = 1e-9 * (1.0 + std::fabs(rep.initial_min_laplacian));
    const bool guard_active =
        cfg.guard_subharmonic && rep.initial_min_laplacian >= -subh_slack;

    for (int k = 1; k <= cfg.max_iters; ++k) {
        const auto t_iter = Clock::now();
        rep.iterations = k;

        MeshFunction r = residual(u, f, sets, cfg.kind);
        double res_norm = 0.0;
        bool finite = true;
        for (std::int64_t flat : sets.interior) {
            const double rv = r[flat];
            if (!std::isfinite(rv)) { finite = false; break; }
            res_norm = std::max(res_norm, std::fabs(rv));
        }

        double inc_norm = std::numeric_limits<double>::quiet_NaN();
        if (finite) {
            MeshFunction delta;
            try {
                delta = sys.solve(r, zero_bc);
            } catch (const std::runtime_error&) {
                finite = false;
            }
            if (finite) {
                const double scale = 1.0 / cfg.nu;
                inc_norm = 0.0;
                prev = u;
                for (std::int64_t flat : sets.interior) {
                    const double dv = delta[flat] * scale;
                    u[flat] += dv;
                    inc_norm = std::max(inc_norm, std::fabs(dv));
                }
                if (!std::isfinite(inc_norm)) finite = false;
            }
        }

        double min_eig = std::numeric_limits<double>::quiet_NaN();
        double min_lap = std::numeric_limits<double>::quiet_NaN();
        if (finite) std::tie(min_eig, min_lap) = convexity_monitors(u, sets);

        rep.residual_norms.push_back(res_norm);
        rep.increment_norms.push_back(inc_norm);
        rep.min_eig_sym_ns.push_back(min_eig);
        rep.min_laplacians.push_back(min_lap);
        rep.iter_seconds.push_back(seconds_since(t_iter));
        rep.final_residual = res_norm;
        rep.final_increment = inc_norm;

        if (!finite || inc_norm > 1e6) {
            rep.termination = Termination::Diverged;
            break;
        }
        if (res_norm <= cfg.tol_residual) {
            rep.termination = Termination::ConvergedResidual;
            break;
        }
        if (inc_norm <= cfg.tol_increment) {
            rep.termination = Termination::ConvergedIncrement;
            break;
        }
        if (guard_active && min_lap < -subh_slack) {
            u = prev;  // keep the last subharmonic iterate
            rep.termination = Termination::StoppedSubharmonic;
            break;
        }
        if (k == cfg.max_iters) rep.termination = Termination::MaxIters;
    }

    rep.total_seconds = seconds_since(t_start);
    return {std::move(u), std::move(rep)};
}

// ---------------------------------------------------------------------------
// Newton for the central discretization
// ---------------------------------------------------------------------------

std::pair<MeshFunction, SolveReport> newton_central(const MeshFunction& u0,
                                                    const MeshFunction& f, const MeshFunction& g,
                                                    const GridIndexSets& sets,
                                                    const NewtonConfig& cfg) {
    const Grid& grid = sets.grid;
    if (!(u0.grid() == grid) || !(f.grid() == grid) || !(g.grid() == grid))
        throw std::invalid_argument("newton_central: grid mismatch");

    const auto t_start = Clock::now();
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    const auto m = static_cast<Eigen::Index>(sets.interior.size());

    MeshFunction u = set_boundary(u0, g, sets);
    SolveReport rep;
    std::tie(rep.initial_min_eig_sym_ns, rep.initial_min_laplacian) =
        convexity_monitors(u, sets);

    auto record = [&](double res, double inc, const MeshFunction& cur, double t_iter_s) {
        double min_eig = std::numeric_limits<double>::infinity();
        double min_lap = std::numeric_limits<double>::infinity();
        for (std::int64_t flat : sets.interior) {
            const Mat H = hessian_ns_at(cur, grid.unflatten(flat));
            min_eig = std::min(min_eig, eig_minmax_sym(mat_sym(H)).first);
            min_lap = std::min(min_lap, mat_trace(H));
        }
        rep.residual_norms.push_back(res);
        rep.increment_norms.push_back(inc);
        rep.min_eig_sym_ns.push_back(min_eig);
        rep.min_laplacians.push_back(min_lap);
        rep.iter_seconds.push_back(t_iter_s);
        rep.final_residual = res;
        rep.final_increment = inc;
    };

    for (int k = 0; k <= cfg.max_iters; ++k) {
        const auto t_iter = Clock::now();

        MeshFunction F = residual(u, f, sets, SchemeKind::CentralDet);
        double res_norm = 0.0;
        bool finite = true;
        for (std::int64_t flat : sets.interior) {
            if (!std::isfinite(F[flat])) { finite = false; break; }
            res_norm = std::max(res_norm, std::fabs(F[flat]));
        }
        if (!finite) {
            record(std::numeric_limits<double>::quiet_NaN(), 0.0, u, seconds_since(t_iter));
            rep.termination = Termination::Diverged;
            break;
        }
        if (res_norm <= cfg.tol) {
            record(res_norm, 0.0, u, seconds_since(t_iter));
            rep.termination = Termination::ConvergedResidual;
            break;
        }
        if (k == cfg.max_iters) {
            record(res_norm, 0.0, u, seconds_since(t_iter));
            rep.termination = Termination::MaxIters;
            break;
        }
        rep.iterations = k + 1;

        // Linearization by the derivative of det: rows are
        // cof(H_central u(x)) : d/du(y) H_central(x).
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(m) * (1 + 2 * grid.dim * grid.dim));
        Eigen::VectorXd rhs(m);

        for (Eigen::Index p = 0; p < m; ++p) {
            const NodeIndex x = grid.unflatten(sets.interior[p]);
            const Mat C = mat_cof(hessian_central_at(u, x));
            rhs[p] = -F[sets.interior[p]];

            auto add = [&](const NodeIndex& y, double w) {
                const std::int64_t q = sets.interior_pos[grid.flatten(y)];
                if (q >= 0) trips.emplace_back(static_cast<int>(p), static_cast<int>(q), w);
                // boundary columns drop out: the increment is zero there
            };

            double diag = 0.0;
            for (int i = 0; i < grid.dim; ++i) {
                add(shifted(x, i, +1), C(i, i) * inv_h2);
                add(shifted(x, i, -1), C(i, i) * inv_h2);
                diag += -2.0 * C(i, i) * inv_h2;
            }
            add(x, diag);
            for (int i = 0; i < grid.dim; ++i)
                for (int j = i + 1; j < grid.dim; ++j) {
                    const double w = 2.0 * C(i, j) * inv_h2 / 4.0;  // C symmetric: (i,j)+(j,i)
                    NodeIndex pp = x, mm = x, pm = x, mp = x;
                    pp[i] += 1; pp[j] += 1;
                    mm[i] -= 1; mm[j] -= 1;
                    pm[i] += 1; pm[j] -= 1;
                    mp[i] -= 1; mp[j] += 1;
                    add(pp, w);
                    add(mm, w);
                    add(pm, -w);
                    add(mp, -w);
                }
        }

        Eigen::SparseMatrix<double> J(m, m);
        J.setFromTriplets(trips.begin(), trips.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success) {
            record(res_norm, std::numeric_limits<double>::quiet_NaN(), u, seconds_since(t_iter));
            rep.termination = Termination::Diverged;
            break;
        }
        const Eigen::VectorXd delta = lu.solve(rhs);
        const double rhs_norm = rhs.norm();
        const double lin_res = (rhs_norm > 0.0) ? (J * delta - rhs).norm() / rhs_norm : 0.0;
        if (!delta.allFinite() || lin_res > 1e-10) {
            record(res_norm, std::numeric_limits<double>::quiet_NaN(), u, seconds_since(t_iter));
            rep.termination = Termination::Diverged;
            break;
        }

        double inc_norm = 0.0;
        for (Eigen::Index p = 0; p < m; ++p) {
            u[sets.interior[p]] += delta[p];
            inc_norm = std::max(inc_norm, std::fabs(delta[p]));
        }
        record(res_norm, inc_norm, u, seconds_since(t_iter));
        if (inc_norm > 1e6) {
            rep.termination = Termination::Diverged;
            break;
        }
    }

    rep.total_seconds = seconds_since(t_start);
    return {std::move(u), std::move(rep)};
}

// ---------------------------------------------------------------------------
// Rescaling and chained solves
// ---------------------------------------------------------------------------

RescaleParams rescale_params(const MeshFunction& u0, const GridIndexSets& sets, double delta) {
    if (delta <= 0.0) throw std::invalid_argument("rescale_params: delta must be positive");
    const ConvexityReport conv = convexity_report(u0, sets);
    if (!(conv.min_eig_sym_ns > 0.0))
        throw std::domain_error("rescale_params: initial guess is not discrete convex");
    RescaleParams p;
    p.delta = delta;
    p.c0 = conv.min_eig_sym_ns;
    const double h = sets.grid.h();
    p.beta = 2.0 * delta / (p.c0 * std::pow(h, 1.0 + sets.grid.dim / 2.0));
    return p;
}

std::pair<MeshFunction, SolveReport> rescale_solve_with_beta(const MeshFunction& f,
                                                             const MeshFunction& g, double beta,
                                                             const MeshFunction& u0,
                                                             const BaseSolver& solver) {
    if (beta <= 0.0) throw std::invalid_argument("rescale_solve_with_beta: beta must be positive");
    const Grid& grid = f.grid();
    const double beta_d = std::pow(beta, grid.dim);

    MeshFunction fs = f, gs = g, us = u0;
    for (std::int64_t i = 0; i < fs.size(); ++i) fs[i] *= beta_d;
    for (std::int64_t i = 0; i < gs.size(); ++i) gs[i] *= beta;
    for (std::int64_t i = 0; i < us.size(); ++i) us[i] *= beta;

    auto [w, rep] = solver(fs, gs, us);
    for (std::int64_t i = 0; i < w.size(); ++i) w[i] /= beta;
    return {std::move(w), std::move(rep)};
}

std::pair<MeshFunction, SolveReport> rescale_solve(const MeshFunction& f, const MeshFunction& g,
                                                   double delta, const PoissonSystem& sys,
                                                   const MarchConfig& cfg) {
    const MeshFunction u0 = initial_guess(f, g, sys);
    const RescaleParams p = rescale_params(u0, sys.sets(), delta);
    MarchConfig scaled_cfg = cfg;
    scaled_cfg.nu = cfg.nu * std::pow(p.beta, sys.grid().dim - 1);
    const BaseSolver base = [&](const MeshFunction& fs, const MeshFunction& gs,
                                const MeshFunction& u0s) {
        return march(u0s, fs, gs, scaled_cfg, sys);
    };
    return rescale_solve_with_beta(f, g, p.beta, u0, base);
}

std::pair<MeshFunction, SolveReport> chained_solve(const MeshFunction& f, const MeshFunction& g,
                                                   const MarchConfig& central_cfg,
                                                   const MarchConfig& compatible_cfg,
                                                   const PoissonSystem& sys) {
    MarchConfig c1 = central_cfg;
    c1.kind = SchemeKind::CentralDet;

    const MeshFunction u0 = initial_guess(f, g, sys);
    auto [u1, rep1] = march(u0, f, g, c1, sys);
    auto [u2, rep2] = march(u1, f, g, compatible_cfg, sys);

    SolveReport rep = std::move(rep1);
    rep.chained_phase1_iters = rep.iterations;
    rep.iterations += rep2.iterations;
    rep.termination = rep2.termination;
    rep.final_increment = rep2.final_increment;
    rep.final_residual = rep2.final_residual;
    rep.total_seconds += rep2.total_seconds;
    auto append = [](std::vector<double>& a, const std::vector<double>& b) {
        a.insert(a.end(), b.begin(), b.end());
    };
    append(rep.increment_norms, rep2.increment_norms);
    append(rep.residual_norms, rep2.residual_norms);
    append(rep.min_eig_sym_ns, rep2.min_eig_sym_ns);
    append(rep.min_laplacians, rep2.min_laplacians);
    append(rep.iter_seconds, rep2.iter_seconds);
    return {std::move(u2), std::move(rep)};
}

}  // namespace mafd
