#include "mafd/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mafd {

std::vector<ProblemSpec> catalog() {
    std::vector<ProblemSpec> out;

    const auto exp_u = [](const Point& p) {
        return std::exp(0.5 * (p[0] * p[0] + p[1] * p[1]));
    };
    const auto exp_f = [](const Point& p) {
        const double r2 = p[0] * p[0] + p[1] * p[1];
        return (1.0 + r2) * std::exp(r2);
    };
    const auto exp_hess = [exp_u](const Point& p) {
        Mat H(2);
        const double e = exp_u(p);
        H(0, 0) = (1.0 + p[0] * p[0]) * e;
        H(1, 1) = (1.0 + p[1] * p[1]) * e;
        H(0, 1) = H(1, 0) = p[0] * p[1] * e;
        return H;
    };

    {
        ProblemSpec p;
        p.name = "exp-smooth";
        p.description = "u = exp((x^2+y^2)/2), smooth strictly convex";
        p.f = exp_f;
        p.g = exp_u;
        p.exact_u = exp_u;
        p.exact_hessian = exp_hess;
        p.default_nu = 50.0;
        p.notes = "smooth";
        out.push_back(std::move(p));
    }
    {
        ProblemSpec p;
        p.name = "sqrt-singular";
        p.description = "u = -sqrt(2-x^2-y^2), Hessian unbounded at the corner (1,1)";
        p.f = [](const Point& q) {
            const double s = 2.0 - q[0] * q[0] - q[1] * q[1];
            return 2.0 / (s * s);
        };
        p.g = [](const Point& q) {
            return -std::sqrt(2.0 - q[0] * q[0] - q[1] * q[1]);
        };
        p.exact_u = p.g;
        p.exact_hessian = [](const Point& q) {
            const double s = 2.0 - q[0] * q[0] - q[1] * q[1];
            const double s32 = s * std::sqrt(s);
            Mat H(2);
            H(0, 0) = (s + q[0] * q[0]) / s32;
            H(1, 1) = (s + q[1] * q[1]) / s32;
            H(0, 1) = H(1, 0) = q[0] * q[1] / s32;
            return H;
        };
        p.default_nu = 150.0;
        p.notes = "not-in-H2";
        p.f_finite_everywhere = false;  // f is infinite at the corner (1,1)
        out.push_back(std::move(p));
    }
    {
        ProblemSpec p;
        p.name = "unit-rhs";
        p.description = "f = 1, g = 0, no known closed-form solution";
        p.f = [](const Point&) { return 1.0; };
        p.g = [](const Point&) { return 0.0; };
        p.default_nu = 50.0;
        p.notes = "no-exact";
        out.push_back(std::move(p));
    }
    {
        ProblemSpec p;
        p.name = "abs-ridge";
        p.description = "u = |x - 1/2|, f = 0, degenerate";
        p.f = [](const Point&) { return 0.0; };
        p.g = [](const Point& q) { return std::fabs(q[0] - 0.5); };
        p.exact_u = p.g;
        p.exact_hessian = [](const Point&) { return Mat(2); };  // zero off the ridge
        p.default_nu = 5.0;
        p.notes = "degenerate";
        out.push_back(std::move(p));
    }
    {
        ProblemSpec p;
        p.name = "exp-timing";
        p.description = "exp-smooth data with defaults for solver timing comparisons";
        p.f = exp_f;
        p.g = exp_u;
        p.exact_u = exp_u;
        p.exact_hessian = exp_hess;
        p.default_nu = 4.0;
        p.notes = "smooth";
        out.push_back(std::move(p));
    }
    return out;
}

std::optional<ProblemSpec> find_problem(const std::string& name) {
    for (auto& p : catalog())
        if (p.name == name) return p;
    return std::nullopt;
}

double max_error(const MeshFunction& u_h, const std::function<double(const Point&)>& exact,
                 const GridIndexSets& sets) {
    double m = 0.0;
    for (std::int64_t flat : sets.interior) {
        const Point p = sets.grid.coords(sets.grid.unflatten(flat));
        m = std::max(m, std::fabs(u_h[flat] - exact(p)));
    }
    return m;
}

SolveOutcome run_problem(const ProblemSpec& prob, const SolverConfig& cfg, int n) {
    SolveOutcome out;
    out.grid = Grid(2, n, cfg.mode);
    out.sets = build_index_sets(out.grid);

    const MeshFunction f = prob.f_finite_everywhere
                               ? restrict_to_grid(out.grid, prob.f)
                               : restrict_to_interior(out.sets, prob.f);
    const MeshFunction g = restrict_to_grid(out.grid, prob.g);

    const double nu = (cfg.nu > 0.0) ? cfg.nu : prob.default_nu;
    PoissonSystem sys(out.grid, out.sets);

    if (cfg.method == "march") {
        MarchConfig mc;
        mc.nu = nu;
        mc.kind = cfg.scheme;
        mc.max_iters = cfg.max_iters;
        mc.tol_increment = cfg.tol_increment;
        mc.tol_residual = cfg.tol_residual;
        mc.guard_subharmonic = cfg.guard_subharmonic;
        const MeshFunction u0 = initial_guess(f, g, sys);
        auto [u, rep] = march(u0, f, g, mc, sys);
        out.u = std::move(u);
        out.report = std::move(rep);
    } else if (cfg.method == "newton") {
        NewtonConfig nc;
        nc.tol = cfg.newton_tol;
        nc.max_iters = cfg.newton_max_iters;
        const MeshFunction u0 = initial_guess(f, g, sys);
        auto [u, rep] = newton_central(u0, f, g, out.sets, nc);
        out.u = std::move(u);
        out.report = std::move(rep);
    } else if (cfg.method == "chained") {
        MarchConfig c1;
        c1.nu = nu;
        c1.kind = SchemeKind::CentralDet;
        c1.max_iters = cfg.chained_central_iters;
        c1.tol_increment = cfg.tol_increment;
        c1.tol_residual = cfg.tol_residual;
        c1.guard_subharmonic = cfg.guard_subharmonic;
        MarchConfig c2;
        c2.nu = nu;
        c2.kind = (cfg.scheme == SchemeKind::CentralDet) ? SchemeKind::CompatibleSym : cfg.scheme;
        c2.max_iters = cfg.max_iters;
        c2.tol_increment = cfg.tol_increment;
        c2.tol_residual = cfg.tol_residual;
        c2.guard_subharmonic = cfg.guard_subharmonic;
        auto [u, rep] = chained_solve(f, g, c1, c2, sys);
        out.u = std::move(u);
        out.report = std::move(rep);
    } else if (cfg.method == "rescaled") {
        MarchConfig mc;
        mc.nu = nu;
        mc.kind = cfg.scheme;
        mc.max_iters = cfg.max_iters;
        mc.tol_increment = cfg.tol_increment;
        mc.tol_residual = cfg.tol_residual;
        mc.guard_subharmonic = cfg.guard_subharmonic;
        auto [u, rep] = rescale_solve(f, g, cfg.delta, sys, mc);
        out.u = std::move(u);
        out.report = std::move(rep);
    } else {
        throw std::invalid_argument("run_problem: unknown method '" + cfg.method + "'");
    }

    out.error = prob.exact_u ? max_error(out.u, prob.exact_u, out.sets)
                             : std::numeric_limits<double>::quiet_NaN();
    out.convexity = convexity_report(out.u, out.sets);
    return out;
}

std::vector<ConvergenceRow> convergence_table(const ProblemSpec& prob, const SolverConfig& cfg,
                                              std::vector<int> n_list) {
    std::sort(n_list.begin(), n_list.end());  // ascending n == descending h
    std::vector<ConvergenceRow> rows;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        const SolveOutcome res = run_problem(prob, cfg, n_list[i]);
        ConvergenceRow row;
        row.n = n_list[i];
        row.h = 1.0 / n_list[i];
        row.error = res.error;
        row.iterations = res.report.iterations;
        row.seconds = res.report.total_seconds;
        row.order = std::numeric_limits<double>::quiet_NaN();
        if (i > 0 && std::isfinite(rows.back().error) && std::isfinite(row.error) &&
            row.error > 0.0 && rows.back().error > 0.0) {
            row.order = std::log(rows.back().error / row.error) / std::log(rows.back().h / row.h);
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace mafd
