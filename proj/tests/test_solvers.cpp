#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "mafd/problems.hpp"
#include "mafd/solvers.hpp"
#include "test_support.hpp"

using namespace mafd;
using mafd::test::Rng;

namespace {

double half_sq(const Point& p) { return 0.5 * (p[0] * p[0] + p[1] * p[1]); }

struct QuadraticSetup {
    Grid grid;
    GridIndexSets sets;
    MeshFunction f, g;

    explicit QuadraticSetup(int n) : grid(2, n, GridMode::Full) {
        sets = build_index_sets(grid);
        f = restrict_to_grid(grid, [](const Point&) { return 1.0; });
        g = restrict_to_grid(grid, half_sq);
    }
};

}  // namespace

TEST_CASE("initial guess") {
    SUBCASE("f = 1 with paraboloid boundary reproduces the paraboloid") {
        const QuadraticSetup s(8);
        const PoissonSystem sys(s.grid, s.sets);
        const MeshFunction w = initial_guess(s.f, s.g, sys);
        for (std::int64_t i = 0; i < w.size(); ++i)
            CHECK(w[i] == doctest::Approx(s.g[i]).epsilon(1e-10));
    }
    SUBCASE("f = 0 with affine boundary gives the affine function") {
        const Grid g(2, 8, GridMode::Full);
        const GridIndexSets sets = build_index_sets(g);
        const PoissonSystem sys(g, sets);
        const MeshFunction f(g);
        const MeshFunction gb =
            restrict_to_grid(g, [](const Point& p) { return 2.0 * p[0] - p[1] + 0.5; });
        const MeshFunction w = initial_guess(f, gb, sys);
        for (std::int64_t i = 0; i < w.size(); ++i)
            CHECK(w[i] == doctest::Approx(gb[i]).epsilon(1e-10));
    }
    SUBCASE("smooth problem data gives a finite discrete convex guess") {
        const auto prob = *find_problem("exp-smooth");
        const Grid g(2, 16, GridMode::Full);
        const GridIndexSets sets = build_index_sets(g);
        const PoissonSystem sys(g, sets);
        const MeshFunction w =
            initial_guess(restrict_to_grid(g, prob.f), restrict_to_grid(g, prob.g), sys);
        CHECK(w.all_finite());
        CHECK(convexity_report(w, sets).strictly_convex);
        CHECK(max_error(w, prob.exact_u, sets) < 1.0);
    }
    SUBCASE("negative f is rejected") {
        const Grid g(2, 8, GridMode::Full);
        const GridIndexSets sets = build_index_sets(g);
        const PoissonSystem sys(g, sets);
        const MeshFunction f = restrict_to_grid(g, [](const Point&) { return -1.0; });
        CHECK_THROWS_AS(initial_guess(f, MeshFunction(g), sys), std::domain_error);
    }
}

TEST_CASE("march fixed point: zero residual returns the seed bit-exactly") {
    Rng rng(201);
    const Grid g(2, 8, GridMode::Full);
    const GridIndexSets sets = build_index_sets(g);
    const PoissonSystem sys(g, sets);
    for (SchemeKind kind : {SchemeKind::CentralDet, SchemeKind::CompatibleSym}) {
        MeshFunction u0 = mafd::test::random_mesh_function(g, rng);
        const MeshFunction f = ma_apply(u0, sets, kind);  // residual is exactly zero
        MarchConfig cfg;
        cfg.kind = kind;
        cfg.nu = 10.0;
        const auto [u, rep] = march(u0, f, u0, cfg, sys);
        CHECK(rep.iterations == 1);
        CHECK(rep.termination == Termination::ConvergedResidual);
        for (std::int64_t i = 0; i < u.size(); ++i) CHECK(u[i] == u0[i]);
    }
}

TEST_CASE("march converges immediately on the quadratic problem") {
    const QuadraticSetup s(8);
    const PoissonSystem sys(s.grid, s.sets);
    for (SchemeKind kind : {SchemeKind::CentralDet, SchemeKind::CompatibleSym,
                            SchemeKind::CompatibleTranspose, SchemeKind::CompatibleHat}) {
        MarchConfig cfg;
        cfg.kind = kind;
        cfg.nu = 10.0;
        const auto [u, rep] = march(s.g, s.f, s.g, cfg, sys);
        CHECK(rep.iterations == 1);
        CHECK(rep.final_residual <= 1e-12);
    }
}

TEST_CASE("one march step scales exactly with the damping parameter") {
    const auto prob = *find_problem("exp-smooth");
    const Grid g(2, 8, GridMode::Full);
    const GridIndexSets sets = build_index_sets(g);
    const PoissonSystem sys(g, sets);
    const MeshFunction f = restrict_to_grid(g, prob.f);
    const MeshFunction gb = restrict_to_grid(g, prob.g);
    const MeshFunction u0 = initial_guess(f, gb, sys);

    MarchConfig cfg;
    cfg.kind = SchemeKind::CompatibleSym;
    cfg.max_iters = 1;
    cfg.guard_subharmonic = false;
    cfg.tol_increment = 1e-300;
    cfg.tol_residual = 1e-300;

    cfg.nu = 50.0;
    const auto [u_a, rep_a] = march(u0, f, gb, cfg, sys);
    cfg.nu = 100.0;
    const auto [u_b, rep_b] = march(u0, f, gb, cfg, sys);

    // max-norm of the reported increments scales exactly
    CHECK(rep_a.increment_norms[0] == 2.0 * rep_b.increment_norms[0]);

    // elementwise: the computed update delta/nu halves exactly when nu doubles
    const MeshFunction r = residual(set_boundary(u0, gb, sets), f, sets, cfg.kind);
    const MeshFunction delta = sys.solve(r, MeshFunction(g));
    for (std::int64_t flat : sets.interior) {
        const double dv50 = delta[flat] * (1.0 / 50.0);
        const double dv100 = delta[flat] * (1.0 / 100.0);
        CHECK(dv50 == 2.0 * dv100);
    }
}

TEST_CASE("every march iterate keeps the boundary values bit-exactly") {
    const auto prob = *find_problem("exp-smooth");
    const Grid g(2, 8, GridMode::Full);
    const GridIndexSets sets = build_index_sets(g);
    const PoissonSystem sys(g, sets);
    const MeshFunction f = restrict_to_grid(g, prob.f);
    const MeshFunction gb = restrict_to_grid(g, prob.g);
    const MeshFunction u0 = initial_guess(f, gb, sys);

    MarchConfig cfg;
    cfg.kind = SchemeKind::CompatibleSym;
    for (int iters : {3, 40}) {
        cfg.max_iters = iters;
        const auto [u, rep] = march(u0, f, gb, cfg, sys);
        for (auto flat : sets.boundary) CHECK(u[flat] == gb[flat]);
    }
}

TEST_CASE("march reproduces the reference error on the smooth problem at n=16") {
    const auto prob = *find_problem("exp-smooth");
    SolverConfig cfg;
    cfg.method = "march";
    cfg.scheme = SchemeKind::CompatibleSym;
    cfg.nu = 50.0;
    const SolveOutcome out = run_problem(prob, cfg, 16);
    CHECK(out.report.termination == Termination::ConvergedIncrement);
    CHECK(out.error >= 0.5 * 3.9964e-3);
    CHECK(out.error <= 2.0 * 3.9964e-3);
    CHECK(out.report.subharmonic_preserved());
}

TEST_CASE("subharmonicity guard stops the fine-grid boundary instability") {
    const auto prob = *find_problem("exp-smooth");
    SolverConfig cfg;
    cfg.method = "march";
    cfg.scheme = SchemeKind::CompatibleSym;
    cfg.nu = 50.0;
    const SolveOutcome out = run_problem(prob, cfg, 64);
    CHECK(out.report.termination == Termination::StoppedSubharmonic);
    // the guarded stop lands near the reference error 5.0688e-4
    CHECK(out.error <= 1.1e-3);
    CHECK(out.error >= 2.5e-4);
    // the guarded-away iterate had lost subharmonicity
    CHECK(out.report.min_laplacians.back() < 0.0);
    // the returned trajectory stayed subharmonic
    CHECK(out.report.subharmonic_preserved());
}

TEST_CASE("march status reporting on non-convergence") {
    const auto prob = *find_problem("exp-smooth");

    SUBCASE("iteration cap reports max-iters without throwing") {
        SolverConfig cfg;
        cfg.method = "march";
        cfg.scheme = SchemeKind::CompatibleSym;
        cfg.nu = 50.0;
        cfg.max_iters = 3;
        const SolveOutcome out = run_problem(prob, cfg, 8);
        CHECK(out.report.termination == Termination::MaxIters);
        CHECK(out.report.iterations == 3);
    }
    SUBCASE("unguarded fine-grid run reports diverged, never throws") {
        SolverConfig cfg;
        cfg.method = "march";
        cfg.scheme = SchemeKind::CompatibleSym;
        cfg.nu = 50.0;
        cfg.guard_subharmonic = false;
        const SolveOutcome out = run_problem(prob, cfg, 64);
        CHECK(out.report.termination == Termination::Diverged);
    }
}

TEST_CASE("newton on the central scheme") {
    SUBCASE("already-exact seed converges in zero steps") {
        const QuadraticSetup s(8);
        const auto [u, rep] =
            newton_central(s.g, s.f, s.g, s.sets, NewtonConfig{1e-12, 50});
        CHECK(rep.iterations == 0);
        CHECK(rep.termination == Termination::ConvergedResidual);
        CHECK(rep.final_residual <= 1e-12);
        for (std::int64_t i = 0; i < u.size(); ++i) CHECK(u[i] == s.g[i]);
    }
    SUBCASE("reference errors at n=8 and n=16 within 10 percent") {
        const auto prob = *find_problem("exp-smooth");
        SolverConfig cfg;
        cfg.method = "newton";
        const double refs[] = {1.03e-3, 2.66e-4};
        int i = 0;
        for (int n : {8, 16}) {
            const SolveOutcome out = run_problem(prob, cfg, n);
            CHECK(out.report.termination == Termination::ConvergedResidual);
            CHECK(out.error >= 0.9 * refs[i]);
            CHECK(out.error <= 1.1 * refs[i]);
            ++i;
        }
    }
    SUBCASE("quadratic residual tail at n=32") {
        const auto prob = *find_problem("exp-smooth");
        SolverConfig cfg;
        cfg.method = "newton";
        const SolveOutcome out = run_problem(prob, cfg, 32);
        REQUIRE(out.report.residual_norms.size() >= 3);
        const auto& r = out.report.residual_norms;
        for (std::size_t k = 0; k + 1 < r.size(); ++k)
            MESSAGE("newton residual ", r[k], " -> ", r[k + 1], "  (C = ",
                    r[k + 1] / (r[k] * r[k]), ")");
        CHECK(out.report.final_residual <= 1e-10);
    }
    SUBCASE("identically singular linearization is reported as diverged") {
        const Grid g(2, 8, GridMode::Full);
        const GridIndexSets sets = build_index_sets(g);
        const MeshFunction f = restrict_to_grid(g, [](const Point&) { return 1.0; });
        const MeshFunction u0(g);  // zero: central Hessian and its cofactor vanish
        const auto [u, rep] = newton_central(u0, f, MeshFunction(g), sets, NewtonConfig{});
        CHECK(rep.termination == Termination::Diverged);
    }
}

TEST_CASE("rescaled solves") {
    const auto prob = *find_problem("exp-smooth");
    const Grid g(2, 16, GridMode::Full);
    const GridIndexSets sets = build_index_sets(g);
    const PoissonSystem sys(g, sets);
    const MeshFunction f = restrict_to_grid(g, prob.f);
    const MeshFunction gb = restrict_to_grid(g, prob.g);
    const MeshFunction u0 = initial_guess(f, gb, sys);
    MarchConfig mc;
    mc.nu = 50.0;
    mc.kind = SchemeKind::CompatibleSym;
    const BaseSolver base = [&](const MeshFunction& fs, const MeshFunction& gs,
                                const MeshFunction& u0s) {
        return march(u0s, fs, gs, mc, sys);
    };
    const auto [direct, direct_rep] = march(u0, f, gb, mc, sys);

    SUBCASE("beta = 1 is the identity") {
        const auto [u, rep] = rescale_solve_with_beta(f, gb, 1.0, u0, base);
        for (std::int64_t i = 0; i < u.size(); ++i) CHECK(u[i] == direct[i]);
    }
    SUBCASE("beta in {1/2, 2} recovers the direct solution within solver accuracy") {
        for (double beta : {0.5, 2.0}) {
            const auto [u, rep] = rescale_solve_with_beta(f, gb, beta, u0, base);
            double diff = 0.0;
            for (auto flat : sets.interior) diff = std::max(diff, std::fabs(u[flat] - direct[flat]));
            // both runs stop within increment tolerance of the same fixed
            // point; the remaining gap is ~nu * tol_increment on each side
            CHECK(diff <= 2e-6);
        }
    }
    SUBCASE("delta-driven rescale agrees with the direct solve") {
        const auto [u, rep] = rescale_solve(f, gb, 0.5, sys, mc);
        double diff = 0.0;
        for (auto flat : sets.interior) diff = std::max(diff, std::fabs(u[flat] - direct[flat]));
        CHECK(diff <= 2e-6);
    }
    SUBCASE("rescale parameters solve beta (c0/2) h^(1+d/2) = delta") {
        const RescaleParams p = rescale_params(u0, sets, 0.5);
        CHECK(p.c0 > 0.0);
        CHECK(p.beta * (p.c0 / 2.0) * std::pow(g.h(), 2.0) ==
              doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("nonconvex guess is rejected") {
        const MeshFunction bad = restrict_to_grid(g, [](const Point& p) {
            return -0.5 * (p[0] * p[0] + p[1] * p[1]);
        });
        CHECK_THROWS_AS(rescale_params(bad, sets, 0.5), std::domain_error);
    }
}

TEST_CASE("interior-mode march converges against ring data taken from g") {
    const auto prob = *find_problem("exp-smooth");
    SolverConfig cfg;
    cfg.method = "march";
    cfg.scheme = SchemeKind::CompatibleSym;
    cfg.mode = GridMode::Interior;
    cfg.nu = 50.0;
    const SolveOutcome out = run_problem(prob, cfg, 16);
    CHECK(out.report.termination == Termination::ConvergedIncrement);
    CHECK(out.error <= 5e-3);
    CHECK(out.convexity.strictly_convex);
}

TEST_CASE("rescaled solver through the problem runner matches the direct error") {
    const auto prob = *find_problem("exp-smooth");
    SolverConfig cfg;
    cfg.method = "rescaled";
    cfg.scheme = SchemeKind::CompatibleSym;
    cfg.nu = 50.0;
    cfg.delta = 0.5;
    const SolveOutcome out = run_problem(prob, cfg, 8);
    CHECK(out.error >= 0.5 * 6.5555e-3);
    CHECK(out.error <= 2.0 * 6.5555e-3);
}

TEST_CASE("unit right-hand side: converged central solution is centrally convex") {
    // The compatible march does not converge on this problem (its solution is
    // not smooth up to the boundary); the central march does, and the
    // solution is discrete convex in the central-Hessian sense even at the
    // corners, where the one-sided Hessian turns indefinite.
    const auto prob = *find_problem("unit-rhs");
    SolverConfig cfg;
    cfg.method = "march";
    cfg.scheme = SchemeKind::CentralDet;
    cfg.tol_increment = 1e-10;
    cfg.max_iters = 30000;
    const SolveOutcome out = run_problem(prob, cfg, 32);
    CHECK(out.report.termination == Termination::ConvergedIncrement);
    CHECK(out.report.final_residual <= 1e-4);
    CHECK(out.convexity.min_eig_central > 0.0);
}

TEST_CASE("3D quadratic problem solves exactly with march and newton") {
    const Grid g(3, 4, GridMode::Full);
    const GridIndexSets sets = build_index_sets(g);
    const PoissonSystem sys(g, sets);
    const MeshFunction f = restrict_to_grid(g, [](const Point&) { return 1.0; });
    const MeshFunction gb = restrict_to_grid(g, [](const Point& p) {
        return 0.5 * (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    });

    MarchConfig mc;
    mc.kind = SchemeKind::CentralDet;
    mc.nu = 10.0;
    const auto [u1, rep1] = march(gb, f, gb, mc, sys);
    CHECK(rep1.iterations == 1);
    CHECK(rep1.final_residual <= 1e-12);

    const MeshFunction u0 = initial_guess(f, gb, sys);
    const auto [u2, rep2] = newton_central(u0, f, gb, sets, NewtonConfig{});
    CHECK(rep2.termination == Termination::ConvergedResidual);
    double worst = 0.0;
    for (auto flat : sets.interior) worst = std::max(worst, std::fabs(u2[flat] - gb[flat]));
    CHECK(worst <= 1e-9);
}

TEST_CASE("3D newton is second order on the smooth exponential problem") {
    auto solve_error = [](int n) {
        const Grid g(3, n, GridMode::Full);
        const auto sets = build_index_sets(g);
        const PoissonSystem sys(g, sets);
        auto u_fn = [](const Point& p) {
            return std::exp(0.5 * (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
        };
        // Hessian of u is u * (I + x x^T), so det D2u = u^3 (1 + |x|^2).
        auto f_fn = [u_fn](const Point& p) {
            const double r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
            const double e = u_fn(p);
            return e * e * e * (1.0 + r2);
        };
        const MeshFunction f = restrict_to_grid(g, f_fn);
        const MeshFunction gb = restrict_to_grid(g, u_fn);
        const auto [u, rep] = newton_central(initial_guess(f, gb, sys), f, gb, sets,
                                             NewtonConfig{});
        REQUIRE(rep.termination == Termination::ConvergedResidual);
        double err = 0.0;
        for (auto flat : sets.interior) {
            const Point p = g.coords(g.unflatten(flat));
            err = std::max(err, std::fabs(u[flat] - u_fn(p)));
        }
        return err;
    };
    const double e4 = solve_error(4), e8 = solve_error(8);
    CHECK(e8 <= 1.5e-3);
    CHECK(e4 / e8 >= 3.0);
    CHECK(e4 / e8 <= 4.6);
}

TEST_CASE("chained solve") {
    SUBCASE("quadratic problem: both phases converge at their first iteration") {
        const QuadraticSetup s(8);
        const PoissonSystem sys(s.grid, s.sets);
        MarchConfig c1, c2;
        c1.nu = c2.nu = 10.0;
        c2.kind = SchemeKind::CompatibleSym;
        const auto [u, rep] = chained_solve(s.f, s.g, c1, c2, sys);
        CHECK(rep.chained_phase1_iters == 1);
        CHECK(rep.iterations == 2);
        CHECK(rep.final_residual <= 1e-12);
        CHECK(max_error(u, half_sq, s.sets) <= 1e-9);
    }
    SUBCASE("degenerate ridge problem converges with exact boundary values") {
        const auto prob = *find_problem("abs-ridge");
        SolverConfig cfg;
        cfg.method = "march";
        cfg.scheme = SchemeKind::CentralDet;
        cfg.nu = 5.0;
        cfg.tol_increment = 1e-10;
        cfg.tol_residual = 1e-14;
        cfg.max_iters = 200000;
        const SolveOutcome out = run_problem(prob, cfg, 4);
        CHECK(out.report.termination == Termination::ConvergedIncrement);
        CHECK(out.report.final_increment <= 1e-10);
        const MeshFunction gb = restrict_to_grid(out.grid, prob.g);
        for (auto flat : out.sets.boundary) CHECK(out.u[flat] == gb[flat]);
        MESSAGE("interior deviation from the restricted ridge: ", out.error);
        CHECK(out.error <= 1e-4);
    }
}
