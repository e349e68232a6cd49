#include "mafd/runner.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <stdexcept>

#include "mafd/problems.hpp"
#include "mafd/verify.hpp"
#include "mafd/version.hpp"

namespace mafd {

namespace {

using Json = nlohmann::ordered_json;

Json config_json(const RunConfig& cfg) {
    Json j;
    j["problem"] = cfg.problem;
    j["custom_path"] = cfg.custom_path;
    j["scheme"] = to_string(cfg.scheme);
    j["mode"] = to_string(cfg.mode);
    j["n"] = cfg.n_list;
    j["nu"] = cfg.nu;
    j["solver"] = cfg.solver;
    j["tol_inc"] = cfg.tol_inc;
    j["tol_res"] = cfg.tol_res;
    j["max_iters"] = cfg.max_iters;
    j["delta"] = cfg.delta;
    j["out"] = cfg.out_dir;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    return j;
}

int fail_with_error(int code, const std::string& kind, const std::string& message) {
    Json err;
    err["error"]["code"] = code;
    err["error"]["kind"] = kind;
    err["error"]["message"] = message;
    std::cout << err.dump(2) << "\n";
    return code;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file " + path.string());
    os << body;
}

std::string csv_preamble(const RunConfig& cfg) {
    std::string s;
    s += "# mafd ";
    s += kVersion;
    s += "\n# config: ";
    s += config_json(cfg).dump();
    s += "\n";
    return s;
}

/// Tabulated problem loaded from a JSON file of node values.
ProblemSpec load_custom_problem(const std::string& path, int n) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open custom problem file " + path);
    Json j;
    is >> j;

    const int d = j.value("d", 2);
    const int file_n = j.at("n").get<int>();
    if (file_n != n)
        throw std::invalid_argument("custom problem tabulated for n=" + std::to_string(file_n) +
                                    " but run requested n=" + std::to_string(n));
    const Grid grid(d, n, GridMode::Full);
    const auto expect = static_cast<std::size_t>(grid.num_nodes());

    auto load_table = [&](const char* key) {
        std::vector<double> t = j.at(key).get<std::vector<double>>();
        if (t.size() != expect)
            throw std::invalid_argument(std::string("custom problem table '") + key +
                                        "' has wrong length");
        return t;
    };

    // Node values are looked up by rounding coordinates back to indices.
    auto table_fn = [grid](std::vector<double> t) {
        return [grid, t = std::move(t)](const Point& p) {
            NodeIndex iv{0, 0, 0};
            for (int k = 0; k < grid.dim; ++k)
                iv[k] = static_cast<int>(std::lround(p[k] * grid.n));
            return t[grid.flatten(iv)];
        };
    };

    ProblemSpec prob;
    prob.name = "custom";
    prob.description = "tabulated values from " + path;
    prob.f = table_fn(load_table("f"));
    prob.g = table_fn(load_table("g"));
    if (j.contains("exact_u")) prob.exact_u = table_fn(load_table("exact_u"));
    prob.default_nu = j.value("nu", 50.0);
    prob.notes = "custom";
    return prob;
}

ProblemSpec resolve_problem(const RunConfig& cfg, int n) {
    if (!cfg.custom_path.empty()) return load_custom_problem(cfg.custom_path, n);
    auto p = find_problem(cfg.problem);
    if (!p) throw std::invalid_argument("unknown problem '" + cfg.problem + "'");
    return *p;
}

SolverConfig solver_config(const RunConfig& cfg) {
    SolverConfig sc;
    sc.method = cfg.solver;
    sc.scheme = cfg.scheme;
    sc.mode = cfg.mode;
    sc.nu = cfg.nu;
    sc.tol_increment = cfg.tol_inc;
    sc.tol_residual = cfg.tol_res;
    sc.max_iters = cfg.max_iters;
    sc.delta = cfg.delta;
    return sc;
}

Json report_json(const RunConfig& cfg, const SolveOutcome& out) {
    Json j;
    j["library_version"] = kVersion;
    j["config"] = config_json(cfg);
    j["n"] = out.grid.n;
    j["h"] = out.grid.h();
    j["termination"] = to_string(out.report.termination);
    j["iterations"] = out.report.iterations;
    j["chained_phase1_iters"] = out.report.chained_phase1_iters;
    j["final_residual"] = out.report.final_residual;
    j["final_increment"] = out.report.final_increment;
    j["wall_seconds"] = out.report.total_seconds;
    if (std::isfinite(out.error))
        j["error_vs_exact"] = out.error;
    else
        j["error_vs_exact"] = nullptr;
    j["discrete_convex"] = out.convexity.discrete_convex;
    j["min_eig_sym_ns"] = out.convexity.min_eig_sym_ns;
    j["min_eig_central"] = out.convexity.min_eig_central;
    j["subharmonic_preserved"] = out.report.subharmonic_preserved();
    j["trace"]["increment_norms"] = out.report.increment_norms;
    j["trace"]["residual_norms"] = out.report.residual_norms;
    j["trace"]["min_eig_sym_ns"] = out.report.min_eig_sym_ns;
    j["trace"]["min_laplacians"] = out.report.min_laplacians;
    j["trace"]["iter_seconds"] = out.report.iter_seconds;
    return j;
}

}  // namespace

void RunConfig::validate() const {
    if (problem.empty() && custom_path.empty())
        throw std::invalid_argument("no problem selected (--problem or custom values file)");
    if (!problem.empty() && custom_path.empty() && !find_problem(problem))
        throw std::invalid_argument("unknown problem '" + problem + "'");
    if (n_list.empty()) throw std::invalid_argument("empty n list");
    for (int n : n_list) {
        const int min_n = (mode == GridMode::Interior) ? 4 : 2;
        if (n < min_n)
            throw std::invalid_argument("n=" + std::to_string(n) + " too small for " +
                                        to_string(mode) + " mode");
    }
    if (solver != "march" && solver != "newton" && solver != "chained" && solver != "rescaled")
        throw std::invalid_argument("unknown solver '" + solver + "'");
    if (tol_inc <= 0.0 || tol_res <= 0.0)
        throw std::invalid_argument("tolerances must be positive");
    if (max_iters <= 0) throw std::invalid_argument("max-iters must be positive");
    if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
    if (threads <= 0) throw std::invalid_argument("threads must be positive");
}

int cmd_solve(const RunConfig& cfg) {
    try {
        cfg.validate();
        if (cfg.n_list.size() != 1)
            throw std::invalid_argument("solve expects exactly one n (use sweep for lists)");
    } catch (const std::exception& e) {
        return fail_with_error(1, "invalid-config", e.what());
    }

    try {
        const int n = cfg.n_list[0];
        const ProblemSpec prob = resolve_problem(cfg, n);
        const SolveOutcome out = run_problem(prob, solver_config(cfg), n);

        std::filesystem::create_directories(cfg.out_dir);
        const std::filesystem::path dir(cfg.out_dir);

        std::string csv = csv_preamble(cfg);
        csv += (out.grid.dim == 3) ? "x1,x2,x3,value\n" : "x1,x2,value\n";
        for (std::int64_t flat = 0; flat < out.grid.num_nodes(); ++flat) {
            const Point p = out.grid.coords(out.grid.unflatten(flat));
            csv += fmt_double(p[0]);
            csv += ",";
            csv += fmt_double(p[1]);
            if (out.grid.dim == 3) {
                csv += ",";
                csv += fmt_double(p[2]);
            }
            csv += ",";
            csv += fmt_double(out.u[flat]);
            csv += "\n";
        }
        write_text(dir / "solution.csv", csv);
        write_text(dir / "report.json", report_json(cfg, out).dump(2) + "\n");

        if (out.report.termination == Termination::Diverged)
            return fail_with_error(2, "diverged", "solver diverged; report.json written");
        return 0;
    } catch (const std::invalid_argument& e) {
        return fail_with_error(1, "invalid-config", e.what());
    } catch (const std::exception& e) {
        return fail_with_error(2, "runtime", e.what());
    }
}

int cmd_sweep(const RunConfig& cfg) {
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        return fail_with_error(1, "invalid-config", e.what());
    }

    try {
        const ProblemSpec prob = resolve_problem(cfg, cfg.n_list[0]);
        const auto rows = convergence_table(prob, solver_config(cfg), cfg.n_list);

        std::filesystem::create_directories(cfg.out_dir);
        std::string csv = csv_preamble(cfg);
        csv += "h,error,order,iters,seconds\n";
        for (const auto& r : rows) {
            csv += fmt_double(r.h);
            csv += ",";
            csv += std::isfinite(r.error) ? fmt_double(r.error) : "n/a";
            csv += ",";
            csv += std::isfinite(r.order) ? fmt_double(r.order) : "n/a";
            csv += ",";
            csv += std::to_string(r.iterations);
            csv += ",";
            csv += fmt_double(r.seconds);
            csv += "\n";
        }
        write_text(std::filesystem::path(cfg.out_dir) / "table.csv", csv);
        return 0;
    } catch (const std::invalid_argument& e) {
        return fail_with_error(1, "invalid-config", e.what());
    } catch (const std::exception& e) {
        return fail_with_error(2, "runtime", e.what());
    }
}

int cmd_verify(const RunConfig& cfg) {
    try {
        const auto items = run_identity_suite(cfg.seed);

        Json j;
        j["library_version"] = kVersion;
        j["config"] = config_json(cfg);
        j["all_passed"] = all_passed(items);
        j["items"] = Json::array();
        for (const auto& it : items) {
            Json ij;
            ij["name"] = it.name;
            ij["passed"] = it.passed;
            ij["measured"] = it.measured;
            ij["comparator"] = it.comparator;
            ij["threshold"] = it.threshold;
            if (!it.detail.empty()) ij["detail"] = it.detail;
            j["items"].push_back(ij);
        }

        std::filesystem::create_directories(cfg.out_dir);
        write_text(std::filesystem::path(cfg.out_dir) / "verify.json", j.dump(2) + "\n");

        for (const auto& it : items)
            std::cout << (it.passed ? "PASS " : "FAIL ") << it.name << "  (measured "
                      << it.measured << " " << it.comparator << " " << it.threshold << ")\n";
        return all_passed(items) ? 0 : 3;
    } catch (const std::exception& e) {
        return fail_with_error(2, "runtime", e.what());
    }
}

}  // namespace mafd
