// Acceptance checks for the elastic-net solver library. Each criterion prints
// one PASS/FAIL line; the process exits nonzero if any criterion fails.

#include "elastinet/core.hpp"
#include "elastinet/experiments.hpp"
#include "elastinet/param_rules.hpp"
#include "elastinet/problem_gen.hpp"
#include "elastinet/reference.hpp"
#include "elastinet/rfss.hpp"
#include "elastinet/rssn.hpp"
#include "elastinet/types.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace elastinet;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream log;

    void require(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            log << "    failed: " << what << "\n";
        }
    }
    void note(const std::string& what) { log << "    " << what << "\n"; }
};

double rel_diff(const Vector& a, const Vector& b) {
    const double scale = std::max(a.norm(), b.norm());
    return scale == 0.0 ? (a - b).norm() : (a - b).norm() / scale;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ---- 1: closed-form minimizer of R_eta over the solution line of a
//         rank-one 2x2 system ------------------------------------------------
Outcome criterion1() {
    Outcome out;
    Matrix op(2, 2);
    op << 1.0, -2.0, 2.0, -4.0;
    Vector y(2);
    y << 1.0, 2.0;

    Eigen::FullPivLU<Matrix> lu(op);
    const Vector particular = lu.solve(y);
    out.require((op * particular - y).norm() <= 1e-12, "system must be consistent");
    Matrix kernel = lu.kernel();
    out.require(kernel.cols() == 1, "kernel must be one-dimensional");
    Vector dir = kernel.col(0);
    dir /= dir.norm();

    const double span = (particular.norm() + 2.0) / 1.0 + 1.0;
    const auto minimizer = [&](double eta) {
        return r_eta_minimizer_on_line(particular, dir, eta, -span, span).x_star;
    };

    for (double eta : {0.5, 1.0, 2.0}) {
        const Vector x = minimizer(eta);
        out.require(std::abs(x[0] - 0.0) <= 1e-8 && std::abs(x[1] + 0.5) <= 1e-8,
                    "eta = " + fmt(eta) + " must select (0, -0.5), got (" +
                        fmt(x[0]) + ", " + fmt(x[1]) + ")");
    }
    for (double eta : {0.1, 0.25, 0.4}) {
        const Vector x = minimizer(eta);
        const double want0 = 0.2 - 0.4 * eta;
        const double want1 = -0.4 - 0.2 * eta;
        out.require(std::abs(x[0] - want0) <= 1e-8 && std::abs(x[1] - want1) <= 1e-8,
                    "eta = " + fmt(eta) + " must select (" + fmt(want0) + ", " +
                        fmt(want1) + "), got (" + fmt(x[0]) + ", " + fmt(x[1]) + ")");
    }
    return out;
}

// ---- 2: the zero vector is the minimizer exactly when alpha reaches
//         ||K^T y||_inf ------------------------------------------------------
Outcome criterion2() {
    Outcome out;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const Problem p = gen_gaussian(20, 20, 5, seed);
        const double threshold = zero_minimizer_threshold(p);

        const SolveResult above = rssn_solve(p, RegParams(1.001 * threshold, 1.0));
        out.require(above.converged(), "seed " + std::to_string(seed) +
                                           ": solve above the threshold must converge");
        out.require(above.solution.lpNorm<Eigen::Infinity>() == 0.0,
                    "seed " + std::to_string(seed) +
                        ": solution above the threshold must be exactly zero");

        const SolveResult below = rssn_solve(p, RegParams(0.999 * threshold, 1.0));
        out.require(below.converged(), "seed " + std::to_string(seed) +
                                           ": solve below the threshold must converge");
        out.require(below.solution.lpNorm<Eigen::Infinity>() > 0.0,
                    "seed " + std::to_string(seed) +
                        ": solution below the threshold must be nonzero");
    }
    return out;
}

// ---- 3: the two active-set solvers and the proximal-gradient oracle find
//         the same minimizer -------------------------------------------------
Outcome criterion3() {
    Outcome out;
    double worst_pair = 0.0;
    double worst_kkt = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const Problem p = gen_gaussian(60, 60, 10, seed);
        const double kkt_cap =
            1e-8 * (p.op.transpose() * p.data).lpNorm<Eigen::Infinity>();
        for (double beta : {0x1p-20, 0x1p-10}) {
            const RegParams r(1e-3, beta);
            const SolveResult newton = rssn_solve(p, r);
            const SolveResult fss = rfss_solve(p, r);
            const SolveResult ista = ista_solve(p, r, 1e-12, 300000);
            const std::string tag =
                "seed " + std::to_string(seed) + ", beta = " + fmt(beta);
            out.require(newton.converged(), tag + ": rssn must converge");
            out.require(fss.converged(), tag + ": rfss must converge");
            out.require(ista.converged(), tag + ": ista must converge");

            for (const SolveResult* result : {&newton, &fss, &ista}) {
                const double kkt =
                    kkt_residual(result->solution, p, r).lpNorm<Eigen::Infinity>();
                worst_kkt = std::max(worst_kkt, kkt / kkt_cap * 1e-8);
                out.require(kkt <= kkt_cap, tag + ": KKT residual " + fmt(kkt) +
                                                " exceeds cap " + fmt(kkt_cap));
            }
            const double d1 = rel_diff(newton.solution, fss.solution);
            const double d2 = rel_diff(newton.solution, ista.solution);
            const double d3 = rel_diff(fss.solution, ista.solution);
            worst_pair = std::max({worst_pair, d1, d2, d3});
            out.require(std::max({d1, d2, d3}) <= 1e-7,
                        tag + ": pairwise difference " + fmt(std::max({d1, d2, d3})));
        }
    }
    out.note("worst pairwise relative difference: " + fmt(worst_pair));
    out.note("worst KKT residual (absolute): " + fmt(worst_kkt));
    return out;
}

// ---- 4: feature-sign search descends strictly and terminates ---------------
Outcome criterion4() {
    Outcome out;
    int total_iterations = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const Problem p = gen_gaussian(60, 60, 10, seed);
        for (double beta : {0x1p-20, 0x1p-10}) {
            const RegParams r(1e-3, beta);
            RfssTrace trace;
            const SolveResult result = rfss_solve(p, r, {}, &trace);
            const std::string tag =
                "seed " + std::to_string(seed) + ", beta = " + fmt(beta);
            out.require(result.converged(), tag + ": must converge");
            out.require(result.iterations <= 10 * 60,
                        tag + ": must finish within 10 s iterations");
            total_iterations += result.iterations;
            for (std::size_t k = 1; k < trace.objectives.size(); ++k) {
                if (!(trace.objectives[k] < trace.objectives[k - 1])) {
                    out.require(false, tag + ": objective not strictly decreasing at " +
                                           std::to_string(k));
                    break;
                }
            }
        }
    }
    out.note("mean iterations: " + fmt(total_iterations / 100.0));
    return out;
}

// ---- 5: duplicated columns break the l1 reference but not the regularized
//         solvers -------------------------------------------------------------
Outcome criterion5() {
    Outcome out;
    // The optimality system forces ||K_A^T r|| = ||(alpha theta + beta x)_A||,
    // so the data-fit residual is proportional to beta (about 0.9 beta on this
    // family) and the tight identifiability bound is only meaningful at the
    // smallest beta. alpha = 1e-8 keeps its contribution negligible.
    const double alpha = 1e-8;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const Problem p = make_rank_deficient(gen_gaussian(60, 60, 10, seed));
        const Vector& exact = *p.exact_solution;
        const Vector& y = *p.exact_data;
        const std::string tag = "seed " + std::to_string(seed);

        double residual_at_smallest = 0.0;
        for (double beta : {0x1p-20, 0x1p-16, 0x1p-12}) {
            const RegParams r(alpha, beta);
            for (SolverChoice choice : {SolverChoice::Rssn, SolverChoice::Rfss}) {
                const SolveResult result = solve_with(choice, p, r);
                const std::string solver_tag =
                    tag + (choice == SolverChoice::Rssn ? ", rssn" : ", rfss") +
                    ", beta = " + fmt(beta);
                out.require(result.converged(), solver_tag + ": must converge");
                const double rel_error = (result.solution - exact).norm() / exact.norm();
                out.require(rel_error <= 1e-2,
                            solver_tag + ": rel_error " + fmt(rel_error));
                const double residual = (p.op * result.solution - y).norm() / y.norm();
                if (beta == 0x1p-20 && choice == SolverChoice::Rssn) {
                    residual_at_smallest = residual;
                }
            }
        }
        out.require(residual_at_smallest <= 1e-6,
                    tag + ": identifiability residual " + fmt(residual_at_smallest) +
                        " at beta = 2^-20");
        out.note(tag + ": residual at beta = 2^-20: " + fmt(residual_at_smallest));

        // The l1 (beta = 0) reference run, at the benchmark's alpha = 1e-5.
        // Started from zero it stays symmetric across twin columns and
        // converges to the symmetric minimizer; its outcome is reported here
        // for the record, while the table below declines the row because the
        // l1 minimizer is not unique on a rank-deficient operator.
        const SolveResult ista = ista_solve(p, RegParams(1e-5, 0.0), 1e-10, 50000);
        const double ista_residual = (p.op * ista.solution - y).norm() / y.norm();
        out.note(tag + ": beta = 0 reference: " + to_string(ista.status) + " after " +
                 std::to_string(ista.iterations) + " iterations, residual " +
                 fmt(ista_residual));
    }

    // The published-table behavior: the beta = 0 row of a rank-deficient grid
    // is reported as "-".
    experiments::GridOptions grid_opts;
    grid_opts.m = 60;
    grid_opts.s = 60;
    grid_opts.spike_period = 10;
    grid_opts.alpha = 1e-5;
    grid_opts.rank_deficient = true;
    grid_opts.betas = {0.0, 0x1p-20, 0x1p-16, 0x1p-12};
    grid_opts.seed = 1;
    grid_opts.repeats = 1;
    const io::Table grid = experiments::run_grid(grid_opts);
    out.require(grid.rows.size() == 4, "grid must have four rows");
    for (std::size_t c = 1; c < grid.rows[0].size(); ++c) {
        out.require(grid.rows[0][c] == "-",
                    "beta = 0 row must be reported as \"-\", column " +
                        std::to_string(c) + " reads " + grid.rows[0][c]);
    }
    for (std::size_t rr = 1; rr < grid.rows.size(); ++rr) {
        out.require(grid.rows[rr][2] != "-" && std::stod(grid.rows[rr][2]) <= 1e-2,
                    "grid row " + std::to_string(rr) + " rel_error " +
                        grid.rows[rr][2]);
    }
    return out;
}

// ---- 6: value-function derivatives equal the solution norms ----------------
Outcome criterion6() {
    Outcome out;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Problem p = add_noise(gen_gaussian(20, 20, 5, seed), 0.02, seed + 100);
        const double alpha = 1e-2;
        const double beta = 1e-1;
        const ValueFunctionPoint at = value_function(alpha, beta, p);
        const std::string tag = "seed " + std::to_string(seed);

        const double ha = 1e-5 * alpha;
        const double da = (value_function(alpha + ha, beta, p).value -
                           value_function(alpha - ha, beta, p).value) /
                          (2.0 * ha);
        const double rel_a = std::abs(da - at.l1) / std::abs(at.l1);
        out.require(rel_a <= 1e-4, tag + ": d/dalpha mismatch " + fmt(rel_a));

        const double hb = 1e-5 * beta;
        const double db = (value_function(alpha, beta + hb, p).value -
                           value_function(alpha, beta - hb, p).value) /
                          (2.0 * hb);
        const double rel_b = std::abs(db - at.half_l2sq) / std::abs(at.half_l2sq);
        out.require(rel_b <= 1e-4, tag + ": d/dbeta mismatch " + fmt(rel_b));
        worst = std::max({worst, rel_a, rel_b});
    }
    out.note("worst relative derivative mismatch: " + fmt(worst));
    return out;
}

// ---- 7: residual monotonicity and the discrepancy root ---------------------
Outcome criterion7() {
    Outcome out;

    const Problem noisy = add_noise(gen_gaussian(30, 30, 6, 3), 0.05, 17);
    double previous = -1.0;
    for (int k = 0; k < 20; ++k) {
        const double beta = std::pow(10.0, -6.0 + 6.0 * k / 19.0);
        const double r = residual_at(beta, 0.1, noisy);
        out.require(r >= previous - 1e-12,
                    "residual decreased at beta = " + fmt(beta) + ": " + fmt(r) +
                        " after " + fmt(previous));
        previous = r;
    }

    Matrix op = Matrix::Identity(2, 2);
    Vector y(2);
    y << 2.0, 0.0;
    const Problem fixture(op, y, y, std::nullopt, 0.5);
    const DiscrepancyResult root = discrepancy_solve(fixture, 0.0);
    out.require(std::abs(root.beta_star - 1.0 / 3.0) <= 1e-5 / 3.0,
                "fixture root " + fmt(root.beta_star) + " must equal 1/3");
    out.note("fixture beta* = " + fmt(root.beta_star));

    const Problem gauss = add_noise(gen_gaussian(30, 30, 6, 21), 0.05, 4);
    const DiscrepancyResult hit = discrepancy_solve(gauss, 0.1);
    const double target = gauss.noise_level;
    out.require(std::abs(hit.residual - target) <= 1e-5 * target,
                "returned residual " + fmt(hit.residual) + " must match tau delta " +
                    fmt(target));
    return out;
}

// ---- 8: a-priori error bounds under the source condition -------------------
Outcome criterion8() {
    Outcome out;
    const double eta = 0.5;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const Problem base = gen_gaussian(30, 30, 7, seed);
        const SourceInstance inst =
            make_source_instance(base.op, {0, 5, 10, 15, 20}, eta);
        const double w_norm = inst.certificate.w_norm;
        const Vector& exact = *inst.problem.exact_solution;
        const double y_norm = inst.problem.data.norm();

        for (double delta_abs : {1e-1, 1e-2, 1e-3, 1e-4}) {
            const Problem p =
                add_noise(inst.problem, delta_abs / y_norm, seed + 40 * seed);
            const double delta = p.noise_level;
            const double beta = delta;
            const RegParams r = RegParams::coupled(eta, beta);
            const SolveResult result = solve_with(SolverChoice::Rssn, p, r);
            const std::string tag =
                "seed " + std::to_string(seed) + ", delta = " + fmt(delta);
            out.require(result.converged(), tag + ": must converge");

            const double err = (result.solution - exact).norm();
            const double err_bound = delta / std::sqrt(beta) + std::sqrt(beta) * w_norm;
            out.require(err <= err_bound + 1e-10, tag + ": ||x - x_dagger|| " +
                                                      fmt(err) + " exceeds bound " +
                                                      fmt(err_bound));

            const double fit = (p.op * result.solution - p.data).norm();
            const double fit_bound = delta + 2.0 * beta * w_norm;
            out.require(fit <= fit_bound + 1e-10, tag + ": ||Kx - y_delta|| " +
                                                      fmt(fit) + " exceeds bound " +
                                                      fmt(fit_bound));
        }
    }
    return out;
}

// ---- 9: error-decay slopes on the blur benchmark ---------------------------
Outcome criterion9() {
    Outcome out;
    experiments::Test4Options opts;
    opts.n = 20;
    opts.band = 5;
    opts.sigma = 0.7;
    opts.beta_factors = {1.0};
    opts.deltas = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    opts.seed = 1;

    const experiments::Test4Output result = experiments::run_test4(opts);
    out.require(result.slopes.rows.size() == 1, "one slope row expected");
    const std::string& high_cell = result.slopes.rows[0][1];
    const std::string& low_cell = result.slopes.rows[0][2];
    out.require(high_cell != "-" && low_cell != "-", "both slope fits must exist");
    if (high_cell == "-" || low_cell == "-") return out;

    const double high = std::stod(high_cell);
    const double low = std::stod(low_cell);
    out.note("high-noise slope " + fmt(high) + ", low-noise slope " + fmt(low));
    out.require(high >= 0.45 && high <= 0.75,
                "high-noise slope " + fmt(high) + " outside [0.45, 0.75]");
    out.require(low >= 0.85 && low <= 1.1,
                "low-noise slope " + fmt(low) + " outside [0.85, 1.1]");
    return out;
}

// ---- 10: larger beta trades sparsity and accuracy --------------------------
Outcome criterion10() {
    Outcome out;
    experiments::GridOptions opts = experiments::test1_options(false);
    opts.seed = 1;
    opts.betas = {0x1p-30, 0x1p-12};

    const io::Table table = experiments::run_grid(opts);
    out.require(table.rows.size() == 2, "two rows expected");
    const double active_small = std::stod(table.rows[0][1]);
    const double active_large = std::stod(table.rows[1][1]);
    const double error_small = std::stod(table.rows[0][2]);
    const double error_large = std::stod(table.rows[1][2]);
    out.note("active size " + fmt(active_small) + " -> " + fmt(active_large) +
             ", rel_error " + fmt(error_small) + " -> " + fmt(error_large));
    out.require(active_large > active_small,
                "active-set size must grow with beta");
    out.require(error_large >= 1e2 * error_small,
                "rel_error must grow by at least 100x");
    return out;
}

// ---- 11: warm-started path following succeeds where cold starts struggle ---
Outcome criterion11() {
    Outcome out;
    const Problem blurred = gen_blur(20, 5, 10.0);
    const Problem p = add_noise(blurred, 0.001, 1);
    const double alpha = 0.1 * p.noise_level;

    // Half-octave steps from beta = alpha down to alpha / 64. The fine grid
    // keeps every warm step cheap; the comparison below is between a cold and
    // a warm-started solve of the same final-beta problem.
    std::vector<double> betas;
    for (int k = 0; k <= 12; ++k) betas.push_back(alpha * std::pow(2.0, -k / 2.0));

    const auto path = beta_path(p, alpha, betas, SolverChoice::Rssn);
    out.require(path.size() == betas.size(), "path must cover the full grid");
    int warm_total = 0;
    for (std::size_t k = 0; k < path.size(); ++k) {
        warm_total += path[k].iterations;
        out.require(path[k].converged(),
                    "warm path step " + std::to_string(k) + " (beta = " +
                        fmt(betas[k]) + ") must converge, got " +
                        to_string(path[k].status));
    }

    const SolveResult cold = rssn_solve(p, RegParams(alpha, betas.back()));
    const int warm_final = path.back().iterations;
    out.note("warm final-step iterations: " + fmt(warm_final) + " (path total " +
             fmt(warm_total) + "); cold start at the same beta: " +
             to_string(cold.status) + " after " + fmt(cold.iterations) +
             " iterations");
    out.require(!cold.converged() || cold.iterations > 5 * warm_final,
                "cold start must fail or need > 5x the warm-start iterations");
    return out;
}

struct Criterion {
    int id;
    const char* name;
    double time_limit_s;
    std::function<Outcome()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "line-restricted selection closed form", 1.0, criterion1},
        {2, "zero-minimizer threshold", 10.0, criterion2},
        {3, "solver-oracle agreement", 60.0, criterion3},
        {4, "feature-sign descent and termination", 60.0, criterion4},
        {5, "rank-deficient robustness", 120.0, criterion5},
        {6, "value-function derivatives", 30.0, criterion6},
        {7, "residual monotonicity and discrepancy root", 60.0, criterion7},
        {8, "a-priori rate bounds", 30.0, criterion8},
        {9, "blur error-decay slopes", 300.0, criterion9},
        {10, "sparsity-accuracy trend", 120.0, criterion10},
        {11, "path following at sigma = 10", 120.0, criterion11},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome.ok = false;
            outcome.log << "    exception: " << e.what() << "\n";
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (elapsed >= criterion.time_limit_s) {
            outcome.ok = false;
            outcome.log << "    time limit exceeded: " << fmt(elapsed) << " s >= "
                        << fmt(criterion.time_limit_s) << " s\n";
        }
        if (!outcome.ok) ++failures;
        std::printf("%s  %2d  %-45s (%.2f s)\n", outcome.ok ? "PASS" : "FAIL",
                    criterion.id, criterion.name, elapsed);
        const std::string details = outcome.log.str();
        if (!details.empty()) std::fputs(details.c_str(), stdout);
    }

    if (failures == 0) {
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
