#include "elastinet/param_rules.hpp"

#include "elastinet/core.hpp"
#include "elastinet/reference.hpp"
#include "elastinet/rfss.hpp"
#include "elastinet/rssn.hpp"

#include <cmath>
#include <stdexcept>

namespace elastinet {

namespace {

constexpr double kIstaTol = 1e-10;
constexpr int kIstaMaxIter = 50000;

// RSSN may cycle away from the solution on hard instances; RFSS is the
// provably terminating fallback.
SolveResult solve_converged(const Problem& p, const RegParams& r) {
    SolveResult result = rssn_solve(p, r);
    if (result.status != SolveStatus::Converged) {
        result = rfss_solve(p, r);
    }
    if (result.status != SolveStatus::Converged) {
        throw std::runtime_error("solver failed at alpha=" + std::to_string(r.alpha) +
                                 ", beta=" + std::to_string(r.beta) + ": " +
                                 to_string(result.status));
    }
    return result;
}

} // namespace

SolveResult solve_with(SolverChoice solver, const Problem& p, const RegParams& r) {
    switch (solver) {
        case SolverChoice::Rssn:
            return rssn_solve(p, r);
        case SolverChoice::Rfss:
            return rfss_solve(p, r);
        case SolverChoice::Ista:
            return ista_solve(p, r, kIstaTol, kIstaMaxIter);
    }
    throw InvalidArgument("unknown solver choice");
}

double residual_at(double beta, double eta, const Problem& p, SolverChoice solver) {
    if (!(beta > 0.0)) {
        throw InvalidArgument("residual_at requires beta > 0");
    }
    const RegParams r = RegParams::coupled(eta, beta);
    const SolveResult result = solve_with(solver, p, r);
    if (result.status != SolveStatus::Converged) {
        throw std::runtime_error("residual_at: solver failed at beta=" +
                                 std::to_string(beta) + ": " + to_string(result.status));
    }
    return (p.op * result.solution - p.data).norm();
}

DiscrepancyResult discrepancy_solve(const Problem& p, double eta,
                                    const DiscrepancyOptions& opts) {
    if (!(p.noise_level > 0.0)) {
        throw InvalidArgument("discrepancy_solve requires a positive noise level");
    }
    if (!(opts.bracket_lo > 0.0) || !(opts.bracket_lo < opts.bracket_hi)) {
        throw InvalidArgument("discrepancy bracket must satisfy 0 < lo < hi");
    }
    if (!(opts.rel_tol > 0.0)) {
        throw InvalidArgument("rel_tol must be positive");
    }
    if (opts.tau < 1.0) {
        throw InvalidArgument("tau must be at least 1");
    }
    const double target = opts.tau * p.noise_level;
    if (!(p.data.norm() > target)) {
        throw std::runtime_error(
            "discrepancy_solve: ||y|| <= tau * noise_level, no solution exists");
    }

    const auto resid = [&](double beta) { return residual_at(beta, eta, p, opts.solver); };
    const double tol = opts.rel_tol * target;

    double lo = opts.bracket_lo;
    double hi = opts.bracket_hi;
    double r_lo = resid(lo);
    double r_hi = resid(hi);
    for (int i = 0; r_lo >= target && i < 20; ++i) {
        hi = lo;
        r_hi = r_lo;
        lo /= 10.0;
        r_lo = resid(lo);
    }
    for (int i = 0; r_hi < target && i < 20; ++i) {
        lo = hi;
        r_lo = r_hi;
        hi *= 10.0;
        r_hi = resid(hi);
    }
    if (r_lo >= target || r_hi < target) {
        throw std::runtime_error(
            "discrepancy_solve: could not bracket the discrepancy equation");
    }

    double beta_star = hi;
    double residual = r_hi;
    if (std::abs(r_lo - target) <= tol) {
        beta_star = lo;
        residual = r_lo;
    } else if (std::abs(r_hi - target) > tol) {
        bool met = false;
        for (int i = 0; i < opts.max_bisections; ++i) {
            const double mid = std::sqrt(lo * hi); // beta spans decades
            const double r_mid = resid(mid);
            if (std::abs(r_mid - target) <= tol) {
                beta_star = mid;
                residual = r_mid;
                met = true;
                break;
            }
            if (r_mid < target) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if (!met) {
            throw std::runtime_error(
                "discrepancy_solve: bisection did not reach the tolerance");
        }
    }

    DiscrepancyResult out;
    out.beta_star = beta_star;
    const RegParams r = RegParams::coupled(eta, beta_star);
    const SolveResult solve = solve_with(opts.solver, p, r);
    if (solve.status != SolveStatus::Converged) {
        throw std::runtime_error("discrepancy_solve: final solve failed");
    }
    out.x_star = solve.solution;
    out.residual = residual;
    out.unique_warning = !(beta_star * eta < zero_minimizer_threshold(p));
    return out;
}

ValueFunctionPoint value_function(double alpha, double beta, const Problem& p) {
    if (!(beta > 0.0)) {
        throw InvalidArgument("value_function requires beta > 0");
    }
    const RegParams r(alpha, beta);
    const SolveResult result = solve_converged(p, r);
    ValueFunctionPoint out;
    out.value = result.objective;
    out.l1 = result.solution.lpNorm<1>();
    out.half_l2sq = 0.5 * result.solution.squaredNorm();
    return out;
}

std::vector<SolveResult> beta_path(const Problem& p, double alpha,
                                   const std::vector<double>& betas,
                                   SolverChoice solver) {
    for (std::size_t i = 0; i < betas.size(); ++i) {
        if (!(betas[i] > 0.0) || (i > 0 && !(betas[i] < betas[i - 1]))) {
            throw InvalidArgument("beta_path requires a strictly decreasing positive grid");
        }
    }

    std::vector<SolveResult> results;
    results.reserve(betas.size());
    const SolveResult* warm = nullptr;
    for (double beta : betas) {
        const RegParams r(alpha, beta);
        SolveResult step;
        switch (solver) {
            case SolverChoice::Rssn:
                if (warm) {
                    step = rssn_solve(p, r, warm->active_set,
                                      SignPattern::sign_of(warm->solution));
                } else {
                    step = rssn_solve(p, r);
                }
                break;
            case SolverChoice::Rfss:
                if (warm) {
                    step = rfss_solve(
                        p, r,
                        ConsistentTriple(warm->active_set, warm->solution,
                                         SignPattern::sign_of(warm->solution)));
                } else {
                    step = rfss_solve(p, r);
                }
                break;
            case SolverChoice::Ista:
                step = ista_solve(p, r, kIstaTol, kIstaMaxIter);
                break;
        }
        results.push_back(std::move(step));
        warm = results.back().status == SolveStatus::Converged ? &results.back() : nullptr;
    }
    return results;
}

} // namespace elastinet
