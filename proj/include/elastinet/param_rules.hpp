#pragma once

#include "elastinet/types.hpp"

#include <vector>

namespace elastinet {

enum class SolverChoice { Rssn, Rfss, Ista };

/// Solves one instance with the chosen solver at default options (ISTA runs
/// at tolerance 1e-10 with a 50000-iteration cap).
SolveResult solve_with(SolverChoice solver, const Problem& p, const RegParams& r);

struct DiscrepancyOptions {
    double bracket_lo = 1e-8;
    double bracket_hi = 1.0;
    double rel_tol = 1e-6;
    int max_bisections = 80;
    double tau = 1.0;
    SolverChoice solver = SolverChoice::Rssn;
};

/// Residual norm ||K x* - y|| of the minimizer at (alpha, beta) = (eta beta,
/// beta). Non-decreasing in beta for fixed eta, which is what makes bisection
/// applicable. Throws on solver failure.
double residual_at(double beta, double eta, const Problem& p,
                   SolverChoice solver = SolverChoice::Rssn);

struct DiscrepancyResult {
    double beta_star = 0.0;
    Vector x_star;
    double residual = 0.0;
    // The selected parameter is provably unique only while
    // beta* eta < ||K^T y||_inf; set when that safeguard fails.
    bool unique_warning = false;
};

/// Morozov principle: finds beta with ||K x* - y|| = tau * noise_level by
/// bisection over a bracket that is auto-expanded by factors of 10 (at most
/// 20 times each way). Requires noise_level > 0 and ||y|| > tau * noise_level.
DiscrepancyResult discrepancy_solve(const Problem& p, double eta,
                                    const DiscrepancyOptions& opts = {});

struct ValueFunctionPoint {
    double value = 0.0;     // objective at the minimizer
    double l1 = 0.0;        // = d(value)/d(alpha)
    double half_l2sq = 0.0; // = d(value)/d(beta)
};

/// Objective value at the minimizer together with the two quantities that
/// equal its partial derivatives in alpha and beta.
ValueFunctionPoint value_function(double alpha, double beta, const Problem& p);

/// Sequential solves over a strictly decreasing beta grid, warm-starting each
/// step from the previous solution (active set and signs). A failed step is
/// recorded as-is and the next step falls back to a cold start.
std::vector<SolveResult> beta_path(const Problem& p, double alpha,
                                   const std::vector<double>& betas,
                                   SolverChoice solver = SolverChoice::Rssn);

} // namespace elastinet
