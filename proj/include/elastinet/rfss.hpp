#pragma once

#include "elastinet/types.hpp"

#include <optional>
#include <vector>

namespace elastinet {

struct RfssOptions {
    // Defaults to 10 * s; the method provably terminates, so hitting the cap
    // indicates a numerical problem rather than slow convergence.
    std::optional<int> max_iterations{};
    // Defaults to 1e-10 * ||K^T y||_inf as in RssnOptions.
    std::optional<double> kkt_tolerance{};
    // When false, the active-set Cholesky factor is updated incrementally
    // instead of recomputed per subproblem.
    bool refactorize = true;
};

/// Per-run diagnostics, filled when a trace pointer is passed to rfss_solve.
struct RfssTrace {
    // Objective at the start and after every accepted consistent iterate;
    // strictly decreasing by the descent property of the method.
    std::vector<double> objectives;
    // Sign vectors of the consistent pairs reaching the outer optimality
    // check; the termination argument implies no pair appears twice.
    std::vector<std::vector<int>> visited;
    // Total zero-crossing truncations performed.
    int sign_repair_passes = 0;
};

/// Index off the active set violating |K^T(Kx-y)|_i <= alpha the most,
/// lowest index on ties. Throws when no violation exists.
int select_violating_index(const Vector& x, const Problem& p, const RegParams& r,
                           const ActiveSet& active);

/// Weighted-l1 variant with per-component alpha_i > 0.
int select_violating_index(const Vector& x, const Problem& p, const Vector& alpha,
                           const ActiveSet& active);

/// Minimizer of the sign-linearized objective over vectors supported on the
/// active set: x|_A = (beta Id + M_A)^{-1} (K^T y - alpha theta)|_A, zero
/// elsewhere. Identical to the semismooth Newton update.
Vector subproblem_solve(const ActiveSet& active, const SignPattern& theta,
                        const Problem& p, const RegParams& r);

/// Weighted-l1 variant with per-component alpha_i > 0.
Vector subproblem_solve(const ActiveSet& active, const SignPattern& theta,
                        const Problem& p, const Vector& alpha, double beta);

struct ZeroCrossing {
    double lambda0 = 1.0;              // in (0, 1]
    std::optional<int> crossing_index; // lowest component zeroed, if any
    Vector point;                      // interpolated point, crossings set to 0
};

/// First zero crossing on the segment from x_old (consistent) to x_new
/// (supported on active): the smallest lambda in (0, 1] where a component
/// with x_old_i != 0 vanishes. Components attaining lambda0 are set to exact
/// zero in the returned point. Without any crossing the result is x_new with
/// lambda0 = 1 and no index.
ZeroCrossing zero_crossing_line_search(const Vector& x_old, const Vector& x_new,
                                       const ActiveSet& active);

/// Regularized feature-sign search. Globally convergent for beta > 0 with
/// strictly decreasing objective; each iteration is one subproblem solve.
SolveResult rfss_solve(const Problem& p, const RegParams& r, const RfssOptions& opts = {},
                       RfssTrace* trace = nullptr);

/// Warm start from a consistent triple.
SolveResult rfss_solve(const Problem& p, const RegParams& r, const ConsistentTriple& start,
                       const RfssOptions& opts = {}, RfssTrace* trace = nullptr);

} // namespace elastinet
