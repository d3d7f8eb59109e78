#pragma once

#include "elastinet/types.hpp"

#include <optional>

namespace elastinet {

/// Elastic-net objective 1/2 ||Kx - y||^2 + alpha ||x||_1 + beta/2 ||x||_2^2.
double objective(const Vector& x, const Problem& p, const RegParams& r);

/// Auxiliary objective 1/2 ||Kx - y||^2 + alpha <x, theta> + beta/2 ||x||_2^2.
/// Bounded above by objective() for any sign pattern, with equality iff
/// theta matches sign(x) on the support of x.
double aux_objective(const Vector& x, const Problem& p, const RegParams& r,
                     const SignPattern& theta);

/// Componentwise soft-shrinkage: max(0, |v_i| - threshold) * sign(v_i).
Vector soft_shrink(const Vector& v, double threshold);

/// Scalar soft-shrinkage.
double soft_shrink(double v, double threshold);

/// Optimality residual F(x) = beta x - S_alpha(-K^T (Kx - y)).
/// Zero exactly at the unique minimizer when beta > 0.
Vector kkt_residual(const Vector& x, const Problem& p, const RegParams& r);

/// Split optimality check against a sign pattern:
///   conda_ok: |(-K^T(Kx-y) - beta x)_i - alpha theta_i| <= tol wherever theta_i != 0
///   condb_ok: |K^T(Kx-y)|_i <= alpha + tol wherever theta_i == 0
/// worst_violation_index is the index of the largest condb violation (lowest
/// index on ties), present only when condb fails.
struct OptimalityCheck {
    bool conda_ok = true;
    bool condb_ok = true;
    std::optional<int> worst_violation_index;
};

OptimalityCheck check_optimality(const Vector& x, const Problem& p, const RegParams& r,
                                 const SignPattern& theta, double tol);

/// Smallest alpha for which the minimizer is the zero vector (any beta > 0):
/// ||K^T y||_inf.
double zero_minimizer_threshold(const Problem& p);

} // namespace elastinet
