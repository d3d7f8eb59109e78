#pragma once

#include "elastinet/types.hpp"

#include <optional>

namespace elastinet {

enum class ActiveSetVariant {
    Standard, // { i : |K^T(Kx-y)|_i > alpha }
    Variant1, // { i : |x - gamma K^T(Kx-y) - gamma beta x|_i > gamma alpha }
    Variant2, // { i : |x - gamma K^T(Kx-y)|_i > gamma alpha }
};

struct RssnOptions {
    int max_iterations = 100;
    // Defaults to 1e-10 * ||K^T y||_inf, which keeps the stopping test
    // invariant under rescaling of the data.
    std::optional<double> kkt_tolerance{};
    ActiveSetVariant variant = ActiveSetVariant::Standard;
    double gamma = 1.0; // used by Variant1/Variant2 only
    bool cycle_detection = true;
};

ActiveSet active_set_standard(const Vector& x, const Problem& p, const RegParams& r);
ActiveSet active_set_variant1(const Vector& x, const Problem& p, const RegParams& r,
                              double gamma);
ActiveSet active_set_variant2(const Vector& x, const Problem& p, const RegParams& r,
                              double gamma);

/// Regularized Newton update: x restricted to the active set solves
/// (beta Id + M_A) x|_A = (K^T y - alpha s)|_A with M_A the active block of
/// K^T K; all other components are zero. Throws std::runtime_error when the
/// Cholesky factorization fails (beta <= 0 or severe ill-conditioning).
Vector newton_step(const ActiveSet& active, const SignPattern& signs, const Problem& p,
                   const RegParams& r);

/// Semismooth Newton iteration on the active set and sign vector. Converged
/// means the (active set, signs) pair repeated on two subsequent iterations
/// and the optimality residual is within tolerance. Revisiting an earlier
/// pair without converging reports CycleDetected (the method is only locally
/// convergent). Requires beta > 0.
SolveResult rssn_solve(const Problem& p, const RegParams& r, const RssnOptions& opts = {});

/// Warm-started variant: the first Newton step uses the given pair, which is
/// all the state the iteration carries between steps.
SolveResult rssn_solve(const Problem& p, const RegParams& r, const ActiveSet& active0,
                       const SignPattern& signs0, const RssnOptions& opts = {});

} // namespace elastinet
