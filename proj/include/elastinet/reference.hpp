#pragma once

#include "elastinet/types.hpp"

namespace elastinet {

/// Proximal map of step * (alpha ||.||_1 + beta/2 ||.||_2^2):
/// componentwise S_{step*alpha}(v_i) / (1 + step*beta).
Vector prox_elastic_net(const Vector& v, double step, const RegParams& r);

/// Spectral norm estimate of K^T K by 50 power iterations from the
/// normalized all-ones vector. Deterministic by construction.
double gram_norm_estimate(const Matrix& op);

/// Proximal-gradient iteration with fixed step 0.9 / ||K^T K||_2. Serves as a
/// slow but simple oracle for the active-set solvers; also the only solver
/// here that accepts beta = 0. Stops when the step difference satisfies
/// ||x_{k+1} - x_k||_inf <= tol * max(1, ||x_k||_inf).
SolveResult ista_solve(const Problem& p, const RegParams& r, double tol, int max_iter);

/// Minimizer for the identity operator: x_i = S_alpha(y_i) / (1 + beta).
Vector diagonal_closed_form(const Vector& y, const RegParams& r);

struct LineMinimizer {
    double t_star = 0.0;
    Vector x_star;
};

/// Minimizes eta ||base + t d||_1 + 1/2 ||base + t d||_2^2 over t in [lo, hi]
/// by golden-section search (the objective is convex piecewise-quadratic in t,
/// hence unimodal). Refined until |t - t_star| <= 1e-10. Throws when a
/// bracket endpoint beats every interior point, i.e. the minimizer was not
/// bracketed.
LineMinimizer r_eta_minimizer_on_line(const Vector& base, const Vector& direction,
                                      double eta, double lo, double hi);

} // namespace elastinet
