#pragma once

#include "elastinet/io.hpp"
#include "elastinet/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace elastinet::experiments {

/// Beta grid for the exact-data benchmarks (tests 1 and 2). The leading 0 is
/// a sentinel row: the active-set solvers require beta > 0, so that row is
/// computed with the proximal-gradient reference instead.
std::vector<double> exact_data_beta_grid();

/// Beta grid for the noisy benchmarks (test 3).
std::vector<double> noisy_beta_grid();

/// Shared driver for the random-operator benchmarks (tests 1-3).
struct GridOptions {
    Eigen::Index m = 120;
    Eigen::Index s = 120;
    Eigen::Index spike_period = 10;
    double alpha = 1e-5;
    // When set, alpha is taken as the per-instance noise level (alpha ~ delta
    // as in the noisy benchmark); the alpha field is ignored.
    bool alpha_from_noise = false;
    std::vector<double> betas = exact_data_beta_grid();
    std::uint64_t seed = 1;
    int repeats = 1;
    double noise_rel = 0.0;
    bool rank_deficient = false;
};

GridOptions test1_options(bool full);
GridOptions test2_options(bool full);
GridOptions test3_options(bool full, bool rank_deficient);

/// One row per beta with columns
///   beta, active_size, rel_error[, e_kx], rfss_iters, rfss_ms, rssn_iters, rssn_ms
/// (e_kx = ||y_exact - K x*|| / ||y_exact|| appears for noisy runs). Values
/// are means over repeats; a solver cell is "-" when that solver failed on
/// any repeat, and solution cells are "-" when no solver converged.
io::Table run_grid(const GridOptions& opts);

/// Convergence-rate study on the separable blur operator.
struct Test4Options {
    Eigen::Index n = 20; // image is n x n; the full-scale run uses 50
    Eigen::Index band = 5;
    double sigma = 0.7;
    // beta = factor * alpha per row; factor 0 is the l1 reference sentinel.
    std::vector<double> beta_factors = {0.0, 0.25, 0.5, 1.0};
    // Relative noise levels; alpha = delta = absolute noise per instance.
    std::vector<double> deltas = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    std::uint64_t seed = 1;
    // Boundary between the high-noise and low-noise slope fits, as an
    // absolute delta; 0 selects the geometric midpoint of the actual range.
    double split_delta = 0.0;
};

struct Test4Output {
    // Columns: beta_rule, delta, alpha, beta, rel_error, iterations, ms.
    io::Table table;
    // Columns: beta_rule, high_noise_slope, low_noise_slope.
    io::Table slopes;
    double split_delta = 0.0;
};

Test4Output run_test4(const Test4Options& opts);

/// Ordinary least-squares slope of log(error) against log(delta).
/// Requires at least two points, all positive.
double slope_fit(const std::vector<std::pair<double, double>>& points);

} // namespace elastinet::experiments
