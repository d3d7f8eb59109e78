#pragma once

#include "elastinet/types.hpp"

#include <cstdint>
#include <vector>

namespace elastinet {

/// Random m x s operator with i.i.d. standard-normal entries and unit-norm
/// columns. The exact solution has x_i = 1 for i = 0, spike_period,
/// 2*spike_period, ...; data is the exact image (no noise).
Problem gen_gaussian(Eigen::Index m, Eigen::Index s, Eigen::Index spike_period,
                     std::uint64_t seed);

/// Copy of p with columns s/2..s-1 overwritten by columns 0..s/2-1, making the
/// operator rank-deficient. Exact data is recomputed from the unchanged exact
/// solution and any previously added noise is discarded.
Problem make_rank_deficient(const Problem& p);

/// Copy of p with data = exact_data + rel_level * ||exact_data|| * g / ||g||
/// for a seeded standard-normal draw g, so noise_level = rel_level *
/// ||exact_data|| holds exactly. If p lacks exact data, its current data is
/// treated as exact.
Problem add_noise(const Problem& p, double rel_level, std::uint64_t seed);

/// Separable Gaussian blur on an n x n image: K = T (x) T for the banded
/// symmetric Toeplitz matrix T_ij = exp(-(i-j)^2 / (2 sigma^2)) / (sigma
/// sqrt(2 pi)) when |i-j| < band, rescaled so the spectral norm estimate of K
/// is 1. The exact image has unit pixels at (i, j) with both coordinates
/// divisible by ceil(n/5); pixel (i, j) maps to component i*n + j.
Problem gen_blur(Eigen::Index n, Eigen::Index band, double sigma);

struct SourceInstance {
    Problem problem;
    SourceCertificate certificate;
};

/// Instance satisfying the source condition K^T w = x + eta * xi with
/// xi = sign(x): x is supported on `support` with the given magnitudes (all
/// ones when omitted), and w solves the least-squares problem on K^T. Throws
/// if the least-squares residual shows the condition is not satisfiable,
/// relative residual > 1e-10.
SourceInstance make_source_instance(const Matrix& op, const std::vector<int>& support,
                                    double eta,
                                    const std::vector<double>& magnitudes = {});

} // namespace elastinet
