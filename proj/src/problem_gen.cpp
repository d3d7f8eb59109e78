#include "elastinet/problem_gen.hpp"

#include "elastinet/rng.hpp"

#include <Eigen/QR>

#include <cmath>
#include <stdexcept>

namespace elastinet {

Problem gen_gaussian(Eigen::Index m, Eigen::Index s, Eigen::Index spike_period,
                     std::uint64_t seed) {
    if (m < 1 || s < 1) {
        throw InvalidArgument("gen_gaussian requires m, s >= 1");
    }
    if (spike_period < 1 || spike_period > s) {
        throw InvalidArgument("gen_gaussian requires 1 <= spike_period <= s");
    }
    NormalSampler normal(seed);
    Matrix op(m, s);
    for (Eigen::Index j = 0; j < s; ++j) {
        op.col(j) = normal.vector(m);
        op.col(j) /= op.col(j).norm();
    }
    Vector exact = Vector::Zero(s);
    for (Eigen::Index i = 0; i < s; i += spike_period) {
        exact[i] = 1.0;
    }
    Vector image = op * exact;
    return Problem(std::move(op), image, image, std::move(exact));
}

Problem make_rank_deficient(const Problem& p) {
    const Eigen::Index s = p.cols();
    if (s % 2 != 0) {
        throw InvalidArgument("make_rank_deficient requires an even column count");
    }
    if (!p.exact_solution) {
        throw InvalidArgument("make_rank_deficient requires an exact solution");
    }
    Matrix op = p.op;
    op.rightCols(s / 2) = op.leftCols(s / 2);
    Vector image = op * *p.exact_solution;
    return Problem(std::move(op), image, image, p.exact_solution);
}

Problem add_noise(const Problem& p, double rel_level, std::uint64_t seed) {
    if (rel_level < 0.0) {
        throw InvalidArgument("add_noise requires rel_level >= 0");
    }
    const Vector exact = p.exact_data ? *p.exact_data : p.data;
    Vector noisy = exact;
    double level = 0.0;
    if (rel_level > 0.0) {
        NormalSampler normal(seed);
        Vector g = normal.vector(exact.size());
        level = rel_level * exact.norm();
        noisy += (level / g.norm()) * g;
    }
    return Problem(p.op, std::move(noisy), exact, p.exact_solution, level);
}

Problem gen_blur(Eigen::Index n, Eigen::Index band, double sigma) {
    if (n < 1 || band < 1 || band > n) {
        throw InvalidArgument("gen_blur requires 1 <= band <= n");
    }
    if (!(sigma > 0.0)) {
        throw InvalidArgument("gen_blur requires sigma > 0");
    }
    Matrix kernel = Matrix::Zero(n, n);
    const double scale = 1.0 / (sigma * std::sqrt(2.0 * M_PI));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto dist = static_cast<double>(i - j);
            if (std::abs(i - j) < band) {
                kernel(i, j) = scale * std::exp(-dist * dist / (2.0 * sigma * sigma));
            }
        }
    }

    // ||T (x) T||_2 = ||T||_2^2; estimate ||T||_2 by power iteration. The
    // all-ones start keeps the estimate deterministic, and the kernel's
    // nonnegative entries guarantee the dominant eigenvalue is positive.
    Vector v = Vector::Ones(n);
    v /= v.norm();
    double norm_estimate = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
        Vector w = kernel * v;
        norm_estimate = w.norm();
        v = w / norm_estimate;
    }

    Matrix op(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            op.block(i * n, j * n, n, n) = kernel(i, j) * kernel;
        }
    }
    op /= norm_estimate * norm_estimate;

    const Eigen::Index period = (n + 4) / 5;
    Vector exact = Vector::Zero(n * n);
    for (Eigen::Index i = 0; i < n; i += period) {
        for (Eigen::Index j = 0; j < n; j += period) {
            exact[i * n + j] = 1.0;
        }
    }
    Vector image = op * exact;
    return Problem(std::move(op), image, image, std::move(exact));
}

SourceInstance make_source_instance(const Matrix& op, const std::vector<int>& support,
                                    double eta, const std::vector<double>& magnitudes) {
    if (!(eta > 0.0)) {
        throw InvalidArgument("make_source_instance requires eta > 0");
    }
    if (!magnitudes.empty() && magnitudes.size() != support.size()) {
        throw InvalidArgument("magnitudes length must match support length");
    }
    const Eigen::Index s = op.cols();
    Vector exact = Vector::Zero(s);
    Vector xi = Vector::Zero(s);
    for (std::size_t k = 0; k < support.size(); ++k) {
        const int i = support[k];
        if (i < 0 || i >= s) {
            throw InvalidArgument("support index out of range");
        }
        const double value = magnitudes.empty() ? 1.0 : magnitudes[k];
        if (value == 0.0) {
            throw InvalidArgument("support magnitudes must be nonzero");
        }
        exact[i] = value;
        xi[i] = value > 0.0 ? 1.0 : -1.0;
    }

    const Vector rhs = exact + eta * xi;
    const Matrix op_t = op.transpose();
    const Vector w = op_t.colPivHouseholderQr().solve(rhs);
    const double residual = (op_t * w - rhs).norm();
    if (residual > 1e-10 * rhs.norm()) {
        throw std::runtime_error(
            "source condition not satisfiable: least-squares residual too large");
    }

    Vector image = op * exact;
    Problem problem(op, image, image, std::move(exact));
    return SourceInstance{std::move(problem), SourceCertificate{w, xi, w.norm()}};
}

} // namespace elastinet
