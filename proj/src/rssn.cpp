#include "elastinet/rssn.hpp"

#include "elastinet/core.hpp"

#include <Eigen/Cholesky>

#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace elastinet {

namespace {

struct Selection {
    ActiveSet active;
    SignPattern signs;

    bool operator==(const Selection& other) const {
        return active == other.active && signs == other.signs;
    }
};

// Membership score and threshold for the chosen variant. The active set is
// where |score| exceeds the threshold and the sign vector is the sign of the
// score there; all three variants share the same Newton block solve.
Selection select(const Vector& x, const Problem& p, const RegParams& r,
                 const RssnOptions& opts) {
    const Vector grad = p.op.transpose() * (p.op * x - p.data);
    Vector score;
    double threshold = r.alpha;
    switch (opts.variant) {
        case ActiveSetVariant::Standard:
            score = -grad;
            break;
        case ActiveSetVariant::Variant1:
            score = x - opts.gamma * grad - opts.gamma * r.beta * x;
            threshold = opts.gamma * r.alpha;
            break;
        case ActiveSetVariant::Variant2:
            score = x - opts.gamma * grad;
            threshold = opts.gamma * r.alpha;
            break;
    }
    std::vector<int> indices;
    std::vector<int> signs(static_cast<std::size_t>(x.size()), 0);
    for (Eigen::Index i = 0; i < score.size(); ++i) {
        if (score[i] > threshold) {
            indices.push_back(static_cast<int>(i));
            signs[static_cast<std::size_t>(i)] = 1;
        } else if (score[i] < -threshold) {
            indices.push_back(static_cast<int>(i));
            signs[static_cast<std::size_t>(i)] = -1;
        }
    }
    return Selection{ActiveSet(std::move(indices)), SignPattern(std::move(signs))};
}

ActiveSet threshold_set(const Vector& score, double threshold) {
    std::vector<int> indices;
    for (Eigen::Index i = 0; i < score.size(); ++i) {
        if (std::abs(score[i]) > threshold) indices.push_back(static_cast<int>(i));
    }
    return ActiveSet(std::move(indices));
}

void validate_options(const RssnOptions& opts) {
    if (opts.max_iterations < 1) {
        throw InvalidArgument("max_iterations must be at least 1");
    }
    if (opts.kkt_tolerance && !(*opts.kkt_tolerance > 0.0)) {
        throw InvalidArgument("kkt_tolerance must be positive");
    }
    if (!(opts.gamma > 0.0)) {
        throw InvalidArgument("gamma must be positive");
    }
}

SolveResult run(const Problem& p, const RegParams& r, const RssnOptions& opts,
                const Selection* warm) {
    if (!(r.beta > 0.0)) {
        throw InvalidArgument("rssn_solve requires beta > 0");
    }
    if (r.alpha < 0.0) {
        throw InvalidArgument("rssn_solve requires alpha >= 0");
    }
    validate_options(opts);
    const double tol =
        opts.kkt_tolerance ? *opts.kkt_tolerance : 1e-10 * zero_minimizer_threshold(p);

    SolveResult result;
    Vector x = Vector::Zero(p.cols());
    std::optional<Selection> previous;
    std::set<std::vector<int>> visited; // sign vectors; the set is their support

    const auto finalize = [&](SolveStatus status) {
        result.status = status;
        result.solution = x;
        result.active_set = ActiveSet::support_of(x);
        result.objective = objective(x, p, r);
        result.kkt_residual_norm = kkt_residual(x, p, r).lpNorm<Eigen::Infinity>();
        return result;
    };

    if (warm) {
        previous = *warm;
        visited.insert(warm->signs.entries());
        try {
            x = newton_step(warm->active, warm->signs, p, r);
        } catch (const std::runtime_error&) {
            return finalize(SolveStatus::NumericalFailure);
        }
        result.iterations = 1;
    }

    for (;;) {
        Selection current = select(x, p, r, opts);
        if (previous && current == *previous) {
            const double residual = kkt_residual(x, p, r).lpNorm<Eigen::Infinity>();
            // A stable pair whose point fails the optimality test signals a
            // broken solve, not convergence.
            return finalize(residual <= tol ? SolveStatus::Converged
                                            : SolveStatus::NumericalFailure);
        }
        if (opts.cycle_detection && !visited.insert(current.signs.entries()).second) {
            return finalize(SolveStatus::CycleDetected);
        }
        if (result.iterations >= opts.max_iterations) {
            return finalize(SolveStatus::MaxIterations);
        }
        try {
            x = newton_step(current.active, current.signs, p, r);
        } catch (const std::runtime_error&) {
            return finalize(SolveStatus::NumericalFailure);
        }
        ++result.iterations;
        previous = std::move(current);
    }
}

} // namespace

ActiveSet active_set_standard(const Vector& x, const Problem& p, const RegParams& r) {
    const Vector grad = p.op.transpose() * (p.op * x - p.data);
    return threshold_set(grad, r.alpha);
}

ActiveSet active_set_variant1(const Vector& x, const Problem& p, const RegParams& r,
                              double gamma) {
    if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    const Vector grad = p.op.transpose() * (p.op * x - p.data);
    return threshold_set(x - gamma * grad - gamma * r.beta * x, gamma * r.alpha);
}

ActiveSet active_set_variant2(const Vector& x, const Problem& p, const RegParams& r,
                              double gamma) {
    if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    const Vector grad = p.op.transpose() * (p.op * x - p.data);
    return threshold_set(x - gamma * grad, gamma * r.alpha);
}

Vector newton_step(const ActiveSet& active, const SignPattern& signs, const Problem& p,
                   const RegParams& r) {
    if (!(r.beta > 0.0)) {
        throw InvalidArgument("newton_step requires beta > 0");
    }
    if (signs.size() != p.cols()) {
        throw InvalidArgument("sign pattern length does not match operator columns");
    }
    for (Eigen::Index i = 0; i < signs.size(); ++i) {
        const bool nonzero = signs[i] != 0;
        if (nonzero != active.contains(static_cast<int>(i))) {
            throw InvalidArgument("sign pattern support must equal the active set");
        }
    }

    Vector x = Vector::Zero(p.cols());
    const auto k = static_cast<Eigen::Index>(active.size());
    if (k == 0) return x;

    Matrix cols(p.rows(), k);
    Vector rhs(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const int idx = active.indices()[static_cast<std::size_t>(j)];
        cols.col(j) = p.op.col(idx);
        rhs[j] = -r.alpha * signs[idx];
    }
    rhs += cols.transpose() * p.data;

    Matrix gram = cols.transpose() * cols;
    gram.diagonal().array() += r.beta;
    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("newton_step: Cholesky factorization failed");
    }
    const Vector block = llt.solve(rhs);
    for (Eigen::Index j = 0; j < k; ++j) {
        x[active.indices()[static_cast<std::size_t>(j)]] = block[j];
    }
    return x;
}

SolveResult rssn_solve(const Problem& p, const RegParams& r, const RssnOptions& opts) {
    return run(p, r, opts, nullptr);
}

SolveResult rssn_solve(const Problem& p, const RegParams& r, const ActiveSet& active0,
                       const SignPattern& signs0, const RssnOptions& opts) {
    Selection warm{active0, signs0};
    return run(p, r, opts, &warm);
}

} // namespace elastinet
