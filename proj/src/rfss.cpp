#include "elastinet/rfss.hpp"

#include "elastinet/cholesky_engine.hpp"
#include "elastinet/core.hpp"
#include "elastinet/rssn.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

namespace elastinet {

namespace {

struct Violation {
    int index = -1;
    double excess = 0.0;
};

// Largest condb violation off the active set, lowest index on ties; index -1
// when none exceeds the slack.
Violation worst_violation(const Vector& grad, const Vector& alpha, const ActiveSet& active,
                          double slack) {
    Violation v;
    for (Eigen::Index i = 0; i < grad.size(); ++i) {
        if (active.contains(static_cast<int>(i))) continue;
        const double excess = std::abs(grad[i]) - alpha[i];
        if (excess > slack && excess > v.excess) {
            v.index = static_cast<int>(i);
            v.excess = excess;
        }
    }
    return v;
}

double conda_gap(const Vector& x, const Vector& grad, const RegParams& r,
                 const SignPattern& theta) {
    double gap = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (theta[i] == 0) continue;
        gap = std::max(gap, std::abs(-grad[i] - r.beta * x[i] - r.alpha * theta[i]));
    }
    return gap;
}

bool signs_consistent(const Vector& x, const ActiveSet& active, const SignPattern& theta) {
    for (int i : active.indices()) {
        if (x[i] * theta[i] <= 0.0) return false;
    }
    return true;
}

SolveResult run(const Problem& p, const RegParams& r, const RfssOptions& opts,
                RfssTrace* trace, const ConsistentTriple* start) {
    if (!(r.beta > 0.0)) {
        throw InvalidArgument("rfss_solve requires beta > 0");
    }
    if (r.alpha < 0.0) {
        throw InvalidArgument("rfss_solve requires alpha >= 0");
    }
    const auto s = p.cols();
    const int max_iterations =
        opts.max_iterations ? *opts.max_iterations : static_cast<int>(10 * s);
    if (max_iterations < 1) {
        throw InvalidArgument("max_iterations must be at least 1");
    }
    if (opts.kkt_tolerance && !(*opts.kkt_tolerance > 0.0)) {
        throw InvalidArgument("kkt_tolerance must be positive");
    }
    const double tol =
        opts.kkt_tolerance ? *opts.kkt_tolerance : 1e-10 * zero_minimizer_threshold(p);

    Vector x = Vector::Zero(s);
    ActiveSet active;
    SignPattern theta = SignPattern::zeros(s);
    if (start) {
        if (start->point.size() != s) {
            throw InvalidArgument("warm-start triple does not match the problem size");
        }
        x = start->point;
        active = start->active;
        theta = start->signs;
    }

    const Vector alpha_vec = Vector::Constant(s, r.alpha);
    const Vector op_t_data = p.op.transpose() * p.data;
    std::unique_ptr<CholeskyEngine> engine;
    if (!opts.refactorize) {
        engine = std::make_unique<CholeskyEngine>(p.op, r.beta);
    }

    const auto solve_subproblem = [&]() {
        if (!engine) return subproblem_solve(active, theta, p, r);
        engine->sync(active.indices());
        const auto k = static_cast<Eigen::Index>(engine->order().size());
        Vector rhs(k);
        for (Eigen::Index j = 0; j < k; ++j) {
            const int idx = engine->order()[static_cast<std::size_t>(j)];
            rhs[j] = op_t_data[idx] - r.alpha * theta[idx];
        }
        const Vector block = engine->solve(rhs);
        Vector out = Vector::Zero(s);
        for (Eigen::Index j = 0; j < k; ++j) {
            out[engine->order()[static_cast<std::size_t>(j)]] = block[j];
        }
        return out;
    };

    const auto record_objective = [&](const Vector& point) {
        if (trace) trace->objectives.push_back(objective(point, p, r));
    };
    const auto record_visited = [&]() {
        if (trace) trace->visited.push_back(theta.entries());
    };

    SolveResult result;
    const auto finalize = [&](SolveStatus status) {
        result.status = status;
        result.solution = x;
        result.active_set = ActiveSet::support_of(x);
        result.objective = objective(x, p, r);
        result.kkt_residual_norm = kkt_residual(x, p, r).lpNorm<Eigen::Infinity>();
        return result;
    };

    record_objective(x);
    record_visited();

    for (;;) {
        // Step 1 / Step 5: full optimality check at a consistent triple.
        Vector grad = p.op.transpose() * (p.op * x - p.data);
        const Violation violation = worst_violation(grad, alpha_vec, active, tol);
        if (violation.index < 0) {
            if (conda_gap(x, grad, r, theta) <= tol) {
                return finalize(SolveStatus::Converged);
            }
            // Reachable only from a warm start whose point does not yet solve
            // its own sign-restricted problem; re-solve on the same pair.
        } else {
            // Step 2: admit the worst violator with the descent sign.
            const int i0 = violation.index;
            std::vector<int> indices = active.indices();
            indices.insert(std::lower_bound(indices.begin(), indices.end(), i0), i0);
            active = ActiveSet(std::move(indices));
            theta.set(i0, grad[i0] > 0.0 ? -1 : 1);
        }

        // Step 3 with Step 4 repairs: solve on (A, theta), truncate at sign
        // flips until the triple is consistent and satisfies conda.
        Eigen::Index repairs = 0;
        for (;;) {
            if (result.iterations >= max_iterations) {
                return finalize(SolveStatus::MaxIterations);
            }
            Vector next;
            try {
                next = solve_subproblem();
            } catch (const std::runtime_error&) {
                return finalize(SolveStatus::NumericalFailure);
            }
            ++result.iterations;

            if (signs_consistent(next, active, theta)) {
                x = std::move(next);
                record_objective(x);
                record_visited();
                break;
            }
            // Each truncation removes at least one index, so more than s
            // repairs without reaching consistency is a numerical breakdown.
            if (++repairs > s) {
                return finalize(SolveStatus::NumericalFailure);
            }
            if (trace) ++trace->sign_repair_passes;
            const ZeroCrossing crossing = zero_crossing_line_search(x, next, active);
            x = crossing.point;
            active = ActiveSet::support_of(x);
            theta = SignPattern::sign_of(x);
            record_objective(x);
            grad = p.op.transpose() * (p.op * x - p.data);
            if (conda_gap(x, grad, r, theta) <= tol) {
                record_visited();
                break;
            }
        }
    }
}

} // namespace

int select_violating_index(const Vector& x, const Problem& p, const RegParams& r,
                           const ActiveSet& active) {
    return select_violating_index(x, p, Vector::Constant(p.cols(), r.alpha), active);
}

int select_violating_index(const Vector& x, const Problem& p, const Vector& alpha,
                           const ActiveSet& active) {
    if (alpha.size() != p.cols()) {
        throw InvalidArgument("alpha length does not match operator columns");
    }
    if ((alpha.array() <= 0.0).any()) {
        throw InvalidArgument("weighted alpha requires all components positive");
    }
    const Vector grad = p.op.transpose() * (p.op * x - p.data);
    const Violation v = worst_violation(grad, alpha, active, 0.0);
    if (v.index < 0) {
        throw InvalidArgument("select_violating_index called without a violation");
    }
    return v.index;
}

Vector subproblem_solve(const ActiveSet& active, const SignPattern& theta,
                        const Problem& p, const RegParams& r) {
    return newton_step(active, theta, p, r);
}

Vector subproblem_solve(const ActiveSet& active, const SignPattern& theta,
                        const Problem& p, const Vector& alpha, double beta) {
    if (alpha.size() != p.cols()) {
        throw InvalidArgument("alpha length does not match operator columns");
    }
    if ((alpha.array() <= 0.0).any()) {
        throw InvalidArgument("weighted alpha requires all components positive");
    }
    if (!(beta > 0.0)) {
        throw InvalidArgument("subproblem_solve requires beta > 0");
    }

    Vector x = Vector::Zero(p.cols());
    const auto k = static_cast<Eigen::Index>(active.size());
    if (k == 0) return x;

    Matrix cols(p.rows(), k);
    Vector rhs(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const int idx = active.indices()[static_cast<std::size_t>(j)];
        if (theta[idx] == 0) {
            throw InvalidArgument("sign pattern must be nonzero on the active set");
        }
        cols.col(j) = p.op.col(idx);
        rhs[j] = -alpha[idx] * theta[idx];
    }
    rhs += cols.transpose() * p.data;

    Matrix gram = cols.transpose() * cols;
    gram.diagonal().array() += beta;
    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("subproblem_solve: Cholesky factorization failed");
    }
    const Vector block = llt.solve(rhs);
    for (Eigen::Index j = 0; j < k; ++j) {
        x[active.indices()[static_cast<std::size_t>(j)]] = block[j];
    }
    return x;
}

ZeroCrossing zero_crossing_line_search(const Vector& x_old, const Vector& x_new,
                                       const ActiveSet& active) {
    if (x_old.size() != x_new.size()) {
        throw InvalidArgument("zero_crossing_line_search: length mismatch");
    }
    ZeroCrossing out;
    double lambda0 = 1.0;
    bool found = false;
    for (int i : active.indices()) {
        const double a = x_old[i];
        const double b = x_new[i];
        if (a == 0.0) continue; // can only vanish at lambda = 0
        double lambda;
        if (b == 0.0) {
            lambda = 1.0;
        } else if ((a > 0.0) != (b > 0.0)) {
            lambda = a / (a - b);
        } else {
            continue;
        }
        if (!found || lambda < lambda0) {
            found = true;
            lambda0 = lambda;
            out.crossing_index = i;
        }
    }

    if (!found) {
        out.lambda0 = 1.0;
        out.point = x_new;
        return out;
    }

    out.lambda0 = lambda0;
    out.point = lambda0 * x_new + (1.0 - lambda0) * x_old;
    // Zero every component attaining lambda0, not just the lowest, so the
    // next pass cannot cross again at lambda = 0.
    for (int i : active.indices()) {
        const double a = x_old[i];
        const double b = x_new[i];
        if (a == 0.0) continue;
        if (b == 0.0) {
            if (lambda0 == 1.0) out.point[i] = 0.0;
        } else if ((a > 0.0) != (b > 0.0)) {
            if (a / (a - b) == lambda0) out.point[i] = 0.0;
        }
    }
    return out;
}

SolveResult rfss_solve(const Problem& p, const RegParams& r, const RfssOptions& opts,
                       RfssTrace* trace) {
    return run(p, r, opts, trace, nullptr);
}

SolveResult rfss_solve(const Problem& p, const RegParams& r, const ConsistentTriple& start,
                       const RfssOptions& opts, RfssTrace* trace) {
    return run(p, r, opts, trace, &start);
}

} // namespace elastinet
