#include "elastinet/core.hpp"

#include <cmath>

namespace elastinet {

namespace {

void require_shapes(const Vector& x, const Problem& p) {
    if (x.size() != p.cols()) {
        throw InvalidArgument("vector length does not match operator column count");
    }
}

} // namespace

double objective(const Vector& x, const Problem& p, const RegParams& r) {
    require_shapes(x, p);
    const Vector residual = p.op * x - p.data;
    return 0.5 * residual.squaredNorm() + r.alpha * x.lpNorm<1>() +
           0.5 * r.beta * x.squaredNorm();
}

double aux_objective(const Vector& x, const Problem& p, const RegParams& r,
                     const SignPattern& theta) {
    require_shapes(x, p);
    if (theta.size() != x.size()) {
        throw InvalidArgument("sign pattern length does not match vector length");
    }
    const Vector residual = p.op * x - p.data;
    double inner = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        inner += x[i] * theta[i];
    }
    return 0.5 * residual.squaredNorm() + r.alpha * inner + 0.5 * r.beta * x.squaredNorm();
}

double soft_shrink(double v, double threshold) {
    if (v > threshold) return v - threshold;
    if (v < -threshold) return v + threshold;
    return 0.0;
}

Vector soft_shrink(const Vector& v, double threshold) {
    Vector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out[i] = soft_shrink(v[i], threshold);
    }
    return out;
}

Vector kkt_residual(const Vector& x, const Problem& p, const RegParams& r) {
    require_shapes(x, p);
    if (!(r.beta > 0.0)) {
        throw InvalidArgument("kkt_residual requires beta > 0");
    }
    const Vector grad = p.op.transpose() * (p.op * x - p.data);
    return r.beta * x - soft_shrink(-grad, r.alpha);
}

OptimalityCheck check_optimality(const Vector& x, const Problem& p, const RegParams& r,
                                 const SignPattern& theta, double tol) {
    require_shapes(x, p);
    if (theta.size() != x.size()) {
        throw InvalidArgument("sign pattern length does not match vector length");
    }
    const Vector grad = p.op.transpose() * (p.op * x - p.data);

    OptimalityCheck check;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (theta[i] != 0) {
            const double gap = std::abs(-grad[i] - r.beta * x[i] - r.alpha * theta[i]);
            if (gap > tol) check.conda_ok = false;
        } else {
            const double excess = std::abs(grad[i]) - r.alpha;
            if (excess > tol) {
                check.condb_ok = false;
                if (excess > worst) {
                    worst = excess;
                    check.worst_violation_index = static_cast<int>(i);
                }
            }
        }
    }
    return check;
}

double zero_minimizer_threshold(const Problem& p) {
    return (p.op.transpose() * p.data).lpNorm<Eigen::Infinity>();
}

} // namespace elastinet
