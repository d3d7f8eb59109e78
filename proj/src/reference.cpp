#include "elastinet/reference.hpp"

#include "elastinet/core.hpp"

#include <cmath>

namespace elastinet {

Vector prox_elastic_net(const Vector& v, double step, const RegParams& r) {
    if (!(step > 0.0)) {
        throw InvalidArgument("prox_elastic_net requires step > 0");
    }
    return soft_shrink(v, step * r.alpha) / (1.0 + step * r.beta);
}

double gram_norm_estimate(const Matrix& op) {
    Vector v = Vector::Ones(op.cols());
    v /= v.norm();
    double estimate = 0.0;
    for (int iter = 0; iter < 50; ++iter) {
        Vector w = op.transpose() * (op * v);
        estimate = w.norm();
        if (estimate == 0.0) return 0.0;
        v = w / estimate;
    }
    return estimate;
}

SolveResult ista_solve(const Problem& p, const RegParams& r, double tol, int max_iter) {
    if (r.beta < 0.0) {
        throw InvalidArgument("ista_solve requires beta >= 0");
    }
    const double step = 0.9 / gram_norm_estimate(p.op);

    Vector x = Vector::Zero(p.cols());
    SolveResult result;
    result.status = SolveStatus::MaxIterations;
    for (int k = 0; k < max_iter; ++k) {
        const Vector grad = p.op.transpose() * (p.op * x - p.data);
        Vector next = prox_elastic_net(x - step * grad, step, r);
        const double diff = (next - x).lpNorm<Eigen::Infinity>();
        const double floor = std::max(1.0, x.lpNorm<Eigen::Infinity>());
        x = std::move(next);
        result.iterations = k + 1;
        if (diff <= tol * floor) {
            result.status = SolveStatus::Converged;
            break;
        }
    }

    result.solution = x;
    result.active_set = ActiveSet::support_of(x);
    result.objective = objective(x, p, r);
    if (r.beta > 0.0) {
        result.kkt_residual_norm = kkt_residual(x, p, r).lpNorm<Eigen::Infinity>();
    } else {
        // Natural residual of the fixed-point map at unit step.
        const Vector grad = p.op.transpose() * (p.op * x - p.data);
        result.kkt_residual_norm =
            (x - soft_shrink(x - grad, r.alpha)).lpNorm<Eigen::Infinity>();
    }
    return result;
}

Vector diagonal_closed_form(const Vector& y, const RegParams& r) {
    return soft_shrink(y, r.alpha) / (1.0 + r.beta);
}

LineMinimizer r_eta_minimizer_on_line(const Vector& base, const Vector& direction,
                                      double eta, double lo, double hi) {
    if (direction.norm() == 0.0) {
        throw InvalidArgument("direction must be nonzero");
    }
    if (eta < 0.0) {
        throw InvalidArgument("eta must be nonnegative");
    }
    if (!(lo < hi)) {
        throw InvalidArgument("search interval must satisfy lo < hi");
    }

    const auto value = [&](double t) {
        const Vector x = base + t * direction;
        return eta * x.lpNorm<1>() + 0.5 * x.squaredNorm();
    };

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = value(c);
    double fd = value(d);
    while (b - a > 2e-10) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = value(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = value(d);
        }
    }
    const double t_star = 0.5 * (a + b);
    if (value(lo) < value(t_star) || value(hi) < value(t_star)) {
        throw InvalidArgument("search interval does not bracket the minimizer");
    }
    return LineMinimizer{t_star, base + t_star * direction};
}

} // namespace elastinet
