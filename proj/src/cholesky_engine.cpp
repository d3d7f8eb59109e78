#include "elastinet/cholesky_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elastinet {

CholeskyEngine::CholeskyEngine(const Matrix& op, double beta) : op_(&op), beta_(beta) {
    if (!(beta > 0.0)) {
        throw InvalidArgument("CholeskyEngine requires beta > 0");
    }
    cols_.resize(op.rows(), 0);
    ell_.resize(0, 0);
}

void CholeskyEngine::sync(const std::vector<int>& active) {
    for (std::size_t k = 0; k < active.size(); ++k) {
        if (active[k] < 0 || active[k] >= op_->cols()) {
            throw InvalidArgument("CholeskyEngine::sync: index out of range");
        }
        if (k > 0 && active[k] <= active[k - 1]) {
            throw InvalidArgument("CholeskyEngine::sync: indices must be strictly increasing");
        }
    }
    // Remove stale positions first so the appends below factor against the
    // surviving columns only.
    for (Eigen::Index pos = 0; pos < static_cast<Eigen::Index>(order_.size());) {
        if (std::binary_search(active.begin(), active.end(),
                               order_[static_cast<std::size_t>(pos)])) {
            ++pos;
        } else {
            remove_position(pos);
        }
    }
    std::vector<int> present = order_;
    std::sort(present.begin(), present.end());
    for (int idx : active) {
        if (!std::binary_search(present.begin(), present.end(), idx)) {
            append(idx);
        }
    }
}

void CholeskyEngine::append(int index) {
    const Eigen::Index k = static_cast<Eigen::Index>(order_.size());
    const Vector col = op_->col(index);

    Vector v(k);
    if (k > 0) {
        const Vector cross = cols_.transpose() * col;
        v = ell_.triangularView<Eigen::Lower>().solve(cross);
    }
    const double pivot_sq = col.squaredNorm() + beta_ - v.squaredNorm();
    if (!(pivot_sq > 0.0)) {
        throw std::runtime_error("CholeskyEngine: factor breakdown on append");
    }

    cols_.conservativeResize(Eigen::NoChange, k + 1);
    cols_.col(k) = col;
    ell_.conservativeResize(k + 1, k + 1);
    ell_.row(k).head(k) = v.transpose();
    ell_.col(k).head(k).setZero();
    ell_(k, k) = std::sqrt(pivot_sq);
    order_.push_back(index);
}

void CholeskyEngine::remove_position(Eigen::Index pos) {
    const Eigen::Index k = static_cast<Eigen::Index>(order_.size());
    const Eigen::Index tail = k - pos - 1;
    Vector w = ell_.col(pos).segment(pos + 1, tail);

    Matrix next(k - 1, k - 1);
    next.topLeftCorner(pos, pos) = ell_.topLeftCorner(pos, pos);
    next.bottomLeftCorner(tail, pos) = ell_.block(pos + 1, 0, tail, pos);
    next.topRightCorner(pos, tail).setZero();
    next.bottomRightCorner(tail, tail) = ell_.block(pos + 1, pos + 1, tail, tail);

    // Deleting row/column pos leaves the trailing block short of w w^T;
    // restore it with a rank-1 Cholesky update via Givens-style rotations.
    auto trailing = next.bottomRightCorner(tail, tail);
    for (Eigen::Index j = 0; j < tail; ++j) {
        const double a = trailing(j, j);
        if (!(a > 0.0)) {
            throw std::runtime_error("CholeskyEngine: factor breakdown on removal");
        }
        const double r = std::hypot(a, w[j]);
        const double c = r / a;
        const double s = w[j] / a;
        trailing(j, j) = r;
        for (Eigen::Index i = j + 1; i < tail; ++i) {
            trailing(i, j) = (trailing(i, j) + s * w[i]) / c;
            w[i] = c * w[i] - s * trailing(i, j);
        }
    }

    ell_ = std::move(next);
    Matrix cols(cols_.rows(), k - 1);
    cols.leftCols(pos) = cols_.leftCols(pos);
    cols.rightCols(tail) = cols_.rightCols(tail);
    cols_ = std::move(cols);
    order_.erase(order_.begin() + pos);
}

Vector CholeskyEngine::solve(const Vector& rhs) const {
    if (rhs.size() != static_cast<Eigen::Index>(order_.size())) {
        throw InvalidArgument("CholeskyEngine::solve: rhs length mismatch");
    }
    const Vector forward = ell_.triangularView<Eigen::Lower>().solve(rhs);
    return ell_.transpose().triangularView<Eigen::Upper>().solve(forward);
}

} // namespace elastinet
