#pragma once

#include "elastinet/types.hpp"

#include <vector>

namespace elastinet {

/// Maintains a Cholesky factor of beta I + K_A^T K_A across small changes of
/// the index set A. Appending an index costs one triangular solve; removing
/// one costs a rank-1 update of the trailing factor block. Both are much
/// cheaper than refactorizing when A changes by single indices, which is the
/// common case in feature-sign iterations.
class CholeskyEngine {
public:
    CholeskyEngine(const Matrix& op, double beta);

    /// Appends indices entering `active` and removes indices that left it.
    /// `active` must be sorted and duplicate-free.
    void sync(const std::vector<int>& active);

    /// Current indices in factor order (append order, not sorted).
    const std::vector<int>& order() const { return order_; }

    /// Solves (beta I + K_A^T K_A) z = rhs with rhs and z laid out in
    /// order(). Throws std::runtime_error if the factor broke down.
    Vector solve(const Vector& rhs) const;

private:
    void append(int index);
    void remove_position(Eigen::Index pos);

    const Matrix* op_;
    double beta_;
    std::vector<int> order_;
    Matrix cols_; // operator columns in factor order, m x k
    Matrix ell_;  // lower-triangular factor, k x k
};

} // namespace elastinet
