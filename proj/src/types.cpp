#include "elastinet/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace elastinet {

Problem::Problem(Matrix op_, Vector data_, std::optional<Vector> exact_data_,
                 std::optional<Vector> exact_solution_, double noise_level_)
    : op(std::move(op_)),
      data(std::move(data_)),
      exact_data(std::move(exact_data_)),
      exact_solution(std::move(exact_solution_)),
      noise_level(noise_level_) {
    if (op.rows() < 1 || op.cols() < 1) {
        throw InvalidArgument("Problem: operator must have at least one row and column");
    }
    if (data.size() != op.rows()) {
        throw InvalidArgument("Problem: data length does not match operator rows");
    }
    if (exact_data && exact_data->size() != op.rows()) {
        throw InvalidArgument("Problem: exact_data length does not match operator rows");
    }
    if (exact_solution && exact_solution->size() != op.cols()) {
        throw InvalidArgument("Problem: exact_solution length does not match operator columns");
    }
    if (!(noise_level >= 0.0)) {
        throw InvalidArgument("Problem: noise_level must be nonnegative");
    }
    if (exact_data) {
        // Absolute slack covers rounding in data = exact_data + noise when the
        // noise is many orders of magnitude below the data itself.
        const double mismatch = (data - *exact_data).norm();
        const double slack = 64.0 * std::numeric_limits<double>::epsilon() * exact_data->norm();
        if (mismatch > noise_level * (1.0 + 1e-12) + slack) {
            throw InvalidArgument("Problem: ||data - exact_data|| exceeds noise_level");
        }
    }
}

RegParams::RegParams(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
    if (alpha < 0.0 || beta < 0.0) {
        throw InvalidArgument("RegParams: alpha and beta must be nonnegative");
    }
    eta = beta > 0.0 ? alpha / beta : std::numeric_limits<double>::infinity();
}

RegParams RegParams::coupled(double eta_, double beta_) {
    if (eta_ < 0.0 || beta_ < 0.0) {
        throw InvalidArgument("RegParams: eta and beta must be nonnegative");
    }
    RegParams r;
    r.alpha = eta_ * beta_;
    r.beta = beta_;
    r.eta = eta_;
    return r;
}

SignPattern::SignPattern(std::vector<int> entries) : entries_(std::move(entries)) {
    for (int v : entries_) {
        if (v != -1 && v != 0 && v != 1) {
            throw InvalidArgument("SignPattern: entries must be -1, 0 or +1");
        }
    }
}

SignPattern SignPattern::sign_of(const Vector& x) {
    SignPattern p;
    p.entries_.resize(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        p.entries_[static_cast<std::size_t>(i)] = x[i] > 0.0 ? 1 : (x[i] < 0.0 ? -1 : 0);
    }
    return p;
}

SignPattern SignPattern::zeros(Eigen::Index n) {
    SignPattern p;
    p.entries_.assign(static_cast<std::size_t>(n), 0);
    return p;
}

void SignPattern::set(Eigen::Index i, int v) {
    if (v != -1 && v != 0 && v != 1) {
        throw InvalidArgument("SignPattern: entries must be -1, 0 or +1");
    }
    entries_[static_cast<std::size_t>(i)] = v;
}

ActiveSet::ActiveSet(std::vector<int> indices) : indices_(std::move(indices)) {
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        if (indices_[k] < 0) {
            throw InvalidArgument("ActiveSet: negative index");
        }
        if (k > 0 && indices_[k] <= indices_[k - 1]) {
            throw InvalidArgument("ActiveSet: indices must be strictly increasing");
        }
    }
}

ActiveSet ActiveSet::support_of(const Vector& x) {
    std::vector<int> idx;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x[i] != 0.0) idx.push_back(static_cast<int>(i));
    }
    return ActiveSet(std::move(idx));
}

bool ActiveSet::contains(int i) const {
    return std::binary_search(indices_.begin(), indices_.end(), i);
}

bool ConsistentTriple::is_consistent(const ActiveSet& active, const Vector& x,
                                     const SignPattern& theta) {
    if (theta.size() != x.size()) return false;
    std::size_t k = 0;
    const auto& idx = active.indices();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const bool in_active = k < idx.size() && idx[k] == static_cast<int>(i);
        if (in_active) {
            ++k;
            const int sx = x[i] > 0.0 ? 1 : (x[i] < 0.0 ? -1 : 0);
            if (sx == 0 || sx != theta[i]) return false;
        } else {
            if (x[i] != 0.0 || theta[i] != 0) return false;
        }
    }
    return k == idx.size();
}

ConsistentTriple::ConsistentTriple(ActiveSet active_, Vector point_, SignPattern signs_)
    : active(std::move(active_)), point(std::move(point_)), signs(std::move(signs_)) {
    if (!is_consistent(active, point, signs)) {
        throw InvalidArgument("ConsistentTriple: triple is not consistent");
    }
}

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIterations: return "max_iterations";
        case SolveStatus::CycleDetected: return "cycle_detected";
        case SolveStatus::NumericalFailure: return "numerical_failure";
    }
    return "unknown";
}

} // namespace elastinet
