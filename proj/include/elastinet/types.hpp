#pragma once

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace elastinet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when an argument violates a documented precondition
/// (dimension mismatch, invalid parameter range, inconsistent triple).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A finite-dimensional linear inverse problem K x = y with optional
/// ground truth attached for error reporting.
///
/// Validated on construction:
///   - K has m >= 1 rows, s >= 1 columns; data has length m
///   - exact_data (if present) has length m, exact_solution length s
///   - if exact_data is present, ||data - exact_data|| <= noise_level (up to
///     a 1e-12 relative slack)
struct Problem {
    Matrix op;                            // K, m x s
    Vector data;                          // observed right-hand side
    std::optional<Vector> exact_data;     // noise-free right-hand side
    std::optional<Vector> exact_solution; // ground-truth coefficients
    double noise_level = 0.0;             // bound on ||data - exact_data||

    Problem(Matrix op_, Vector data_,
            std::optional<Vector> exact_data_ = std::nullopt,
            std::optional<Vector> exact_solution_ = std::nullopt,
            double noise_level_ = 0.0);

    Eigen::Index rows() const { return op.rows(); }
    Eigen::Index cols() const { return op.cols(); }
};

/// Regularization configuration for the elastic-net objective
///   1/2 ||Kx - y||^2 + alpha ||x||_1 + beta/2 ||x||_2^2.
///
/// `eta` couples the two penalties as alpha = eta * beta; `tau` is the
/// discrepancy-principle factor; `gamma` the step used by the alternative
/// active-set rules.
struct RegParams {
    double alpha = 0.0;
    double beta = 0.0;
    double eta = std::numeric_limits<double>::infinity();
    double tau = 1.0;
    double gamma = 1.0;

    RegParams() = default;
    RegParams(double alpha_, double beta_);

    /// Construct with alpha = eta * beta exactly.
    static RegParams coupled(double eta_, double beta_);
};

/// Sign vector with entries restricted to {-1, 0, +1}.
class SignPattern {
public:
    SignPattern() = default;
    explicit SignPattern(std::vector<int> entries);

    /// Componentwise sign of x (0 maps to 0).
    static SignPattern sign_of(const Vector& x);
    static SignPattern zeros(Eigen::Index n);

    int operator[](Eigen::Index i) const { return entries_[static_cast<std::size_t>(i)]; }
    void set(Eigen::Index i, int v);
    Eigen::Index size() const { return static_cast<Eigen::Index>(entries_.size()); }
    const std::vector<int>& entries() const { return entries_; }

    bool operator==(const SignPattern& other) const { return entries_ == other.entries_; }

private:
    std::vector<int> entries_;
};

/// Sorted, duplicate-free index set A subset of {0, ..., s-1}.
class ActiveSet {
public:
    ActiveSet() = default;
    explicit ActiveSet(std::vector<int> indices);

    /// Indices of the nonzero entries of x.
    static ActiveSet support_of(const Vector& x);

    const std::vector<int>& indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    bool contains(int i) const;

    bool operator==(const ActiveSet& other) const { return indices_ == other.indices_; }

private:
    std::vector<int> indices_;
};

/// Triple (A, x, theta) with matching signs on A and exact zeros off A.
/// Consistency is validated exactly on construction.
struct ConsistentTriple {
    ActiveSet active;
    Vector point;
    SignPattern signs;

    ConsistentTriple(ActiveSet active_, Vector point_, SignPattern signs_);

    /// True iff (active, x, theta) satisfies the consistency conditions.
    static bool is_consistent(const ActiveSet& active, const Vector& x, const SignPattern& theta);
};

enum class SolveStatus {
    Converged,
    MaxIterations,
    CycleDetected,
    NumericalFailure,
};

std::string to_string(SolveStatus status);

/// Outcome of a solver run.
struct SolveResult {
    Vector solution;
    int iterations = 0;
    ActiveSet active_set;   // support of `solution`
    double objective = 0.0;
    double kkt_residual_norm = 0.0;
    SolveStatus status = SolveStatus::NumericalFailure;

    bool converged() const { return status == SolveStatus::Converged; }
};

/// Certificate w for the source condition K^T w = x_dagger + eta * xi with
/// xi a subgradient of the l1 norm at x_dagger.
struct SourceCertificate {
    Vector w;       // length m
    Vector xi;      // length s, entries in [-1, 1], sign(x_dagger) on its support
    double w_norm;  // ||w||_2
};

} // namespace elastinet
