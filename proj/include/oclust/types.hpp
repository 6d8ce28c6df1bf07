#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oclust {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Sample sets are dense row-per-point matrices (n x d).
using PointMatrix = Eigen::MatrixXd;

// Thrown when a covariance fails an SPD check or a factorization degenerates.
// Callers that own the matrix are expected to regularize and retry.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool is_symmetric(const Matrix& m, double rel_tol = 1e-9);

// One mixture component: mixing weight, Gaussian moments and the number of
// stream samples it has absorbed. `uid` is a stable identity that survives
// model mutations; merge and split products receive fresh uids.
struct GaussianComponent {
    double weight = 0.0;
    Vector mean;
    Matrix cov;
    std::int64_t count = 0;
    std::int64_t uid = 0;

    int dim() const { return static_cast<int>(mean.size()); }
};

// The history-maintained cluster set. Weights sum to 1 after every public
// mutation; total_count tracks the observations the components stand for.
struct ClusterModel {
    std::vector<GaussianComponent> components;
    double alpha = 1.0;
    std::int64_t total_count = 0;
    std::int64_t next_uid = 0;

    int size() const { return static_cast<int>(components.size()); }
    bool empty() const { return components.empty(); }

    std::int64_t fresh_uid() { return next_uid++; }

    double weight_sum() const;
    void renormalize_weights();

    // Checks weight normalization, SPD covariances and count bookkeeping.
    // Throws std::logic_error with a description on violation.
    void validate() const;
};

// Hard labels plus soft responsibilities (rows sum to 1) for a point set.
struct Assignment {
    std::vector<int> labels;        // component indices into the model
    Matrix responsibilities;        // n x K
};

}  // namespace oclust
