#pragma once

#include "oclust/rng.hpp"
#include "oclust/types.hpp"

#include <cstdint>
#include <vector>

namespace oclust {

struct KMeansResult {
    PointMatrix centroids;     // k x d
    std::vector<int> labels;   // n
    double inertia = 0.0;      // sum of squared distances to assigned centroid
    int iterations = 0;
};

// k-means++ seeding (D^2 sampling) on the rows of `points`.
PointMatrix kmeans_pp_init(const PointMatrix& points, int k, Rng& rng);

// Lloyd iterations from a fixed initialization. Converges when the largest
// centroid shift drops below 1e-6 or after 100 iterations. Empty clusters are
// re-seeded from the point farthest from its assigned centroid.
KMeansResult lloyd(const PointMatrix& points, PointMatrix centroids);

KMeansResult kmeans(const PointMatrix& points, int k, std::uint64_t seed);

// Scans k in [1, k_max], scoring each fit with BIC under a per-cluster
// spherical Gaussian likelihood; returns the argmin.
int choose_batch_k(const PointMatrix& points, int k_max, std::uint64_t seed);

struct GmmFit {
    std::vector<GaussianComponent> components;
    double log_likelihood = 0.0;
    std::vector<double> ll_trace;   // log-likelihood after each EM iteration
    bool degenerate = false;        // collapsed to fewer components
};

// Full-covariance EM initialized from kmeans. Converges when the
// log-likelihood gain falls below 1e-6 or after 200 iterations. Covariances
// are re-regularized every M-step. A component whose weight drops below 1/n
// collapses the fit to k-1 components and sets `degenerate`.
GmmFit fit_gmm_em(const PointMatrix& points, int k, std::uint64_t seed,
                  double lambda_rel = 1e-6);

// Posterior assignment with DP-regularized prior weights
// w_k = count_k / (total_count + alpha), which penalizes low-support
// components. Never creates components.
Assignment dp_assign(const ClusterModel& model, const PointMatrix& points);

// Per-component likelihood argmax, ignoring weights and counts. Used by the
// plain-GMM comparison backbones.
Assignment ml_assign(const ClusterModel& model, const PointMatrix& points);

}  // namespace oclust
