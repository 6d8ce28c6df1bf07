#include "oclust/merge.hpp"

#include "oclust/gaussian.hpp"

#include <cmath>
#include <limits>

namespace oclust {

double merge_volume_ratio(const GaussianComponent& c1, const GaussianComponent& c2) {
    const GaussianComponent m = merged_moments(c1, c2);
    const double lv1 = log_ellipsoid_volume(c1.cov);
    const double lv2 = log_ellipsoid_volume(c2.cov);
    const double hi = std::max(lv1, lv2);
    const double log_sum = hi + std::log(std::exp(lv1 - hi) + std::exp(lv2 - hi));
    return std::exp(log_ellipsoid_volume(m.cov) - log_sum);
}

bool mergeable(const GaussianComponent& c1, const GaussianComponent& c2,
               const MergeConfig& cfg) {
    if (mahalanobis(c1.mean, c1.cov, c2.mean, c2.cov) >= cfg.eps_d) return false;
    return merge_volume_ratio(c1, c2) <= cfg.eps_v;
}

namespace {

// Distance for the greedy ordering; infinity when the pair does not qualify
// or is numerically degenerate (degenerate pairs are left unmerged).
double merge_priority(const GaussianComponent& a, const GaussianComponent& b,
                      const MergeConfig& cfg) {
    try {
        const double dist = mahalanobis(a.mean, a.cov, b.mean, b.cov);
        if (dist >= cfg.eps_d) return std::numeric_limits<double>::infinity();
        if (merge_volume_ratio(a, b) > cfg.eps_v)
            return std::numeric_limits<double>::infinity();
        return dist;
    } catch (const NumericalError&) {
        GaussianComponent ra = a, rb = b;
        ra.cov = regularize_covariance(ra.cov, default_regularization(ra.cov));
        rb.cov = regularize_covariance(rb.cov, default_regularization(rb.cov));
        try {
            const double dist = mahalanobis(ra.mean, ra.cov, rb.mean, rb.cov);
            if (dist >= cfg.eps_d) return std::numeric_limits<double>::infinity();
            if (merge_volume_ratio(ra, rb) > cfg.eps_v)
                return std::numeric_limits<double>::infinity();
            return dist;
        } catch (const NumericalError&) {
            return std::numeric_limits<double>::infinity();
        }
    }
}

}  // namespace

int merge_pass(ClusterModel& model, const MergeConfig& cfg) {
    int merges = 0;
    while (model.size() >= 2) {
        const int k = model.size();
        int bi = -1, bj = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                const double p = merge_priority(model.components[i], model.components[j], cfg);
                if (p < best) {
                    best = p;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi < 0) break;
        GaussianComponent merged = merged_moments(model.components[bi], model.components[bj]);
        merged.uid = model.fresh_uid();
        model.components.erase(model.components.begin() + bj);
        model.components.erase(model.components.begin() + bi);
        model.components.push_back(std::move(merged));
        ++merges;
    }
    model.renormalize_weights();
    return merges;
}

}  // namespace oclust
