#pragma once

#include "oclust/types.hpp"

namespace oclust {

struct MergeConfig {
    double eps_d = 5.0;   // Mahalanobis gate; 3..5 spans the usual chi-square confidence range
    double eps_v = 1.1;   // merged-to-summed hyperellipsoid volume ratio cap
};

// Volume ratio V(merged) / (V(c1) + V(c2)), evaluated in log space.
double merge_volume_ratio(const GaussianComponent& c1, const GaussianComponent& c2);

// True iff the pair passes both the distance gate and the volume criterion.
bool mergeable(const GaussianComponent& c1, const GaussianComponent& c2,
               const MergeConfig& cfg);

// Greedily merges the closest mergeable pair, re-scans, and repeats until no
// pair qualifies. Weights are renormalized on exit. Returns the number of
// merges performed; the component count never increases.
int merge_pass(ClusterModel& model, const MergeConfig& cfg);

}  // namespace oclust
