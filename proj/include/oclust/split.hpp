#pragma once

#include "oclust/types.hpp"

#include <array>
#include <cstdint>
#include <optional>

namespace oclust {

enum class SplitCriterion { AIC, BIC };

// How split candidates are proposed: a 2-component EM fit (default), or a
// bipartition along the parent's leading principal axis (baseline).
enum class SplitProposal { GmmEm, PrincipalAxis };

// Which prior enters assignments inside split rounds: DP count regularization
// or plain per-component likelihood.
enum class Backbone { DpCounts, MaxLikelihood };

struct SplitConfig {
    SplitCriterion criterion = SplitCriterion::AIC;
    int min_points = 0;        // 0 -> 2 * (d + 1)
    int max_rounds = 10;
    bool bic_full_history = false;  // score BIC with the full history count (ablation)
};

double aic(double log_likelihood, int k_params);
double bic(double log_likelihood, int k_params, std::int64_t n);

// Parameter count of a k-component full-covariance Gaussian mixture in d
// dimensions: k * (d + d(d+1)/2) + (k - 1).
int count_params(int k, int d);

struct SplitDecision {
    bool accepted = false;
    int parent_index = -1;
    std::array<GaussianComponent, 2> children{};
    double score_parent = 0.0;
    double score_split = 0.0;
};

// Compares a single Gaussian against a 2-component mixture on `points` under
// cfg.criterion; accepts iff the split scores strictly lower. Children carry
// the parent's weight and count proportionally to the fitted mixing weights.
// Fewer than min_points points, or a degenerate 2-component fit, rejects
// without scoring. `n_score` overrides the BIC sample count (-1: use
// points.rows()).
SplitDecision evaluate_split(const PointMatrix& points, const GaussianComponent& parent,
                             const SplitConfig& cfg, std::uint64_t seed,
                             SplitProposal proposal = SplitProposal::GmmEm,
                             std::int64_t n_score = -1);

// Bipartition along the parent covariance's leading eigenvector, thresholded
// at the projected sample mean; one empirical Gaussian per side. Empty side
// -> nullopt.
std::optional<std::array<GaussianComponent, 2>> principal_axis_split(
    const PointMatrix& points, const GaussianComponent& parent);

// Tests every component against its assigned representatives and replaces
// accepted parents with their children; children re-enter the queue on the
// next round, up to cfg.max_rounds. Returns the number of accepted splits.
int split_pass(ClusterModel& model, const PointMatrix& reps, const SplitConfig& cfg,
               std::uint64_t seed, Backbone backbone = Backbone::DpCounts,
               SplitProposal proposal = SplitProposal::GmmEm,
               std::int64_t history_count = -1);

}  // namespace oclust
