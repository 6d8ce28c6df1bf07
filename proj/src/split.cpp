#include "oclust/split.hpp"

#include "oclust/gaussian.hpp"
#include "oclust/mixture.hpp"
#include "oclust/rng.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace oclust {

double aic(double log_likelihood, int k_params) {
    return 2.0 * k_params - 2.0 * log_likelihood;
}

double bic(double log_likelihood, int k_params, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("bic: n must be positive");
    return -2.0 * log_likelihood + k_params * std::log(static_cast<double>(n));
}

int count_params(int k, int d) {
    return k * (d + d * (d + 1) / 2) + (k - 1);
}

namespace {

double score(SplitCriterion crit, double ll, int k_params, std::int64_t n) {
    return crit == SplitCriterion::AIC ? aic(ll, k_params) : bic(ll, k_params, n);
}

// Empirical Gaussian of a point block, count/weight taken from `share` of the
// parent.
GaussianComponent empirical_component(const PointMatrix& points,
                                      const std::vector<int>& rows,
                                      const GaussianComponent& parent, double share) {
    const int d = static_cast<int>(points.cols());
    GaussianComponent c;
    c.weight = parent.weight * share;
    c.mean = Vector::Zero(d);
    for (int i : rows) c.mean += points.row(i).transpose();
    c.mean /= static_cast<double>(rows.size());
    Matrix scatter = Matrix::Zero(d, d);
    for (int i : rows) {
        const Vector diff = points.row(i).transpose() - c.mean;
        scatter += diff * diff.transpose();
    }
    c.cov = scatter / static_cast<double>(rows.size());
    c.cov = regularize_covariance(c.cov, default_regularization(c.cov));
    return c;
}

// Mixture log-likelihood of points under two fixed components with the given
// mixing fractions.
double two_component_loglik(const PointMatrix& points, const GaussianComponent& a,
                            const GaussianComponent& b, double pi_a) {
    double ll = 0.0;
    for (int i = 0; i < points.rows(); ++i) {
        const Vector x = points.row(i).transpose();
        const double la = std::log(pi_a) + gaussian_logpdf(x, a.mean, a.cov);
        const double lb = std::log1p(-pi_a) + gaussian_logpdf(x, b.mean, b.cov);
        const double hi = std::max(la, lb);
        ll += hi + std::log(std::exp(la - hi) + std::exp(lb - hi));
    }
    return ll;
}

void inherit_counts(std::array<GaussianComponent, 2>& children,
                    const GaussianComponent& parent, double share_a) {
    if (parent.count < 2) {  // not enough support to give both children a sample
        children[0].count = parent.count;
        children[1].count = 0;
        return;
    }
    std::int64_t ca = std::llround(parent.count * share_a);
    ca = std::clamp<std::int64_t>(ca, 1, parent.count - 1);
    children[0].count = ca;
    children[1].count = parent.count - ca;
}

}  // namespace

std::optional<std::array<GaussianComponent, 2>> principal_axis_split(
    const PointMatrix& points, const GaussianComponent& parent) {
    if (points.rows() < 2) return std::nullopt;
    Eigen::SelfAdjointEigenSolver<Matrix> es(parent.cov);
    if (es.info() != Eigen::Success) return std::nullopt;
    const Vector axis = es.eigenvectors().col(parent.dim() - 1);  // largest eigenvalue

    const Vector proj = points * axis;
    const double threshold = proj.mean();
    std::vector<int> lo, hi;
    for (int i = 0; i < points.rows(); ++i)
        (proj[i] < threshold ? lo : hi).push_back(i);
    if (lo.empty() || hi.empty()) return std::nullopt;

    const double share_lo = static_cast<double>(lo.size()) / points.rows();
    std::array<GaussianComponent, 2> children = {
        empirical_component(points, lo, parent, share_lo),
        empirical_component(points, hi, parent, 1.0 - share_lo)};
    inherit_counts(children, parent, share_lo);
    return children;
}

SplitDecision evaluate_split(const PointMatrix& points, const GaussianComponent& parent,
                             const SplitConfig& cfg, std::uint64_t seed,
                             SplitProposal proposal, std::int64_t n_score) {
    const int n = static_cast<int>(points.rows());
    const int d = static_cast<int>(points.cols());
    const int min_points = cfg.min_points > 0 ? cfg.min_points : 2 * (d + 1);

    SplitDecision dec;
    if (n < min_points) return dec;
    if (parent.count == 1) return dec;  // cannot apportion support to two children
    if (n_score < 1) n_score = n;

    // M1: single Gaussian over the points.
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    const GaussianComponent single = empirical_component(points, all, parent, 1.0);
    double ll1 = 0.0;
    for (int i = 0; i < n; ++i)
        ll1 += gaussian_logpdf(points.row(i).transpose(), single.mean, single.cov);
    dec.score_parent = score(cfg.criterion, ll1, count_params(1, d), n_score);

    // M2: two components, proposal-dependent.
    double ll2 = 0.0;
    std::array<GaussianComponent, 2> children;
    if (proposal == SplitProposal::GmmEm) {
        GmmFit fit;
        try {
            fit = fit_gmm_em(points, 2, seed);
        } catch (const NumericalError&) {
            return dec;
        }
        if (fit.degenerate || fit.components.size() != 2) return dec;
        ll2 = fit.log_likelihood;
        const double share_a = fit.components[0].weight;
        children = {fit.components[0], fit.components[1]};
        children[0].weight = parent.weight * share_a;
        children[1].weight = parent.weight * (1.0 - share_a);
        inherit_counts(children, parent, share_a);
    } else {
        auto sides = principal_axis_split(points, parent);
        if (!sides) return dec;
        children = *sides;
        const double pi_a = children[0].weight / parent.weight;
        ll2 = two_component_loglik(points, children[0], children[1], pi_a);
    }
    dec.score_split = score(cfg.criterion, ll2, count_params(2, d), n_score);

    if (dec.score_split < dec.score_parent) {
        dec.accepted = true;
        dec.children = std::move(children);
    }
    return dec;
}

int split_pass(ClusterModel& model, const PointMatrix& reps, const SplitConfig& cfg,
               std::uint64_t seed, Backbone backbone, SplitProposal proposal,
               std::int64_t history_count) {
    if (model.empty() || reps.rows() == 0) return 0;
    const std::int64_t n_score =
        (cfg.criterion == SplitCriterion::BIC && cfg.bic_full_history && history_count > 0)
            ? history_count
            : -1;

    int accepted_total = 0;
    for (int round = 0; round < cfg.max_rounds; ++round) {
        const Assignment assign = backbone == Backbone::DpCounts ? dp_assign(model, reps)
                                                                 : ml_assign(model, reps);
        std::vector<std::vector<int>> members(model.size());
        for (int i = 0; i < reps.rows(); ++i) members[assign.labels[i]].push_back(i);

        std::vector<GaussianComponent> next;
        next.reserve(model.components.size() + 4);
        int accepted_round = 0;
        for (int kidx = 0; kidx < model.size(); ++kidx) {
            const auto& parent = model.components[kidx];
            PointMatrix pts(members[kidx].size(), reps.cols());
            for (std::size_t r = 0; r < members[kidx].size(); ++r)
                pts.row(r) = reps.row(members[kidx][r]);

            SplitDecision dec = evaluate_split(
                pts, parent, cfg, mix_seed(seed, round, kidx), proposal,
                n_score > 0 ? n_score : static_cast<std::int64_t>(pts.rows()));
            dec.parent_index = kidx;
            if (dec.accepted) {
                dec.children[0].uid = model.fresh_uid();
                dec.children[1].uid = model.fresh_uid();
                next.push_back(std::move(dec.children[0]));
                next.push_back(std::move(dec.children[1]));
                ++accepted_round;
            } else {
                next.push_back(parent);
            }
        }
        model.components = std::move(next);
        accepted_total += accepted_round;
        if (accepted_round == 0) break;
    }
    model.renormalize_weights();
    return accepted_total;
}

}  // namespace oclust
