#include "oclust/distill.hpp"

#include "oclust/mixture.hpp"
#include "oclust/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace oclust {

namespace {

template <typename Scalar>
std::vector<double> k_smallest_sorted(std::vector<Scalar>& scratch, int k) {
    if (k >= static_cast<int>(scratch.size())) {
        std::sort(scratch.begin(), scratch.end());
        return {scratch.begin(), scratch.end()};
    }
    std::nth_element(scratch.begin(), scratch.begin() + k, scratch.end());
    std::sort(scratch.begin(), scratch.begin() + k);
    return {scratch.begin(), scratch.begin() + k};
}

}  // namespace

LocalDensity local_density(const PointMatrix& points, const Vector& query, int k_nn) {
    if (k_nn < 1) throw std::invalid_argument("local_density: k_nn must be positive");
    const int n = static_cast<int>(points.rows());
    LocalDensity out;
    if (n == 0) {
        out.short_neighborhood = true;
        return out;
    }
    std::vector<double> dist(n);
    for (int i = 0; i < n; ++i)
        dist[i] = (points.row(i).transpose() - query).cwiseAbs().sum();
    const int k = std::min(k_nn, n);
    out.short_neighborhood = n < k_nn;
    out.knn = k_smallest_sorted(dist, k);
    out.density = std::accumulate(out.knn.begin(), out.knn.end(), 0.0) / k;
    return out;
}

RepresentativeSet::RepresentativeSet(Config cfg) : cfg_(cfg) {
    if (cfg_.dim < 1 || cfg_.k_nn < 1 || cfg_.capacity < 1 || cfg_.resort_period < 1)
        throw std::invalid_argument("RepresentativeSet: invalid configuration");
    pool_.resize(0, cfg_.dim);
}

double RepresentativeSet::l1(std::int64_t i, std::int64_t j) const {
    return static_cast<double>((pool_.row(i) - pool_.row(j)).cwiseAbs().sum());
}

Vector RepresentativeSet::feature(std::int64_t i) const {
    return pool_.row(i).transpose().cast<double>();
}

PointMatrix RepresentativeSet::all_features() const {
    return pool_.topRows(size()).cast<double>();
}

void RepresentativeSet::rebuild_queue() {
    queue_.resize(entries_.size());
    std::iota(queue_.begin(), queue_.end(), 0);
    std::sort(queue_.begin(), queue_.end(), [&](int a, int b) {
        if (entries_[a].density != entries_[b].density)
            return entries_[a].density < entries_[b].density;
        return a < b;
    });
}

void RepresentativeSet::repair_queue(const std::vector<int>& touched) {
    std::vector<char> is_touched(entries_.size(), 0);
    for (int i : touched) is_touched[i] = 1;

    std::vector<int> kept;
    kept.reserve(queue_.size());
    for (int i : queue_)
        if (!is_touched[i]) kept.push_back(i);

    std::vector<int> inserted(touched);
    std::sort(inserted.begin(), inserted.end());
    inserted.erase(std::unique(inserted.begin(), inserted.end()), inserted.end());
    std::sort(inserted.begin(), inserted.end(), [&](int a, int b) {
        if (entries_[a].density != entries_[b].density)
            return entries_[a].density < entries_[b].density;
        return a < b;
    });

    queue_.clear();
    queue_.reserve(entries_.size());
    auto less = [&](int a, int b) {
        if (entries_[a].density != entries_[b].density)
            return entries_[a].density < entries_[b].density;
        return a < b;
    };
    std::merge(kept.begin(), kept.end(), inserted.begin(), inserted.end(),
               std::back_inserter(queue_), less);
}

void RepresentativeSet::update_queue(const PointMatrix& batch, int batch_index) {
    const std::int64_t b = batch.rows();
    ++batches_seen_;
    if (b == 0) return;
    if (batch.cols() != cfg_.dim)
        throw std::invalid_argument("update_queue: batch dimension mismatch");

    const std::int64_t n0 = size();
    const std::int64_t total = n0 + b;
    if (pool_.rows() < total) {
        const std::int64_t grown = std::max<std::int64_t>(total, 2 * pool_.rows());
        pool_.conservativeResize(grown, cfg_.dim);
    }
    pool_.block(n0, 0, b, cfg_.dim) = batch.cast<float>();
    entries_.resize(total);
    for (std::int64_t j = n0; j < total; ++j) entries_[j].batch_index = batch_index;

    // FIFO pool bound: eviction invalidates cached neighborhoods wholesale,
    // so everything is recomputed from scratch.
    if (cfg_.pool_cap > 0 && total > cfg_.pool_cap) {
        const std::int64_t evict = total - cfg_.pool_cap;
        const std::int64_t kept = total - evict;
        const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> tail =
            pool_.block(evict, 0, kept, cfg_.dim);
        pool_.topRows(kept) = tail;
        entries_.erase(entries_.begin(), entries_.begin() + evict);
        std::vector<float> scratch(kept);
        for (std::int64_t i = 0; i < kept; ++i) {
            for (std::int64_t r = 0; r < kept; ++r)
                scratch[r] = (pool_.row(r) - pool_.row(i)).cwiseAbs().sum();
            scratch[i] = std::numeric_limits<float>::infinity();
            auto& e = entries_[i];
            const int k = std::min<std::int64_t>(cfg_.k_nn, kept - 1);
            std::vector<float> copy = scratch;
            e.knn = k_smallest_sorted(copy, std::max(k, 0));
            e.short_neighborhood = kept - 1 < cfg_.k_nn;
            e.density = e.knn.empty()
                            ? 0.0
                            : std::accumulate(e.knn.begin(), e.knn.end(), 0.0) / e.knn.size();
        }
        rebuild_queue();
        return;
    }

    // One distance sweep per new point serves both its own kNN and the
    // vicinity test of every stored entry.
    std::vector<std::vector<double>> pending(n0);
    std::vector<float> dist(total);
    std::vector<float> scratch;
    for (std::int64_t j = n0; j < total; ++j) {
        for (std::int64_t i = 0; i < total; ++i)
            dist[i] = (pool_.row(i) - pool_.row(j)).cwiseAbs().sum();

        scratch.assign(dist.begin(), dist.end());
        scratch[j] = std::numeric_limits<float>::infinity();
        const int k = std::min<std::int64_t>(cfg_.k_nn, total - 1);
        auto& e = entries_[j];
        e.knn = k > 0 ? k_smallest_sorted(scratch, k) : std::vector<double>{};
        e.short_neighborhood = total - 1 < cfg_.k_nn;
        e.density = e.knn.empty()
                        ? 0.0
                        : std::accumulate(e.knn.begin(), e.knn.end(), 0.0) / e.knn.size();

        for (std::int64_t i = 0; i < n0; ++i) {
            const auto& old = entries_[i];
            const bool in_vicinity =
                old.knn.size() < static_cast<std::size_t>(cfg_.k_nn) ||
                static_cast<double>(dist[i]) < old.knn.back();
            if (in_vicinity) pending[i].push_back(dist[i]);
        }
    }

    std::vector<int> touched;
    touched.reserve(b + 64);
    for (std::int64_t j = n0; j < total; ++j) touched.push_back(static_cast<int>(j));
    for (std::int64_t i = 0; i < n0; ++i) {
        if (pending[i].empty()) continue;
        auto& e = entries_[i];
        std::vector<double> merged;
        merged.reserve(e.knn.size() + pending[i].size());
        std::sort(pending[i].begin(), pending[i].end());
        std::merge(e.knn.begin(), e.knn.end(), pending[i].begin(), pending[i].end(),
                   std::back_inserter(merged));
        const std::size_t k = std::min<std::size_t>(cfg_.k_nn, total - 1);
        if (merged.size() > k) merged.resize(k);
        e.knn = std::move(merged);
        e.short_neighborhood = total - 1 < cfg_.k_nn;
        e.density = e.knn.empty()
                        ? 0.0
                        : std::accumulate(e.knn.begin(), e.knn.end(), 0.0) / e.knn.size();
        touched.push_back(static_cast<int>(i));
    }

    if (batches_seen_ % cfg_.resort_period == 0)
        rebuild_queue();
    else
        repair_queue(touched);
}

PointMatrix RepresentativeSet::select_representatives(int n_select) const {
    if (n_select < 1) throw std::invalid_argument("select_representatives: n_select must be positive");
    const std::int64_t n = size();
    PointMatrix out(0, cfg_.dim);
    if (n == 0) return out;

    const std::int64_t m = n / n_select;
    if (m <= cfg_.eps_m) {
        out.resize(n, cfg_.dim);
        for (std::int64_t r = 0; r < n; ++r) out.row(r) = feature(queue_[r]).transpose();
        return out;
    }
    std::vector<std::int64_t> picks;
    for (std::int64_t pos = 1; pos <= n; pos += m) picks.push_back(pos - 1);
    out.resize(static_cast<std::int64_t>(picks.size()), cfg_.dim);
    for (std::size_t r = 0; r < picks.size(); ++r)
        out.row(r) = feature(queue_[picks[r]]).transpose();
    return out;
}

void RepresentativeSet::restore(
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> pool,
    std::vector<Entry> entries, std::vector<int> queue, int batches_seen) {
    if (pool.cols() != cfg_.dim || pool.rows() != static_cast<std::int64_t>(entries.size()) ||
        entries.size() != queue.size())
        throw std::invalid_argument("RepresentativeSet::restore: inconsistent state");
    pool_ = std::move(pool);
    entries_ = std::move(entries);
    queue_ = std::move(queue);
    batches_seen_ = batches_seen;
}

PointMatrix random_sample(const PointMatrix& points, int n_select, std::uint64_t seed) {
    const std::int64_t n = points.rows();
    if (n_select >= n) return points;
    Rng rng(seed);
    const auto idx = sample_without_replacement(rng, static_cast<std::size_t>(n),
                                                static_cast<std::size_t>(n_select));
    PointMatrix out(static_cast<std::int64_t>(idx.size()), points.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) out.row(r) = points.row(idx[r]);
    return out;
}

namespace {

void hk_partition(const PointMatrix& points, std::vector<int> member, std::int64_t leaf_cap,
                  std::uint64_t seed, int depth, std::vector<std::vector<int>>& leaves) {
    if (static_cast<std::int64_t>(member.size()) <= leaf_cap || member.size() < 2 ||
        depth > 60) {
        leaves.push_back(std::move(member));
        return;
    }
    PointMatrix sub(member.size(), points.cols());
    for (std::size_t r = 0; r < member.size(); ++r) sub.row(r) = points.row(member[r]);
    const KMeansResult km = kmeans(sub, 2, mix_seed(seed, depth, member.front()));
    std::vector<int> left, right;
    for (std::size_t r = 0; r < member.size(); ++r)
        (km.labels[r] == 0 ? left : right).push_back(member[r]);
    if (left.empty() || right.empty()) {
        leaves.push_back(std::move(member));
        return;
    }
    hk_partition(points, std::move(left), leaf_cap, seed, depth + 1, leaves);
    hk_partition(points, std::move(right), leaf_cap, seed, depth + 1, leaves);
}

}  // namespace

PointMatrix hkmeans_sample(const PointMatrix& points, int n_select, std::uint64_t seed) {
    const std::int64_t n = points.rows();
    if (n_select >= n) return points;
    if (n_select < 1) return PointMatrix(0, points.cols());

    const std::int64_t target_leaves = std::max(1, n_select / 2);
    const std::int64_t leaf_cap = (n + target_leaves - 1) / target_leaves;
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::vector<int>> leaves;
    hk_partition(points, std::move(all), leaf_cap, seed, 0, leaves);

    std::sort(leaves.begin(), leaves.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });

    // Per leaf: members ordered by distance to the leaf centroid, nearest and
    // farthest first (centre + boundary), the rest as padding material.
    std::vector<std::vector<int>> ordered(leaves.size());
    for (std::size_t l = 0; l < leaves.size(); ++l) {
        const auto& leaf = leaves[l];
        Vector centroid = Vector::Zero(points.cols());
        for (int i : leaf) centroid += points.row(i).transpose();
        centroid /= static_cast<double>(leaf.size());
        std::vector<std::pair<double, int>> by_dist;
        by_dist.reserve(leaf.size());
        for (int i : leaf)
            by_dist.emplace_back((points.row(i).transpose() - centroid).norm(), i);
        std::sort(by_dist.begin(), by_dist.end());
        auto& ord = ordered[l];
        ord.push_back(by_dist.front().second);
        if (by_dist.size() > 1) ord.push_back(by_dist.back().second);
        for (std::size_t r = 1; r + 1 < by_dist.size(); ++r) ord.push_back(by_dist[r].second);
    }

    std::vector<int> selected;
    selected.reserve(n_select);
    for (std::size_t round = 0; static_cast<int>(selected.size()) < n_select; ++round) {
        bool any = false;
        for (const auto& ord : ordered) {
            if (round < ord.size()) {
                selected.push_back(ord[round]);
                any = true;
                if (static_cast<int>(selected.size()) == n_select) break;
            }
        }
        if (!any) break;
    }

    PointMatrix out(static_cast<std::int64_t>(selected.size()), points.cols());
    for (std::size_t r = 0; r < selected.size(); ++r) out.row(r) = points.row(selected[r]);
    return out;
}

}  // namespace oclust
