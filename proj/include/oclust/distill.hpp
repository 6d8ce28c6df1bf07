#pragma once

#include "oclust/types.hpp"

#include <cstdint>
#include <vector>

namespace oclust {

struct LocalDensity {
    double density = 0.0;            // mean of knn
    std::vector<double> knn;         // sorted ascending, at most k_nn entries
    bool short_neighborhood = false; // fewer than k_nn candidates were available
};

// Average Manhattan distance from `query` to its k_nn nearest rows of
// `points`. The query is not expected to be among the rows; callers that hold
// it in the pool exclude it by index.
LocalDensity local_density(const PointMatrix& points, const Vector& query, int k_nn);

// Capacity-bounded, density-stratified sample store. Features are kept as
// float32 (the persisted pool format); all distances are computed from the
// stored values, so incremental updates reproduce a from-scratch pass
// exactly. The queue pi orders entries by ascending density; stride sampling
// over it yields the representatives.
class RepresentativeSet {
public:
    struct Entry {
        double density = 0.0;
        int batch_index = 0;
        std::vector<double> knn;   // sorted ascending
        bool short_neighborhood = false;
    };

    struct Config {
        int dim = 16;
        int k_nn = 10;
        int capacity = 4000;        // N_sub: selection cap, not a pool cap
        int eps_m = 1;              // minimum stride; at or below it, everything is returned
        int resort_period = 5;      // batches between full queue rebuilds
        std::int64_t pool_cap = 0;  // optional FIFO pool bound; 0 = unbounded
    };

    explicit RepresentativeSet(Config cfg);

    // Appends the batch to the pool, computes densities for the new points,
    // refreshes existing entries whose neighborhoods the batch may have
    // entered, and repairs the queue (full rebuild every resort_period
    // batches).
    void update_queue(const PointMatrix& batch, int batch_index);

    // Stride sampling over the density queue: m = floor(N / n_select); all N
    // entries when m <= eps_m, else queue positions 1, m+1, 2m+1, ... (1-based).
    PointMatrix select_representatives(int n_select) const;
    PointMatrix select_representatives() const { return select_representatives(cfg_.capacity); }

    std::int64_t size() const { return static_cast<std::int64_t>(entries_.size()); }
    const Config& config() const { return cfg_; }
    const Entry& entry(std::int64_t i) const { return entries_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& queue() const { return queue_; }

    Vector feature(std::int64_t i) const;   // stored (float32) values widened to double
    PointMatrix all_features() const;       // whole pool, n x d

    // Snapshot plumbing.
    const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>& pool() const {
        return pool_;
    }
    void restore(Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> pool,
                 std::vector<Entry> entries, std::vector<int> queue, int batches_seen);
    int batches_seen() const { return batches_seen_; }

private:
    void rebuild_queue();
    void repair_queue(const std::vector<int>& touched);
    double l1(std::int64_t i, std::int64_t j) const;

    Config cfg_;
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> pool_;
    std::vector<Entry> entries_;
    std::vector<int> queue_;   // entry indices, ascending (density, index)
    int batches_seen_ = 0;
};

// Uniform sample of n_select rows without replacement (all rows when
// n_select >= N); deterministic for a fixed seed.
PointMatrix random_sample(const PointMatrix& points, int n_select, std::uint64_t seed);

// Hierarchical 2-means tree down to leaves of size <= ceil(N / (n_select/2));
// each leaf contributes its centroid-nearest and centroid-farthest point,
// leaves visited in size-descending order, topped up to exactly
// min(n_select, N).
PointMatrix hkmeans_sample(const PointMatrix& points, int n_select, std::uint64_t seed);

}  // namespace oclust
