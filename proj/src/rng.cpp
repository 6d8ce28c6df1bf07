#include "oclust/rng.hpp"

#include <numeric>

namespace oclust {

std::size_t weighted_index(Rng& rng, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += (w > 0.0 ? w : 0.0);
    if (!(total > 0.0)) return uniform_index(rng, weights.size());
    const double u = uniform_double(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += (weights[i] > 0.0 ? weights[i] : 0.0);
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

Vector normal_vector(Rng& rng, int d) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = normal_double(rng);
    return v;
}

std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k) {
    if (k > n) k = n;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + uniform_index(rng, n - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

}  // namespace oclust
