#include "oclust/mixture.hpp"

#include "oclust/gaussian.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>

namespace oclust {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// Squared Euclidean distances between the rows of two point sets, n x k.
Matrix pairwise_sqdist(const PointMatrix& x, const PointMatrix& c) {
    const Vector x2 = x.rowwise().squaredNorm();
    const Vector c2 = c.rowwise().squaredNorm();
    Matrix d = -2.0 * (x * c.transpose());
    d.colwise() += x2;
    d.rowwise() += c2.transpose();
    return d.cwiseMax(0.0);
}

int argmin_row(const Matrix& m, int row) {
    int best = 0;
    double bv = m(row, 0);
    for (int j = 1; j < m.cols(); ++j) {
        if (m(row, j) < bv) {
            bv = m(row, j);
            best = j;
        }
    }
    return best;
}

// Component log-densities for every point, n x K.
Matrix component_logpdf_matrix(const PointMatrix& points,
                               const std::vector<GaussianComponent>& comps) {
    const int n = static_cast<int>(points.rows());
    const int d = static_cast<int>(points.cols());
    const int K = static_cast<int>(comps.size());
    Matrix logp(n, K);
    for (int k = 0; k < K; ++k) {
        Eigen::LLT<Matrix> llt(comps[k].cov);
        if (llt.info() != Eigen::Success)
            throw NumericalError("component_logpdf_matrix: covariance is not SPD");
        double log_det = 0.0;
        const Vector ldiag = llt.matrixL().toDenseMatrix().diagonal();
        for (int i = 0; i < d; ++i) log_det += 2.0 * std::log(ldiag[i]);
        Matrix centered = points.transpose();
        centered.colwise() -= comps[k].mean;
        const Matrix y = llt.matrixL().solve(centered);  // d x n
        const double c0 = -0.5 * (d * kLog2Pi + log_det);
        logp.col(k) = (-0.5 * y.colwise().squaredNorm().transpose().array() + c0).matrix();
    }
    return logp;
}

// Row-wise softmax in log space; returns responsibilities and accumulates
// the total log-likelihood.
Matrix normalize_rows_logspace(Matrix logp, double* total_ll) {
    double ll = 0.0;
    for (int i = 0; i < logp.rows(); ++i) {
        const double mx = logp.row(i).maxCoeff();
        const double lse = mx + std::log((logp.row(i).array() - mx).exp().sum());
        logp.row(i) = (logp.row(i).array() - lse).exp();
        ll += lse;
    }
    if (total_ll) *total_ll = ll;
    return logp;
}

Assignment assign_with_log_prior(const ClusterModel& model, const PointMatrix& points,
                                 const Vector& log_prior) {
    Matrix logp = component_logpdf_matrix(points, model.components);
    logp.rowwise() += log_prior.transpose();
    Assignment out;
    out.responsibilities = normalize_rows_logspace(std::move(logp), nullptr);
    out.labels.resize(points.rows());
    for (int i = 0; i < points.rows(); ++i) {
        int best = 0;
        double bv = out.responsibilities(i, 0);
        for (int k = 1; k < out.responsibilities.cols(); ++k) {
            if (out.responsibilities(i, k) > bv) {
                bv = out.responsibilities(i, k);
                best = k;
            }
        }
        out.labels[i] = best;
    }
    return out;
}

}  // namespace

PointMatrix kmeans_pp_init(const PointMatrix& points, int k, Rng& rng) {
    const int n = static_cast<int>(points.rows());
    if (k < 1 || k > n) throw std::invalid_argument("kmeans_pp_init: need 1 <= k <= n");
    PointMatrix centroids(k, points.cols());
    centroids.row(0) = points.row(static_cast<int>(uniform_index(rng, n)));
    Vector d2 = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
    std::vector<double> w(n);
    for (int j = 1; j < k; ++j) {
        for (int i = 0; i < n; ++i) w[i] = d2[i];
        const int pick = static_cast<int>(weighted_index(rng, w));
        centroids.row(j) = points.row(pick);
        d2 = d2.cwiseMin((points.rowwise() - centroids.row(j)).rowwise().squaredNorm());
    }
    return centroids;
}

KMeansResult lloyd(const PointMatrix& points, PointMatrix centroids) {
    const int n = static_cast<int>(points.rows());
    const int d = static_cast<int>(points.cols());
    const int k = static_cast<int>(centroids.rows());

    KMeansResult res;
    res.labels.assign(n, 0);

    for (int iter = 0; iter < 100; ++iter) {
        res.iterations = iter + 1;
        const Matrix dist = pairwise_sqdist(points, centroids);
        for (int i = 0; i < n; ++i) res.labels[i] = argmin_row(dist, i);

        std::vector<int> counts(k, 0);
        for (int i = 0; i < n; ++i) ++counts[res.labels[i]];

        // Re-seed empty clusters from the points farthest from their centroid.
        std::vector<char> taken(n, 0);
        for (int j = 0; j < k; ++j) {
            if (counts[j] > 0) continue;
            int far_i = -1;
            double far_d = -1.0;
            for (int i = 0; i < n; ++i) {
                if (taken[i] || counts[res.labels[i]] <= 1) continue;
                const double di = dist(i, res.labels[i]);
                if (di > far_d) {
                    far_d = di;
                    far_i = i;
                }
            }
            if (far_i < 0) break;
            --counts[res.labels[far_i]];
            res.labels[far_i] = j;
            ++counts[j];
            taken[far_i] = 1;
        }

        PointMatrix sums = PointMatrix::Zero(k, d);
        for (int i = 0; i < n; ++i) sums.row(res.labels[i]) += points.row(i);
        double shift = 0.0;
        for (int j = 0; j < k; ++j) {
            if (counts[j] == 0) continue;
            const Vector nc = sums.row(j) / static_cast<double>(counts[j]);
            shift = std::max(shift, (nc.transpose() - centroids.row(j)).norm());
            centroids.row(j) = nc;
        }
        if (shift < 1e-6) break;
    }

    const Matrix dist = pairwise_sqdist(points, centroids);
    res.inertia = 0.0;
    for (int i = 0; i < n; ++i) {
        res.labels[i] = argmin_row(dist, i);
        res.inertia += dist(i, res.labels[i]);
    }
    res.centroids = std::move(centroids);
    return res;
}

KMeansResult kmeans(const PointMatrix& points, int k, std::uint64_t seed) {
    Rng rng(seed);
    return lloyd(points, kmeans_pp_init(points, k, rng));
}

int choose_batch_k(const PointMatrix& points, int k_max, std::uint64_t seed) {
    const int n = static_cast<int>(points.rows());
    const int d = static_cast<int>(points.cols());
    if (n < 2) throw std::invalid_argument("choose_batch_k: need at least 2 points");

    const Vector global_mean = points.colwise().mean();
    const double global_msd =
        (points.rowwise() - global_mean.transpose()).squaredNorm() / (double(n) * d);
    const double var_floor = std::max(1e-9 * global_msd, 1e-30);

    int best_k = 1;
    double best_bic = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= std::min(k_max, n); ++k) {
        const KMeansResult km = kmeans(points, k, mix_seed(seed, k));
        std::vector<double> sse(k, 0.0);
        std::vector<int> cnt(k, 0);
        for (int i = 0; i < n; ++i) {
            sse[km.labels[i]] +=
                (points.row(i) - km.centroids.row(km.labels[i])).squaredNorm();
            ++cnt[km.labels[i]];
        }
        double ll = 0.0;
        for (int j = 0; j < k; ++j) {
            if (cnt[j] == 0) continue;
            const double var = std::max(sse[j] / (double(cnt[j]) * d), var_floor);
            ll += cnt[j] * std::log(double(cnt[j]) / n) -
                  0.5 * cnt[j] * d * (std::log(2.0 * M_PI * var)) - 0.5 * sse[j] / var;
        }
        const int params = k * (d + 1) + (k - 1);
        const double bic = -2.0 * ll + params * std::log(double(n));
        if (bic < best_bic) {
            best_bic = bic;
            best_k = k;
        }
    }
    return best_k;
}

GmmFit fit_gmm_em(const PointMatrix& points, int k, std::uint64_t seed, double lambda_rel) {
    const int n = static_cast<int>(points.rows());
    const int d = static_cast<int>(points.cols());
    if (k < 1) throw std::invalid_argument("fit_gmm_em: k must be positive");
    if (n < k) throw std::invalid_argument("fit_gmm_em: fewer points than components");

    const KMeansResult km = kmeans(points, k, seed);

    // Clusters too small to estimate a covariance fall back to this scale.
    const Vector global_mean = points.colwise().mean();
    const double global_msd = std::max(
        (points.rowwise() - global_mean.transpose()).squaredNorm() / (double(n) * d), 1e-12);

    GmmFit fit;
    fit.components.resize(k);
    for (int j = 0; j < k; ++j) {
        std::vector<int> members;
        for (int i = 0; i < n; ++i)
            if (km.labels[i] == j) members.push_back(i);
        auto& c = fit.components[j];
        c.weight = double(members.size()) / n;
        c.mean = km.centroids.row(j);
        Matrix scatter = Matrix::Zero(d, d);
        for (int i : members) {
            const Vector diff = points.row(i).transpose() - c.mean;
            scatter += diff * diff.transpose();
        }
        c.cov = scatter / std::max<std::size_t>(members.size(), 1);
        const double jitter = std::max(default_regularization(c.cov, lambda_rel),
                                       members.size() <= 1 ? 1e-2 * global_msd : 0.0);
        c.cov = regularize_covariance(c.cov, jitter);
        c.count = static_cast<std::int64_t>(members.size());
    }

    double prev_ll = -std::numeric_limits<double>::infinity();
    Matrix resp;
    for (int iter = 0; iter < 200; ++iter) {
        Matrix logp = component_logpdf_matrix(points, fit.components);
        for (int j = 0; j < k; ++j)
            logp.col(j).array() += std::log(fit.components[j].weight);
        double ll = 0.0;
        resp = normalize_rows_logspace(std::move(logp), &ll);
        fit.ll_trace.push_back(ll);
        fit.log_likelihood = ll;
        if (ll - prev_ll < 1e-6 && iter > 0) break;
        prev_ll = ll;

        const Vector nk = resp.colwise().sum();
        for (int j = 0; j < k; ++j) {
            if (nk[j] < 1.0 - 1e-12 && k > 1) {
                // Component starved below one point of support: refit smaller.
                GmmFit smaller = fit_gmm_em(points, k - 1, seed, lambda_rel);
                smaller.degenerate = true;
                return smaller;
            }
        }
        for (int j = 0; j < k; ++j) {
            auto& c = fit.components[j];
            c.weight = nk[j] / n;
            c.mean = (resp.col(j).transpose() * points).transpose() / nk[j];
            Matrix centered = points.rowwise() - c.mean.transpose();
            centered.array().colwise() *= resp.col(j).array().sqrt();
            c.cov = centered.transpose() * centered / nk[j];
            c.cov = regularize_covariance(c.cov, default_regularization(c.cov, lambda_rel));
        }
    }

    // Integer support counts: proportional to weights, adjusted to sum to n.
    std::int64_t assigned = 0;
    int largest = 0;
    for (int j = 0; j < k; ++j) {
        fit.components[j].count =
            std::max<std::int64_t>(1, std::llround(fit.components[j].weight * n));
        assigned += fit.components[j].count;
        if (fit.components[j].weight > fit.components[largest].weight) largest = j;
    }
    fit.components[largest].count += n - assigned;
    return fit;
}

Assignment dp_assign(const ClusterModel& model, const PointMatrix& points) {
    if (model.empty()) throw std::invalid_argument("dp_assign: empty model");
    const int K = model.size();
    Vector log_prior(K);
    const double denom = std::log(double(model.total_count) + model.alpha);
    for (int k = 0; k < K; ++k)
        log_prior[k] = std::log(double(std::max<std::int64_t>(model.components[k].count, 1))) - denom;
    return assign_with_log_prior(model, points, log_prior);
}

Assignment ml_assign(const ClusterModel& model, const PointMatrix& points) {
    if (model.empty()) throw std::invalid_argument("ml_assign: empty model");
    return assign_with_log_prior(model, points, Vector::Zero(model.size()));
}

}  // namespace oclust
