#include "oclust/types.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <sstream>

namespace oclust {

bool is_symmetric(const Matrix& m, double rel_tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

double ClusterModel::weight_sum() const {
    double s = 0.0;
    for (const auto& c : components) s += c.weight;
    return s;
}

void ClusterModel::renormalize_weights() {
    const double s = weight_sum();
    if (s <= 0.0) return;
    for (auto& c : components) c.weight /= s;
}

void ClusterModel::validate() const {
    std::int64_t counted = 0;
    double wsum = 0.0;
    for (std::size_t k = 0; k < components.size(); ++k) {
        const auto& c = components[k];
        std::ostringstream where;
        where << "component " << k << " (uid " << c.uid << ")";
        if (!(c.weight > 0.0)) throw std::logic_error(where.str() + ": non-positive weight");
        if (c.count < 1) throw std::logic_error(where.str() + ": count < 1");
        if (!c.mean.allFinite() || !c.cov.allFinite())
            throw std::logic_error(where.str() + ": non-finite moments");
        if (!is_symmetric(c.cov)) throw std::logic_error(where.str() + ": asymmetric covariance");
        Eigen::LLT<Matrix> llt(c.cov);
        if (llt.info() != Eigen::Success)
            throw std::logic_error(where.str() + ": covariance not SPD");
        counted += c.count;
        wsum += c.weight;
    }
    if (!components.empty()) {
        if (std::abs(wsum - 1.0) > 1e-9) throw std::logic_error("weights do not sum to 1");
        if (counted != total_count) throw std::logic_error("component counts do not sum to total_count");
    }
}

}  // namespace oclust
