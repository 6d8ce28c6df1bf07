#include "oclust/gaussian.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>

namespace oclust {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kMaxConditionNumber = 1e14;
}  // namespace

double chi2_quantile_95(int dof) {
    return boost::math::quantile(boost::math::chi_squared_distribution<double>(dof), 0.95);
}

double mahalanobis(const Vector& mu1, const Matrix& cov1,
                   const Vector& mu2, const Matrix& cov2) {
    if (mu1.size() != mu2.size() || cov1.rows() != mu1.size() || cov2.rows() != mu2.size())
        throw std::invalid_argument("mahalanobis: dimension mismatch");
    const Matrix avg = 0.5 * (cov1 + cov2);
    Eigen::LLT<Matrix> llt(avg);
    if (llt.info() != Eigen::Success)
        throw NumericalError("mahalanobis: averaged covariance is not SPD");
    const Vector ldiag = llt.matrixL().toDenseMatrix().diagonal();
    const double dmax = ldiag.maxCoeff();
    const double dmin = ldiag.minCoeff();
    if (!(dmin > 0.0) || (dmax / dmin) * (dmax / dmin) > kMaxConditionNumber)
        throw NumericalError("mahalanobis: averaged covariance is near-singular");
    const Vector diff = mu1 - mu2;
    const Vector y = llt.matrixL().solve(diff);
    return std::sqrt(y.squaredNorm());
}

double log_ellipsoid_volume(const Matrix& cov) {
    const int d = static_cast<int>(cov.rows());
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalError("log_ellipsoid_volume: eigendecomposition failed");
    double half_log_det = 0.0;
    for (int i = 0; i < d; ++i) {
        const double lambda = es.eigenvalues()[i];
        if (!(lambda > 0.0))
            throw NumericalError("log_ellipsoid_volume: covariance is not SPD");
        half_log_det += 0.5 * std::log(lambda);
    }
    const double hd = 0.5 * d;
    return hd * std::log(M_PI) - std::lgamma(hd) + half_log_det +
           hd * std::log(chi2_quantile_95(d));
}

double ellipsoid_volume(const Matrix& cov) {
    return std::exp(log_ellipsoid_volume(cov));
}

GaussianComponent merged_moments(const GaussianComponent& c1, const GaussianComponent& c2) {
    if (c1.dim() != c2.dim())
        throw std::invalid_argument("merged_moments: dimension mismatch");
    if (!(c1.weight > 0.0) || !(c2.weight > 0.0))
        throw std::invalid_argument("merged_moments: non-positive weight");
    GaussianComponent m;
    m.weight = c1.weight + c2.weight;
    m.count = c1.count + c2.count;
    m.mean = (c1.weight * c1.mean + c2.weight * c2.mean) / m.weight;
    const Vector d1 = c1.mean - m.mean;
    const Vector d2 = c2.mean - m.mean;
    m.cov = (c1.weight * (c1.cov + d1 * d1.transpose()) +
             c2.weight * (c2.cov + d2 * d2.transpose())) /
            m.weight;
    return m;
}

double gaussian_logpdf(const Vector& x, const Vector& mu, const Matrix& cov) {
    if (x.size() != mu.size() || cov.rows() != x.size())
        throw std::invalid_argument("gaussian_logpdf: dimension mismatch");
    Eigen::LLT<Matrix> llt(cov);
    if (llt.info() != Eigen::Success)
        throw NumericalError("gaussian_logpdf: covariance is not SPD");
    const Vector ldiag = llt.matrixL().toDenseMatrix().diagonal();
    double log_det = 0.0;
    for (int i = 0; i < ldiag.size(); ++i) log_det += 2.0 * std::log(ldiag[i]);
    const Vector y = llt.matrixL().solve(x - mu);
    return -0.5 * (static_cast<double>(x.size()) * kLog2Pi + log_det + y.squaredNorm());
}

Matrix regularize_covariance(const Matrix& cov, double lambda_reg) {
    if (cov.rows() != cov.cols())
        throw std::invalid_argument("regularize_covariance: matrix not square");
    Matrix out = 0.5 * (cov + cov.transpose());
    out.diagonal().array() += lambda_reg;
    return out;
}

double default_regularization(const Matrix& cov, double rel) {
    const double scale = cov.trace() / static_cast<double>(cov.rows());
    return std::max(rel * scale, 1e-9);
}

}  // namespace oclust
