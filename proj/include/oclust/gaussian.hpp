#pragma once

#include "oclust/types.hpp"

namespace oclust {

// 95% quantile of the chi-squared distribution with `dof` degrees of freedom.
double chi2_quantile_95(int dof);

// Mahalanobis distance between two Gaussians under the averaged covariance:
// sqrt((mu1 - mu2)^T S^-1 (mu1 - mu2)) with S = (cov1 + cov2) / 2.
// Throws NumericalError when S is not SPD or is numerically near-singular.
double mahalanobis(const Vector& mu1, const Matrix& cov1,
                   const Vector& mu2, const Matrix& cov2);

// Log volume of the 95% confidence hyperellipsoid of a covariance:
// log V = (d/2) log pi - log Gamma(d/2) + sum_i log sqrt(lambda_i)
//         + (d/2) log chi2_95(d).
// Evaluated in log space so d = 16 stays in range.
double log_ellipsoid_volume(const Matrix& cov);
double ellipsoid_volume(const Matrix& cov);

// Moment-preserving merge of two weighted components. The merged covariance
// includes the between-mean spread terms, so the result equals the pooled
// population moments exactly.
GaussianComponent merged_moments(const GaussianComponent& c1, const GaussianComponent& c2);

// Exact multivariate normal log-density via Cholesky factorization.
double gaussian_logpdf(const Vector& x, const Vector& mu, const Matrix& cov);

// Symmetrized cov + lambda_reg * I.
Matrix regularize_covariance(const Matrix& cov, double lambda_reg);

// Scale-relative jitter: max(rel * trace(cov)/d, 1e-9).
double default_regularization(const Matrix& cov, double rel = 1e-6);

}  // namespace oclust
