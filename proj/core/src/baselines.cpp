#include "ellkurt/baselines.hpp"

#include "ellkurt/error.hpp"

#include <cmath>
#include <utility>

namespace ellkurt {

OracleEstimator::OracleEstimator(Eigen::VectorXd mu, const SymmetricMatrix& sigma)
    : mu_(std::move(mu)), llt_(sigma.matrix()) {
  if (static_cast<std::size_t>(mu_.size()) != sigma.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "oracle: mu and sigma disagree on p");
  }
  if (llt_.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularMatrix, "oracle: sigma is not positive definite");
  }
  const Eigen::VectorXd pivots = Eigen::MatrixXd(llt_.matrixL()).diagonal();
  if (!(pivots.minCoeff() > 1e-12 * pivots.maxCoeff())) {
    throw Error(ErrorCode::SingularMatrix, "oracle: sigma is numerically singular");
  }
}

double OracleEstimator::operator()(const DataMatrix& x) const {
  if (x.p() != static_cast<std::size_t>(mu_.size())) {
    throw Error(ErrorCode::DimensionMismatch, "oracle: data and mu disagree on p");
  }
  // Cholesky Sigma = L L^T, so (x - mu)^T Sigma^{-1} (x - mu) = ||L^{-1}(x - mu)||^2.
  Eigen::MatrixXd centered = (x.values().rowwise() - mu_.transpose()).transpose();
  llt_.matrixL().solveInPlace(centered);
  const double p = static_cast<double>(x.p());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < centered.cols(); ++i) {
    const double q = centered.col(i).squaredNorm();
    acc += q * q;
  }
  return acc / (static_cast<double>(x.n()) * p * (p + 2.0));
}

double oracle_theta(const DataMatrix& x, const Eigen::VectorXd& mu, const SymmetricMatrix& sigma) {
  return OracleEstimator(mu, sigma)(x);
}

double wl_theta(const DataMatrix& x) {
  const std::size_t n = x.n();
  if (n < 2) throw Error(ErrorCode::InsufficientSample, "wl_theta needs n >= 2");
  const Eigen::MatrixXd& v = x.values();
  const Eigen::RowVectorXd anchor = v.row(0);
  const Eigen::RowVectorXd mean = anchor + (v.rowwise() - anchor).colwise().mean();
  const Eigen::MatrixXd centered = v.rowwise() - mean;
  const double denom = static_cast<double>(n) - 1.0;

  const Eigen::VectorXd sq = centered.rowwise().squaredNorm();
  const double sq_mean = sq.mean();
  const double sq_var = (sq.array() - sq_mean).square().sum() / denom;

  // tr S = sum ||Xc_i||^2 / (n-1); tr S^2 = ||Xc Xc^T||_F^2 / (n-1)^2.
  const double tr = sq.sum() / denom;
  const Eigen::MatrixXd k = centered * centered.transpose();
  const double tr2 = k.squaredNorm() / (denom * denom);

  const double bottom = tr * tr + 2.0 * tr2;
  if (!(bottom > 0.0)) throw Error(ErrorCode::DegenerateData, "wl_theta: sample covariance is zero");
  return (sq_var + tr * tr) / bottom;
}

}  // namespace ellkurt
