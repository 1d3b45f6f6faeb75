#pragma once

#include "ellkurt/data_matrix.hpp"
#include "ellkurt/linalg.hpp"

#include <Eigen/Dense>

namespace ellkurt {

/// Oracle estimator with known location and scatter:
/// (1 / (n p (p+2))) sum_i ((X_i - mu)^T Sigma^{-1} (X_i - mu))^2.
/// Sigma^{-1} is applied through a Cholesky solve.
class OracleEstimator {
 public:
  /// Throws SingularMatrix if sigma is not positive definite.
  OracleEstimator(Eigen::VectorXd mu, const SymmetricMatrix& sigma);

  double operator()(const DataMatrix& x) const;

 private:
  Eigen::VectorXd mu_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

double oracle_theta(const DataMatrix& x, const Eigen::VectorXd& mu, const SymmetricMatrix& sigma);

/// WL-style plug-in of the moment equation:
///   (s^2 of ||X_i - Xbar||^2 + tr^2 S) / (tr^2 S + 2 tr S^2),
/// S the sample covariance with divisor n-1, no bias correction. This is a
/// stand-in for the published WL estimator, not a reimplementation of it.
double wl_theta(const DataMatrix& x);

}  // namespace ellkurt
