#pragma once

#include "ellkurt/data_matrix.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace ellkurt {

/// Dense symmetric matrix. Entries (i,j) and (j,i) are bit-identical.
class SymmetricMatrix {
 public:
  /// Throws InvalidParameter if `m` is empty, non-square or not exactly symmetric.
  explicit SymmetricMatrix(Eigen::MatrixXd m);

  /// Builds from (m + m^T) / 2, for results of floating-point products.
  static SymmetricMatrix symmetrized(const Eigen::MatrixXd& m);
  static SymmetricMatrix identity(std::size_t dim);
  static SymmetricMatrix diagonal(const Eigen::VectorXd& d);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  struct Unchecked {};
  SymmetricMatrix(Eigen::MatrixXd m, Unchecked) : m_(std::move(m)) {}

  Eigen::MatrixXd m_;
};

/// tr M, tr M^2, tr M^3, tr M^4.
struct TracePowers {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  double t4 = 0.0;
};

/// AR(1) Toeplitz covariance with entries rho^|j-k|. Requires p >= 1, |rho| < 1.
SymmetricMatrix toeplitz_ar1(std::size_t p, double rho);

/// Symmetric square root via eigendecomposition. Eigenvalues in
/// [-1e-8 * ||M||, 0) are clamped to zero; anything more negative throws NotPsd.
SymmetricMatrix sqrt_psd(const SymmetricMatrix& m);

/// Computes tr M^3 = <M, M^2>_F and tr M^4 = ||M^2||_F^2 from a single product.
TracePowers trace_powers(const SymmetricMatrix& m);

/// Gram matrix of the rows of X: entry (i,j) = <X_i, X_j>.
SymmetricMatrix gram(const DataMatrix& x);

/// tr(A B) for symmetric A, B without forming the product.
double trace_product(const SymmetricMatrix& a, const SymmetricMatrix& b);

}  // namespace ellkurt
