#include "ellkurt/linalg.hpp"

#include "ellkurt/error.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace ellkurt {

SymmetricMatrix::SymmetricMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() < 1 || m_.rows() != m_.cols()) {
    throw Error(ErrorCode::InvalidParameter, "symmetric matrix must be square with dim >= 1");
  }
  const Eigen::Index d = m_.rows();
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = j + 1; i < d; ++i) {
      if (m_(i, j) != m_(j, i)) {
        throw Error(ErrorCode::InvalidParameter,
                    "matrix is not symmetric at (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
      }
    }
  }
}

SymmetricMatrix SymmetricMatrix::symmetrized(const Eigen::MatrixXd& m) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw Error(ErrorCode::InvalidParameter, "symmetric matrix must be square with dim >= 1");
  }
  Eigen::MatrixXd s = m;
  const Eigen::Index d = m.rows();
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = j + 1; i < d; ++i) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return SymmetricMatrix(std::move(s), Unchecked{});
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t dim) {
  if (dim < 1) throw Error(ErrorCode::InvalidParameter, "identity needs dim >= 1");
  const auto d = static_cast<Eigen::Index>(dim);
  return SymmetricMatrix(Eigen::MatrixXd::Identity(d, d), Unchecked{});
}

SymmetricMatrix SymmetricMatrix::diagonal(const Eigen::VectorXd& d) {
  if (d.size() < 1) throw Error(ErrorCode::InvalidParameter, "diagonal needs dim >= 1");
  return SymmetricMatrix(Eigen::MatrixXd(d.asDiagonal()), Unchecked{});
}

SymmetricMatrix toeplitz_ar1(std::size_t p, double rho) {
  if (p < 1) throw Error(ErrorCode::InvalidParameter, "toeplitz_ar1: p must be >= 1");
  if (!(std::abs(rho) < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "toeplitz_ar1: |rho| must be < 1");
  }
  const auto d = static_cast<Eigen::Index>(p);
  Eigen::VectorXd powers(d);
  powers(0) = 1.0;
  for (Eigen::Index k = 1; k < d; ++k) powers(k) = powers(k - 1) * rho;
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) m(i, j) = powers(std::abs(i - j));
  }
  return SymmetricMatrix(std::move(m));
}

SymmetricMatrix sqrt_psd(const SymmetricMatrix& m) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.matrix());
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPsd, "sqrt_psd: eigendecomposition failed");
  }
  const double norm = m.matrix().norm();
  const double floor = -1e-8 * norm;
  Eigen::VectorXd root(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < root.size(); ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda < floor) {
      throw Error(ErrorCode::NotPsd,
                  "sqrt_psd: eigenvalue " + std::to_string(lambda) + " below tolerance");
    }
    root(k) = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
  }
  const Eigen::MatrixXd& v = es.eigenvectors();
  return SymmetricMatrix::symmetrized(v * root.asDiagonal() * v.transpose());
}

TracePowers trace_powers(const SymmetricMatrix& m) {
  const Eigen::MatrixXd& a = m.matrix();
  TracePowers t;
  t.t1 = a.trace();
  t.t2 = a.squaredNorm();
  const Eigen::MatrixXd sq = a * a;
  t.t3 = (a.array() * sq.array()).sum();
  t.t4 = sq.squaredNorm();
  return t;
}

SymmetricMatrix gram(const DataMatrix& x) {
  const Eigen::MatrixXd& v = x.values();
  Eigen::MatrixXd g(v.rows(), v.rows());
  g.setZero();
  g.selfadjointView<Eigen::Lower>().rankUpdate(v);
  g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
  return SymmetricMatrix(std::move(g));
}

double trace_product(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "trace_product: dimension mismatch");
  }
  return (a.matrix().array() * b.matrix().array()).sum();
}

}  // namespace ellkurt
