#include "ellkurt/ustat.hpp"

#include "ellkurt/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace ellkurt {

namespace {

void require_four_rows(const DataMatrix& x) {
  if (x.n() < 4) {
    throw Error(ErrorCode::InsufficientSample,
                "U-statistics need n >= 4 observations, got " + std::to_string(x.n()));
  }
}

double quadruple_norm(std::size_t n) {
  const double nd = static_cast<double>(n);
  return 4.0 * nd * (nd - 1.0) * (nd - 2.0) * (nd - 3.0);
}

// Neumaier variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

UStats ustats_bruteforce(const DataMatrix& x) {
  require_four_rows(x);
  const std::size_t n = x.n();
  const Eigen::MatrixXd& v = x.values();
  CompensatedSum s1, s2, s3;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Eigen::RowVectorXd a = v.row(static_cast<Eigen::Index>(i)) - v.row(static_cast<Eigen::Index>(j));
      const double da = a.squaredNorm();
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        for (std::size_t l = 0; l < n; ++l) {
          if (l == i || l == j || l == k) continue;
          const Eigen::RowVectorXd b =
              v.row(static_cast<Eigen::Index>(k)) - v.row(static_cast<Eigen::Index>(l));
          const double db = b.squaredNorm();
          const double ip = a.dot(b);
          s1.add((da - db) * (da - db));
          s2.add(da * db);
          s3.add(ip * ip);
        }
      }
    }
  }
  const double norm = quadruple_norm(n);
  return UStats{s1.value() / norm, s2.value() / norm, s3.value() / norm, n, x.p()};
}

// With D_ij = ||X_i - X_j||^2 (zero diagonal), A = sum D, r_i = sum_j D_ij,
// Q = sum D^2, and H the Gram matrix with its diagonal removed (h_i row sums,
// F = ||H||_F^2), inclusion-exclusion over index coincidences gives, for the
// sums over ordered distinct quadruples:
//
//   S2 = A^2 - 4 sum r_i^2 + 2 Q
//   S1 = 2 (n-2)(n-3) Q - 2 S2
//   S3 = 4 (n-2)(n-3) F - 8 (n-3)(sum h_i^2 - F)
//        + 4 ((sum H)^2 - 4 sum h_i^2 + 2 F)
UStats ustats_fast(const DataMatrix& x) {
  require_four_rows(x);
  const std::size_t n = x.n();
  const Eigen::MatrixXd& v = x.values();
  const auto ni = static_cast<Eigen::Index>(n);

  // Column mean as x_0 + mean(X_i - x_0): identical rows center to exact zero.
  const Eigen::RowVectorXd anchor = v.row(0);
  const Eigen::MatrixXd shifted = v.rowwise() - anchor;
  const Eigen::RowVectorXd mean = anchor + shifted.colwise().mean();
  const Eigen::MatrixXd centered = v.rowwise() - mean;

  Eigen::MatrixXd g(ni, ni);
  g.noalias() = centered * centered.transpose();
  const Eigen::VectorXd diag = g.diagonal();

  CompensatedSum total_d, total_d2, total_h, total_h2, sum_r2, sum_h2;
  for (Eigen::Index i = 0; i < ni; ++i) {
    CompensatedSum r, h;
    for (Eigen::Index j = 0; j < ni; ++j) {
      if (j == i) continue;
      const double gij = 0.5 * (g(i, j) + g(j, i));
      const double dij = std::max(0.0, diag(i) + diag(j) - 2.0 * gij);
      r.add(dij);
      total_d2.add(dij * dij);
      h.add(gij);
      total_h2.add(gij * gij);
    }
    const double ri = r.value();
    const double hi = h.value();
    total_d.add(ri);
    total_h.add(hi);
    sum_r2.add(ri * ri);
    sum_h2.add(hi * hi);
  }

  const double nd = static_cast<double>(n);
  const double a = total_d.value();
  const double q = total_d2.value();
  const double f = total_h2.value();
  const double hs = total_h.value();
  const double r2 = sum_r2.value();
  const double h2 = sum_h2.value();

  const double s2 = a * a - 4.0 * r2 + 2.0 * q;
  const double s1 = 2.0 * (nd - 2.0) * (nd - 3.0) * q - 2.0 * s2;
  const double disjoint = hs * hs - 4.0 * h2 + 2.0 * f;
  const double s3 = 4.0 * (nd - 2.0) * (nd - 3.0) * f - 8.0 * (nd - 3.0) * (h2 - f) + 4.0 * disjoint;

  const double norm = quadruple_norm(n);
  return UStats{s1 / norm, s2 / norm, s3 / norm, n, x.p()};
}

UStats compute_ustats(const DataMatrix& x, UStatMethod method) {
  return method == UStatMethod::Reference ? ustats_bruteforce(x) : ustats_fast(x);
}

KurtosisEstimate theta_hat(const UStats& u) {
  const double denom = u.t2 + 2.0 * u.t3;
  const double tol = 1e-12 * std::max({std::abs(u.t1), u.t2, 1.0});
  if (!(denom > tol)) {
    throw Error(ErrorCode::DegenerateData,
                "theta_hat: T2 + 2 T3 is below tolerance (coincident observations?)");
  }
  return KurtosisEstimate{(u.t1 + u.t2 - 2.0 * u.t3) / denom, u};
}

}  // namespace ellkurt
