#pragma once

#include "ellkurt/data_matrix.hpp"

#include <cstddef>

namespace ellkurt {

/// Fourth-order U-statistics over ordered distinct quadruples (i, j, k, l),
/// each normalized by 1 / (4 n (n-1) (n-2) (n-3)):
///
///   t1 = sum (||X_i - X_j||^2 - ||X_k - X_l||^2)^2
///   t2 = sum ||X_i - X_j||^2 ||X_k - X_l||^2
///   t3 = sum ((X_i - X_j)^T (X_k - X_l))^2
///
/// t1 - 2 t3, t2 and t3 are unbiased for var ||X - mu||^2, tr^2 Sigma and
/// tr Sigma^2.
struct UStats {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  std::size_t n = 0;
  std::size_t p = 0;
};

struct KurtosisEstimate {
  double theta_hat = 0.0;
  UStats ustats;
};

enum class UStatMethod {
  Fast,       ///< O(n^2 p) via the Gram matrix
  Reference,  ///< literal O(n^4 p) quadruple loop
};

/// Literal quadruple loop. Reference oracle only. Throws InsufficientSample if n < 4.
UStats ustats_bruteforce(const DataMatrix& x);

/// Same statistics from pairwise aggregates of the centered Gram matrix.
/// Deterministic: sums are compensated and taken in a fixed order.
UStats ustats_fast(const DataMatrix& x);

UStats compute_ustats(const DataMatrix& x, UStatMethod method = UStatMethod::Fast);

/// (t1 + t2 - 2 t3) / (t2 + 2 t3). Throws DegenerateData when the
/// denominator is below 1e-12 * max(|t1|, t2, 1).
KurtosisEstimate theta_hat(const UStats& u);

inline KurtosisEstimate estimate_kurtosis(const DataMatrix& x,
                                          UStatMethod method = UStatMethod::Fast) {
  return theta_hat(compute_ustats(x, method));
}

}  // namespace ellkurt
