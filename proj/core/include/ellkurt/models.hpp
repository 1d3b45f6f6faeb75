#pragma once

#include "ellkurt/data_matrix.hpp"
#include "ellkurt/linalg.hpp"
#include "ellkurt/random.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <variant>

namespace ellkurt {

// Radial laws for xi. The four simulation families are normalized so that
// E xi^2 = p by construction.

/// xi^2 ~ chi^2_p (multivariate normal).
struct ChiSquared {
  std::size_t p;
};
/// xi^2 = omega^2 / (p + 1), omega ~ Gamma(p, 1) (Kotz type, s = 1/2).
struct KotzHalf {
  std::size_t p;
};
/// xi^2 ~ p (d - 2) / d * F(p, d) (multivariate t with d degrees of freedom).
struct ScaledF {
  std::size_t p;
  int d;
};
/// xi^2 = R1 R2, R1 ~ Exp(1), R2 ~ chi^2_p (multivariate Laplace).
struct ExpChiProduct {
  std::size_t p;
};
/// xi is the constant `value`. Not normalized; used for deterministic checks.
struct PointMass {
  std::size_t p;
  double value;
};

using XiLaw = std::variant<ChiSquared, KotzHalf, ScaledF, ExpChiProduct, PointMass>;

/// Validates parameters; throws InvalidParameter (p = 0, ScaledF with d <= 8, ...).
void validate(const XiLaw& law);
std::size_t dimension(const XiLaw& law);
std::string describe(const XiLaw& law);

/// Generative description X = mu + xi * Sigma^{1/2} U.
class EllipticalSpec {
 public:
  EllipticalSpec(Eigen::VectorXd mu, SymmetricMatrix sigma, XiLaw xi);

  /// Zero mean, AR(1) Toeplitz scatter.
  static EllipticalSpec toeplitz(const XiLaw& xi, double rho);

  std::size_t p() const noexcept { return static_cast<std::size_t>(mu_.size()); }
  const Eigen::VectorXd& mu() const noexcept { return mu_; }
  const SymmetricMatrix& sigma() const noexcept { return sigma_; }
  const SymmetricMatrix& sigma_sqrt() const noexcept { return sigma_sqrt_; }
  const XiLaw& xi() const noexcept { return xi_; }

 private:
  Eigen::VectorXd mu_;
  SymmetricMatrix sigma_;
  SymmetricMatrix sigma_sqrt_;
  XiLaw xi_;
};

/// Uniform draw on the unit sphere S^{p-1} (normalized Gaussian vector).
Eigen::VectorXd sample_sphere(std::size_t p, Rng& rng);

/// One draw of xi >= 0.
double sample_xi(const XiLaw& law, Rng& rng);

/// n i.i.d. rows. For each row the sphere direction is drawn first, then xi.
DataMatrix sample_data(const EllipticalSpec& spec, std::size_t n, Rng& rng);

/// E xi^4 / (p (p + 2)).
double true_theta(const XiLaw& law);

}  // namespace ellkurt
