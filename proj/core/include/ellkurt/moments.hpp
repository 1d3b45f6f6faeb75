#pragma once

#include "ellkurt/linalg.hpp"
#include "ellkurt/models.hpp"

namespace ellkurt {

// Closed-form moments of quadratic forms in U ~ Uniform(S^{p-1}) and of
// X0 = xi Sigma^{1/2} U. They serve as ground truth for the Monte Carlo checks.

/// E U^T A U = tr A / p.
double sphere_moment_1(const SymmetricMatrix& a);
/// E (U^T A U)(U^T B U).
double sphere_moment_2(const SymmetricMatrix& a, const SymmetricMatrix& b);
/// E (U^T A U)(U^T B U)(U^T C U).
double sphere_moment_3(const SymmetricMatrix& a, const SymmetricMatrix& b,
                       const SymmetricMatrix& c);
/// E (U^T A U)^4.
double sphere_moment_4(const SymmetricMatrix& a);

/// Exact E xi^{2m}, m in 1..4. Throws MomentDoesNotExist (ScaledF with m >= d/2).
double xi_moment(const XiLaw& law, int m);

/// eta_m = E xi^{2m} / E Y^m with Y ~ chi^2_p.
struct EtaSequence {
  double eta1 = 0.0;
  double eta2 = 0.0;
  double eta3 = 0.0;
  double eta4 = 0.0;
};

EtaSequence eta_sequence(const XiLaw& law);

/// var(X0^T X0) = 2 theta tr Sigma^2 + (theta - 1) tr^2 Sigma.
double var_quadform(const SymmetricMatrix& sigma, const XiLaw& law);

enum class Centering {
  AtTrace,       ///< var((X0^T X0 - tr Sigma)^2)
  AtThetaTrace,  ///< var((X0^T X0 - theta tr Sigma)^2)
};

double var_centered_sq(const SymmetricMatrix& sigma, const XiLaw& law, Centering center);

}  // namespace ellkurt
