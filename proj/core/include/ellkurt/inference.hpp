#pragma once

#include "ellkurt/data_matrix.hpp"
#include "ellkurt/ustat.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace ellkurt {

enum class CiMethod {
  Example1Delta,  ///< xi^2 a sum of p i.i.d. squares; Delta estimated from theta_hat
  KotzTau4,       ///< Kotz type, tau = 4
  StudentT,       ///< multivariate t; d estimated from theta_hat
  Laplace,        ///< multivariate Laplace, asymptotic variance 4
  GeneralCaseI,   ///< unknown family, light tails
  GeneralCaseII,  ///< unknown family, heavy tails (plug-in sixth/eighth moments)
};

std::string_view to_string(CiMethod m) noexcept;
/// Accepts the enum spelling or the short CLI names (example1, kotz, t, laplace, case1, case2).
std::optional<CiMethod> parse_ci_method(std::string_view name) noexcept;

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;
  CiMethod method = CiMethod::GeneralCaseI;
  double sigma_hat = 0.0;
  double theta_hat = 0.0;
  /// Set when a negative variance estimate was clamped to zero.
  bool degenerate_variance = false;

  double width() const noexcept { return upper - lower; }
  bool contains(double theta) const noexcept { return lower <= theta && theta <= upper; }
};

/// Plug-in moment ratios from the sample mean and sample covariance (divisor n-1).
struct PlugInMoments {
  double varrho_hat = 0.0;  ///< estimate of E xi^6
  double varphi_hat = 0.0;  ///< estimate of E xi^8
  double tau_hat = 0.0;
  double delta_hat = 0.0;
  std::optional<double> d_n;  ///< only when theta_hat > 1
};

/// Upper alpha quantile of N(0,1), i.e. z with P(Z > z) = alpha. Accurate to ~1e-15.
double normal_upper_quantile(double alpha);

/// (p + 2)(theta_hat - 1).
double delta_hat(double theta_hat, std::size_t p);
/// (p + 2) theta_hat - p.
double tau_hat(double theta_hat, std::size_t p);
/// d_n = (4 theta_hat - 2) / (theta_hat - 1). Throws UndefinedDof for theta_hat <= 1.
double dof_hat(double theta_hat);

/// 2 ((tau_hat - 2) / p + 2 ratio_hat)^2 with ratio_hat = T3 / T2.
double sigma2_case1(double tau_hat, double ratio_hat, std::size_t p);

PlugInMoments plugin_moments_case2(const DataMatrix& x, double theta_hat);
/// Same, with theta_hat from the fast U-statistics of x.
PlugInMoments plugin_moments_case2(const DataMatrix& x);

struct VarianceEstimate {
  double sigma2 = 0.0;
  bool clamped = false;
};

/// phi/p^4 - a^2 - 4 (rho/p^3) a + 4 a^3 with a = (p+2) theta_hat / p.
/// Negative values are clamped to zero and flagged.
VarianceEstimate sigma2_case2(double theta_hat, const PlugInMoments& pm, std::size_t p);

struct CiInputs {
  /// Required for GeneralCaseII; computed from `data` if absent.
  std::optional<PlugInMoments> plugin;
  const DataMatrix* data = nullptr;
};

/// theta_hat +/- half-width at level 1 - alpha.
ConfidenceInterval confidence_interval(const KurtosisEstimate& est, CiMethod method,
                                       double alpha, const CiInputs& aux = {});

}  // namespace ellkurt
