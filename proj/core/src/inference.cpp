#include "ellkurt/inference.hpp"

#include "ellkurt/error.hpp"
#include "ellkurt/linalg.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace ellkurt {

namespace {

struct MethodName {
  CiMethod method;
  std::string_view canonical;
  std::string_view short_name;
};

constexpr std::array<MethodName, 6> kMethodNames{{
    {CiMethod::Example1Delta, "example1_delta", "example1"},
    {CiMethod::KotzTau4, "kotz_tau4", "kotz"},
    {CiMethod::StudentT, "student_t", "t"},
    {CiMethod::Laplace, "laplace", "laplace"},
    {CiMethod::GeneralCaseI, "general_case_i", "case1"},
    {CiMethod::GeneralCaseII, "general_case_ii", "case2"},
}};

// Acklam's rational approximation of the lower-tail normal quantile.
double acklam_quantile(double q) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double low = 0.02425;
  if (q < low) {
    const double r = std::sqrt(-2.0 * std::log(q));
    return (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
           ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  }
  if (q > 1.0 - low) {
    const double r = std::sqrt(-2.0 * std::log1p(-q));
    return -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
           ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  }
  const double s = q - 0.5;
  const double r = s * s;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * s /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double ratio_t3_t2(const UStats& u) {
  if (!(u.t2 > 0.0)) throw Error(ErrorCode::DegenerateData, "T2 must be positive for T3/T2");
  return u.t3 / u.t2;
}

double student_t_sigma2(double d) {
  const double dm4 = d - 4.0;
  return 8.0 * (d - 2.0) * (d - 2.0) * (d + 4.0) / (dm4 * dm4 * dm4 * (d - 6.0) * (d - 8.0));
}

}  // namespace

std::string_view to_string(CiMethod m) noexcept {
  for (const auto& e : kMethodNames) {
    if (e.method == m) return e.canonical;
  }
  return "unknown";
}

std::optional<CiMethod> parse_ci_method(std::string_view name) noexcept {
  for (const auto& e : kMethodNames) {
    if (name == e.canonical || name == e.short_name) return e.method;
  }
  return std::nullopt;
}

double normal_upper_quantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "normal quantile: alpha must be in (0, 1)");
  }
  // Solve P(Z > z) = alpha, i.e. the lower quantile at 1 - alpha, then one
  // Halley step on erfc to reach full double precision.
  double z = acklam_quantile(1.0 - alpha);
  const double e = 0.5 * std::erfc(z / std::sqrt(2.0)) - alpha;
  const double u = -e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * z * z);
  z = z - u / (1.0 + 0.5 * z * u);
  return z;
}

double delta_hat(double theta_hat, std::size_t p) {
  return (static_cast<double>(p) + 2.0) * (theta_hat - 1.0);
}

double tau_hat(double theta_hat, std::size_t p) {
  const double pd = static_cast<double>(p);
  return (pd + 2.0) * theta_hat - pd;
}

double dof_hat(double theta_hat) {
  if (!(theta_hat > 1.0)) {
    throw Error(ErrorCode::UndefinedDof, "dof_hat: theta_hat must exceed 1");
  }
  return (4.0 * theta_hat - 2.0) / (theta_hat - 1.0);
}

double sigma2_case1(double tau_hat, double ratio_hat, std::size_t p) {
  const double s = (tau_hat - 2.0) / static_cast<double>(p) + 2.0 * ratio_hat;
  return 2.0 * s * s;
}

PlugInMoments plugin_moments_case2(const DataMatrix& x, double theta_hat) {
  const std::size_t n = x.n();
  const std::size_t p = x.p();
  if (n < 2) throw Error(ErrorCode::InsufficientSample, "plug-in moments need n >= 2");

  const Eigen::MatrixXd& v = x.values();
  const Eigen::RowVectorXd anchor = v.row(0);
  const Eigen::RowVectorXd mean = anchor + (v.rowwise() - anchor).colwise().mean();
  const Eigen::MatrixXd centered = v.rowwise() - mean;
  const double denom = static_cast<double>(n) - 1.0;

  // tr S^k depends only on the nonzero spectrum, shared by Xc^T Xc and Xc Xc^T;
  // use whichever is smaller.
  Eigen::MatrixXd cov = p <= n ? Eigen::MatrixXd(centered.transpose() * centered)
                               : Eigen::MatrixXd(centered * centered.transpose());
  cov /= denom;
  const TracePowers t = trace_powers(SymmetricMatrix::symmetrized(cov));
  if (!(t.t1 > 0.0)) {
    throw Error(ErrorCode::DegenerateData, "plug-in moments: sample covariance is zero");
  }

  double m3 = 0.0;
  double m4 = 0.0;
  for (Eigen::Index i = 0; i < centered.rows(); ++i) {
    const double q = centered.row(i).squaredNorm();
    m3 += q * q * q;
    m4 += q * q * q * q;
  }
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);

  const double pd = static_cast<double>(p);
  const double t1sq = t.t1 * t.t1;
  const double den6 = t1sq * t.t1 + 6.0 * t.t1 * t.t2 + 8.0 * t.t3;
  const double den8 =
      t1sq * t1sq + 12.0 * t1sq * t.t2 + 12.0 * t.t2 * t.t2 + 32.0 * t.t1 * t.t3 + 48.0 * t.t4;

  PlugInMoments pm;
  pm.varrho_hat = pd * (pd + 2.0) * (pd + 4.0) * m3 / den6;
  pm.varphi_hat = pd * (pd + 2.0) * (pd + 4.0) * (pd + 6.0) * m4 / den8;
  pm.tau_hat = tau_hat(theta_hat, p);
  pm.delta_hat = delta_hat(theta_hat, p);
  if (theta_hat > 1.0) pm.d_n = dof_hat(theta_hat);
  return pm;
}

PlugInMoments plugin_moments_case2(const DataMatrix& x) {
  return plugin_moments_case2(x, estimate_kurtosis(x).theta_hat);
}

VarianceEstimate sigma2_case2(double theta_hat, const PlugInMoments& pm, std::size_t p) {
  const double pd = static_cast<double>(p);
  const double a = (pd + 2.0) * theta_hat / pd;
  const double p3 = pd * pd * pd;
  const double s2 = pm.varphi_hat / (p3 * pd) - a * a - 4.0 * (pm.varrho_hat / p3) * a + 4.0 * a * a * a;
  if (s2 < 0.0 || !std::isfinite(s2)) return VarianceEstimate{0.0, true};
  return VarianceEstimate{s2, false};
}

ConfidenceInterval confidence_interval(const KurtosisEstimate& est, CiMethod method, double alpha,
                                       const CiInputs& aux) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "confidence_interval: alpha must be in (0, 1)");
  }
  const UStats& u = est.ustats;
  const double theta = est.theta_hat;
  const double n = static_cast<double>(u.n);
  const double p = static_cast<double>(u.p);
  if (u.n < 1 || u.p < 1) {
    throw Error(ErrorCode::InvalidParameter, "confidence_interval: estimate carries no n, p");
  }

  ConfidenceInterval ci;
  ci.level = 1.0 - alpha;
  ci.method = method;
  ci.theta_hat = theta;

  double sigma = 0.0;
  switch (method) {
    case CiMethod::Example1Delta:
      sigma = std::sqrt(2.0) * std::abs(delta_hat(theta, u.p) / p + 2.0 * ratio_t3_t2(u));
      break;
    case CiMethod::KotzTau4:
      sigma = std::sqrt(8.0) * (1.0 / p + ratio_t3_t2(u));
      break;
    case CiMethod::StudentT: {
      const double d = dof_hat(theta);
      if (!(d > 8.0)) {
        throw Error(ErrorCode::InvalidDof,
                    "student_t interval needs estimated d > 8, got " + std::to_string(d));
      }
      sigma = std::sqrt(student_t_sigma2(d));
      break;
    }
    case CiMethod::Laplace:
      sigma = 2.0;
      break;
    case CiMethod::GeneralCaseI:
      sigma = std::sqrt(sigma2_case1(tau_hat(theta, u.p), ratio_t3_t2(u), u.p));
      break;
    case CiMethod::GeneralCaseII: {
      PlugInMoments pm;
      if (aux.plugin) {
        pm = *aux.plugin;
      } else if (aux.data != nullptr) {
        pm = plugin_moments_case2(*aux.data, theta);
      } else {
        throw Error(ErrorCode::InvalidParameter, "general_case_ii needs plug-in moments or data");
      }
      const VarianceEstimate ve = sigma2_case2(theta, pm, u.p);
      ci.degenerate_variance = ve.clamped;
      sigma = std::sqrt(ve.sigma2);
      break;
    }
  }

  const double half = sigma / std::sqrt(n) * normal_upper_quantile(alpha / 2.0);
  ci.sigma_hat = sigma;
  ci.lower = theta - half;
  ci.upper = theta + half;
  return ci;
}

}  // namespace ellkurt
