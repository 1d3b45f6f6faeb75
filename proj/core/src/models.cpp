#include "ellkurt/models.hpp"

#include "ellkurt/error.hpp"

#include <cmath>
#include <string>
#include <type_traits>
#include <utility>

namespace ellkurt {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::size_t dimension(const XiLaw& law) {
  return std::visit([](const auto& l) { return l.p; }, law);
}

void validate(const XiLaw& law) {
  if (dimension(law) < 1) throw Error(ErrorCode::InvalidParameter, "xi law: p must be >= 1");
  if (const auto* f = std::get_if<ScaledF>(&law); f && f->d <= 8) {
    throw Error(ErrorCode::InvalidParameter,
                "xi law: ScaledF needs integer d > 8, got " + std::to_string(f->d));
  }
  if (const auto* c = std::get_if<PointMass>(&law); c && !(std::isfinite(c->value) && c->value >= 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "xi law: point mass must be finite and >= 0");
  }
}

std::string describe(const XiLaw& law) {
  return std::visit(
      overloaded{
          [](const ChiSquared& l) { return "chi_squared(p=" + std::to_string(l.p) + ")"; },
          [](const KotzHalf& l) { return "kotz_half(p=" + std::to_string(l.p) + ")"; },
          [](const ScaledF& l) {
            return "scaled_f(p=" + std::to_string(l.p) + ", d=" + std::to_string(l.d) + ")";
          },
          [](const ExpChiProduct& l) { return "exp_chi_product(p=" + std::to_string(l.p) + ")"; },
          [](const PointMass& l) {
            return "point_mass(p=" + std::to_string(l.p) + ", xi=" + std::to_string(l.value) + ")";
          },
      },
      law);
}

EllipticalSpec::EllipticalSpec(Eigen::VectorXd mu, SymmetricMatrix sigma, XiLaw xi)
    : mu_(std::move(mu)),
      sigma_(std::move(sigma)),
      sigma_sqrt_(sqrt_psd(sigma_)),
      xi_(std::move(xi)) {
  validate(xi_);
  if (static_cast<std::size_t>(mu_.size()) != sigma_.dim() || sigma_.dim() != dimension(xi_)) {
    throw Error(ErrorCode::DimensionMismatch, "elliptical spec: mu, sigma and xi law disagree on p");
  }
}

EllipticalSpec EllipticalSpec::toeplitz(const XiLaw& xi, double rho) {
  const std::size_t p = dimension(xi);
  if (p < 1) throw Error(ErrorCode::InvalidParameter, "xi law: p must be >= 1");
  return EllipticalSpec(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p)), toeplitz_ar1(p, rho), xi);
}

Eigen::VectorXd sample_sphere(std::size_t p, Rng& rng) {
  if (p < 1) throw Error(ErrorCode::InvalidParameter, "sample_sphere: p must be >= 1");
  Eigen::VectorXd u(static_cast<Eigen::Index>(p));
  for (;;) {
    for (Eigen::Index k = 0; k < u.size(); ++k) u(k) = rng.normal();
    const double norm = u.norm();
    if (norm > 0.0) {
      u /= norm;
      return u;
    }
  }
}

double sample_xi(const XiLaw& law, Rng& rng) {
  validate(law);
  return std::visit(
      overloaded{
          [&](const ChiSquared& l) { return std::sqrt(rng.chi_squared(static_cast<double>(l.p))); },
          [&](const KotzHalf& l) {
            const double omega = rng.gamma(static_cast<double>(l.p));
            return omega / std::sqrt(static_cast<double>(l.p) + 1.0);
          },
          [&](const ScaledF& l) {
            const double p = static_cast<double>(l.p);
            const double d = static_cast<double>(l.d);
            const double num = rng.chi_squared(p) / p;
            const double den = rng.chi_squared(d) / d;
            return std::sqrt(p * (d - 2.0) / d * (num / den));
          },
          [&](const ExpChiProduct& l) {
            const double r1 = rng.exponential();
            const double r2 = rng.chi_squared(static_cast<double>(l.p));
            return std::sqrt(r1 * r2);
          },
          [&](const PointMass& l) { return l.value; },
      },
      law);
}

DataMatrix sample_data(const EllipticalSpec& spec, std::size_t n, Rng& rng) {
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "sample_data: n must be >= 1");
  const auto p = static_cast<Eigen::Index>(spec.p());
  Eigen::MatrixXd z(static_cast<Eigen::Index>(n), p);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const Eigen::VectorXd u = sample_sphere(spec.p(), rng);
    const double xi = sample_xi(spec.xi(), rng);
    z.row(i) = xi * u.transpose();
  }
  // Rows of Z times Sigma^{1/2} (symmetric) give xi * Sigma^{1/2} u.
  Eigen::MatrixXd x = z * spec.sigma_sqrt().matrix();
  x.rowwise() += spec.mu().transpose();
  return DataMatrix(std::move(x));
}

double true_theta(const XiLaw& law) {
  validate(law);
  return std::visit(
      overloaded{
          [](const ChiSquared&) { return 1.0; },
          [](const KotzHalf& l) {
            const double p = static_cast<double>(l.p);
            return (p + 3.0) / (p + 1.0);
          },
          [](const ScaledF& l) {
            const double d = static_cast<double>(l.d);
            return (d - 2.0) / (d - 4.0);
          },
          [](const ExpChiProduct&) { return 2.0; },
          [](const PointMass& l) {
            const double p = static_cast<double>(l.p);
            const double x2 = l.value * l.value;
            return x2 * x2 / (p * (p + 2.0));
          },
      },
      law);
}

}  // namespace ellkurt
