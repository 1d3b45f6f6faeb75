#include "ellkurt/moments.hpp"

#include "ellkurt/error.hpp"

#include <string>
#include <type_traits>

namespace ellkurt {

namespace {

void require_same_dim(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "sphere moment: argument dimensions differ");
  }
}

double trace_triple(const SymmetricMatrix& a, const SymmetricMatrix& b, const SymmetricMatrix& c) {
  // tr(ABC) = <A, (BC)^T>_F = <A, CB>_F
  const Eigen::MatrixXd cb = c.matrix() * b.matrix();
  return (a.matrix().array() * cb.array()).sum();
}

// p (p+2) ... (p + 2m - 2) = E Y^m for Y ~ chi^2_p.
double chi_squared_moment(double p, int m) {
  double r = 1.0;
  for (int j = 1; j <= m; ++j) r *= p + 2.0 * j - 2.0;
  return r;
}

}  // namespace

double sphere_moment_1(const SymmetricMatrix& a) {
  return a.matrix().trace() / static_cast<double>(a.dim());
}

double sphere_moment_2(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  require_same_dim(a, b);
  const double p = static_cast<double>(a.dim());
  const double num = a.matrix().trace() * b.matrix().trace() + 2.0 * trace_product(a, b);
  return num / (p * (p + 2.0));
}

double sphere_moment_3(const SymmetricMatrix& a, const SymmetricMatrix& b, const SymmetricMatrix& c) {
  require_same_dim(a, b);
  require_same_dim(a, c);
  const double p = static_cast<double>(a.dim());
  const double ta = a.matrix().trace();
  const double tb = b.matrix().trace();
  const double tc = c.matrix().trace();
  const double num = ta * tb * tc + 2.0 * ta * trace_product(b, c) + 2.0 * tb * trace_product(a, c) +
                     2.0 * tc * trace_product(a, b) + 8.0 * trace_triple(a, b, c);
  return num / (p * (p + 2.0) * (p + 4.0));
}

double sphere_moment_4(const SymmetricMatrix& a) {
  const double p = static_cast<double>(a.dim());
  const TracePowers t = trace_powers(a);
  const double t1sq = t.t1 * t.t1;
  const double num = t1sq * t1sq + 12.0 * t1sq * t.t2 + 12.0 * t.t2 * t.t2 + 32.0 * t.t1 * t.t3 +
                     48.0 * t.t4;
  return num / (p * (p + 2.0) * (p + 4.0) * (p + 6.0));
}

double xi_moment(const XiLaw& law, int m) {
  validate(law);
  if (m < 1 || m > 4) {
    throw Error(ErrorCode::InvalidParameter, "xi_moment: m must be in 1..4, got " + std::to_string(m));
  }
  const double p = static_cast<double>(dimension(law));
  return std::visit(
      [&](const auto& l) -> double {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, ChiSquared>) {
          return chi_squared_moment(p, m);
        } else if constexpr (std::is_same_v<L, KotzHalf>) {
          // E omega^{2m} / (p+1)^m with omega ~ Gamma(p, 1)
          double r = 1.0;
          for (int j = 1; j <= 2 * m; ++j) r *= p + j - 1.0;
          for (int j = 0; j < m; ++j) r /= p + 1.0;
          return r;
        } else if constexpr (std::is_same_v<L, ScaledF>) {
          if (2 * m >= l.d) {
            throw Error(ErrorCode::MomentDoesNotExist,
                        "xi_moment: E xi^" + std::to_string(2 * m) + " is infinite for d = " +
                            std::to_string(l.d));
          }
          // (d-2)^m Gamma(p/2 + m) Gamma(d/2 - m) / (Gamma(p/2) Gamma(d/2)),
          // both gamma ratios reduced to finite products.
          const double d = static_cast<double>(l.d);
          double r = 1.0;
          for (int j = 0; j < m; ++j) r *= (d - 2.0) * (0.5 * p + j) / (0.5 * d - 1.0 - j);
          return r;
        } else if constexpr (std::is_same_v<L, ExpChiProduct>) {
          double factorial = 1.0;
          for (int j = 2; j <= m; ++j) factorial *= j;
          return factorial * chi_squared_moment(p, m);
        } else {
          double r = 1.0;
          for (int j = 0; j < 2 * m; ++j) r *= l.value;
          return r;
        }
      },
      law);
}

EtaSequence eta_sequence(const XiLaw& law) {
  const double p = static_cast<double>(dimension(law));
  EtaSequence e;
  e.eta1 = xi_moment(law, 1) / chi_squared_moment(p, 1);
  e.eta2 = xi_moment(law, 2) / chi_squared_moment(p, 2);
  e.eta3 = xi_moment(law, 3) / chi_squared_moment(p, 3);
  e.eta4 = xi_moment(law, 4) / chi_squared_moment(p, 4);
  return e;
}

double var_quadform(const SymmetricMatrix& sigma, const XiLaw& law) {
  if (sigma.dim() != dimension(law)) {
    throw Error(ErrorCode::DimensionMismatch, "var_quadform: sigma and xi law disagree on p");
  }
  const double p = static_cast<double>(sigma.dim());
  const double theta = xi_moment(law, 2) / (p * (p + 2.0));
  const double tr = sigma.matrix().trace();
  const double tr2 = sigma.matrix().squaredNorm();
  return 2.0 * theta * tr2 + (theta - 1.0) * tr * tr;
}

double var_centered_sq(const SymmetricMatrix& sigma, const XiLaw& law, Centering center) {
  if (sigma.dim() != dimension(law)) {
    throw Error(ErrorCode::DimensionMismatch, "var_centered_sq: sigma and xi law disagree on p");
  }
  const EtaSequence eta = eta_sequence(law);
  const double e2 = eta.eta2;
  const double e3 = eta.eta3;
  const double e4 = eta.eta4;
  const TracePowers t = trace_powers(sigma);

  // var((X0^T X0 - c)^2) = r1 tr^4 + r2 tr^2 trS^2 + r3 (trS^2)^2 + r4 tr trS^3 + r5 trS^4
  double r1 = 0.0, r2 = 0.0, r4 = 0.0;
  if (center == Centering::AtTrace) {
    r1 = e4 - 4.0 * e3 - e2 * e2 + 8.0 * e2 - 4.0;
    r2 = 4.0 * (3.0 * e4 - 6.0 * e3 - e2 * e2 + 4.0 * e2);
    r4 = 32.0 * (e4 - e3);
  } else {
    r1 = e4 - 4.0 * e3 * e2 - e2 * e2 + 4.0 * e2 * e2 * e2;
    r2 = 4.0 * (3.0 * e4 - 6.0 * e3 * e2 + 2.0 * e2 * e2 * e2 + e2 * e2);
    r4 = 32.0 * (e4 - e3 * e2);
  }
  const double r3 = 4.0 * (3.0 * e4 - e2 * e2);
  const double r5 = 48.0 * e4;

  const double tr2 = t.t1 * t.t1;
  return r1 * tr2 * tr2 + r2 * tr2 * t.t2 + r3 * t.t2 * t.t2 + r4 * t.t1 * t.t3 + r5 * t.t4;
}

}  // namespace ellkurt
