#include "ellkurt/error.hpp"
#include "ellkurt/inference.hpp"
#include "ellkurt/models.hpp"
#include "ellkurt/moments.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace ellkurt {
namespace {

using testing::rel_err;

constexpr CiMethod kAllMethods[] = {CiMethod::Example1Delta, CiMethod::KotzTau4, CiMethod::StudentT,
                                   CiMethod::Laplace,       CiMethod::GeneralCaseI, CiMethod::GeneralCaseII};

KurtosisEstimate fake_estimate(double theta, double t2, double t3, std::size_t n, std::size_t p) {
  KurtosisEstimate e;
  e.theta_hat = theta;
  e.ustats.t2 = t2;
  e.ustats.t3 = t3;
  e.ustats.t1 = theta * (t2 + 2.0 * t3) - t2 + 2.0 * t3;
  e.ustats.n = n;
  e.ustats.p = p;
  return e;
}

TEST(CiMethodNames, RoundTrip) {
  for (auto m : kAllMethods) EXPECT_EQ(parse_ci_method(to_string(m)), m);
  EXPECT_EQ(parse_ci_method("example1"), CiMethod::Example1Delta);
  EXPECT_EQ(parse_ci_method("kotz"), CiMethod::KotzTau4);
  EXPECT_EQ(parse_ci_method("t"), CiMethod::StudentT);
  EXPECT_EQ(parse_ci_method("laplace"), CiMethod::Laplace);
  EXPECT_EQ(parse_ci_method("case1"), CiMethod::GeneralCaseI);
  EXPECT_EQ(parse_ci_method("case2"), CiMethod::GeneralCaseII);
  EXPECT_FALSE(parse_ci_method("nope"));
}

TEST(NormalQuantile, MatchesTailProbability) {
  EXPECT_NEAR(normal_upper_quantile(0.025), 1.959963984540054, 1e-14);
  EXPECT_NEAR(normal_upper_quantile(0.5), 0.0, 1e-15);
  for (double a : {1e-10, 1e-4, 0.01, 0.05, 0.2, 0.7, 0.99}) {
    const double z = normal_upper_quantile(a);
    EXPECT_LE(rel_err(0.5 * std::erfc(z / std::sqrt(2.0)), a), 1e-13) << a;
  }
  EXPECT_THROW(normal_upper_quantile(0.0), Error);
  EXPECT_THROW(normal_upper_quantile(1.0), Error);
}

TEST(PlugInScalars, Examples) {
  EXPECT_EQ(delta_hat(1.0, 100), 0.0);
  EXPECT_NEAR(delta_hat(1.02, 100), 2.04, 1e-12);
  EXPECT_NEAR(delta_hat(103.0 / 101.0, 100), 204.0 / 101.0, 1e-12);
  EXPECT_EQ(tau_hat(1.0, 100), 2.0);
  EXPECT_NEAR(tau_hat(1.02, 100), 4.04, 1e-12);
  EXPECT_NEAR(tau_hat((1e6 + 3.0) / (1e6 + 1.0), 1000000), 4.0, 1e-5);
  EXPECT_NEAR(dof_hat(1.4), 9.0, 1e-12);
  EXPECT_NEAR(dof_hat(1.25), 12.0, 1e-12);
  try {
    dof_hat(1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UndefinedDof);
  }
}

TEST(SigmaCase1, Examples) {
  const double ratio = 0.0123;
  EXPECT_NEAR(sigma2_case1(2.0, ratio, 50), 8.0 * ratio * ratio, 1e-15);
  const double s = std::sqrt(sigma2_case1(2.0, (5.0 / 3.0) / 100.0, 100));
  EXPECT_NEAR(s, 0.04714, 1e-5);
  EXPECT_NEAR(2.0 * s * 1.959963984540054 / 10.0, 0.0185, 1e-4);
  for (double tau : {-30.0, 0.0, 2.0, 7.5})
    for (double r : {-1.0, 0.0, 0.3}) EXPECT_GE(sigma2_case1(tau, r, 10), 0.0);
}

TEST(SigmaCase2, PopulationValues) {
  // Laplace: sigma^2 = 4 + O(1/p); Normal: O(1/p).
  for (std::size_t p : {100, 1000, 10000}) {
    const double pd = static_cast<double>(p);
    PlugInMoments lap;
    lap.varrho_hat = xi_moment(ExpChiProduct{p}, 3);
    lap.varphi_hat = xi_moment(ExpChiProduct{p}, 4);
    const auto vl = sigma2_case2(2.0, lap, p);
    EXPECT_FALSE(vl.clamped);
    EXPECT_NEAR(vl.sigma2, 4.0, 400.0 / pd);

    PlugInMoments nor;
    nor.varrho_hat = xi_moment(ChiSquared{p}, 3);
    nor.varphi_hat = xi_moment(ChiSquared{p}, 4);
    const auto vn = sigma2_case2(1.0, nor, p);
    EXPECT_GE(vn.sigma2, 0.0);
    EXPECT_LT(vn.sigma2, 0.1);
    EXPECT_LT(vn.sigma2, 20.0 / pd);
  }
}

TEST(SigmaCase2, NegativeIsClamped) {
  PlugInMoments pm;
  pm.varrho_hat = 10.0 * 1e6;
  pm.varphi_hat = 0.0;
  const auto v = sigma2_case2(1.0, pm, 100);
  EXPECT_TRUE(v.clamped);
  EXPECT_EQ(v.sigma2, 0.0);

  const auto e = fake_estimate(1.0, 1.0, 0.01, 100, 100);
  const auto ci = confidence_interval(e, CiMethod::GeneralCaseII, 0.05, CiInputs{pm, nullptr});
  EXPECT_TRUE(ci.degenerate_variance);
  EXPECT_EQ(ci.width(), 0.0);
  EXPECT_TRUE(ci.contains(1.0));
}

TEST(PlugInCase2, DegenerateAndInvariant) {
  Eigen::MatrixXd same(5, 3);
  same.rowwise() = Eigen::RowVector3d(1, 2, 3);
  try {
    plugin_moments_case2(DataMatrix(same), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateData);
  }

  Rng rng(1);
  const auto x = sample_data(EllipticalSpec::toeplitz(ExpChiProduct{30}, 0.5), 60, rng);
  Eigen::MatrixXd shifted = x.values();
  shifted.rowwise() += Eigen::RowVectorXd::Constant(30, 1e3);
  const auto a = plugin_moments_case2(x);
  const auto b = plugin_moments_case2(DataMatrix(shifted));
  EXPECT_LE(rel_err(b.varrho_hat, a.varrho_hat), 1e-8);
  EXPECT_LE(rel_err(b.varphi_hat, a.varphi_hat), 1e-8);
}

TEST(PlugInCase2, SmallAndWideShapesAgree) {
  // p > n takes the n x n branch; compare against the p x p covariance.
  Rng rng(2);
  const auto x = sample_data(EllipticalSpec::toeplitz(ScaledF{40, 9}, 0.5), 12, rng);
  const auto pm = plugin_moments_case2(x, 1.3);
  const Eigen::MatrixXd c = x.values().rowwise() - x.values().colwise().mean();
  const Eigen::MatrixXd s = c.transpose() * c / 11.0;
  const Eigen::MatrixXd s2 = s * s;
  const double t1 = s.trace(), t2 = s2.trace(), t3 = (s2 * s).trace(), t4 = (s2 * s2).trace();
  double m3 = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) m3 += std::pow(c.row(i).squaredNorm(), 3);
  m3 /= 12.0;
  const double want = 40.0 * 42.0 * 44.0 * m3 / (t1 * t1 * t1 + 6 * t1 * t2 + 8 * t3);
  EXPECT_LE(rel_err(pm.varrho_hat, want), 1e-10);
  (void)t4;
  ASSERT_TRUE(pm.d_n);
  EXPECT_NEAR(*pm.d_n, dof_hat(1.3), 1e-12);
  EXPECT_FALSE(plugin_moments_case2(x, 0.9).d_n);
}

TEST(ConfidenceInterval, HalfWidths) {
  const auto e = fake_estimate(1.4, 2.0, 0.05, 100, 100);
  const double z = normal_upper_quantile(0.025);
  const double r = 0.025;
  const auto check = [&](CiMethod m, double half) {
    const auto ci = confidence_interval(e, m, 0.05);
    EXPECT_NEAR(ci.upper - ci.theta_hat, half, 1e-13) << to_string(m);
    EXPECT_NEAR(ci.theta_hat - ci.lower, half, 1e-13) << to_string(m);
    EXPECT_DOUBLE_EQ(ci.level, 0.95);
    EXPECT_EQ(ci.method, m);
  };
  check(CiMethod::Example1Delta, std::sqrt(2.0 / 100) * (delta_hat(1.4, 100) / 100 + 2 * r) * z);
  check(CiMethod::KotzTau4, std::sqrt(8.0 / 100) * (0.01 + r) * z);
  const double d = 9.0;
  check(CiMethod::StudentT,
        std::sqrt(8 * (d - 2) * (d - 2) * (d + 4) / (100 * std::pow(d - 4, 3) * (d - 6) * (d - 8))) * z);
  check(CiMethod::Laplace, 0.2 * z);
  check(CiMethod::GeneralCaseI, std::sqrt(sigma2_case1(tau_hat(1.4, 100), r, 100)) / 10 * z);
}

TEST(ConfidenceInterval, LaplaceWidthAtN100) {
  const auto ci = confidence_interval(fake_estimate(2.0, 1.0, 0.01, 100, 100), CiMethod::Laplace, 0.05);
  EXPECT_NEAR(ci.width(), 0.784, 1e-4);
}

TEST(ConfidenceInterval, Example1EqualsCaseI) {
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    const double theta = 0.5 + rng.uniform();
    const auto e = fake_estimate(theta, 1.0 + rng.uniform(), 0.1 * rng.uniform(), 50, 1 + k * 10);
    const auto a = confidence_interval(e, CiMethod::Example1Delta, 0.1);
    const auto b = confidence_interval(e, CiMethod::GeneralCaseI, 0.1);
    EXPECT_NEAR(a.lower, b.lower, 1e-12);
    EXPECT_NEAR(a.upper, b.upper, 1e-12);
  }
}

TEST(ConfidenceInterval, Errors) {
  const auto e = fake_estimate(1.4, 2.0, 0.05, 100, 100);
  EXPECT_THROW(confidence_interval(e, CiMethod::Laplace, 0.0), Error);
  EXPECT_THROW(confidence_interval(e, CiMethod::Laplace, 1.0), Error);
  EXPECT_THROW(confidence_interval(e, CiMethod::GeneralCaseII, 0.05), Error);
  try {
    confidence_interval(fake_estimate(1.0, 2.0, 0.05, 100, 100), CiMethod::StudentT, 0.05);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::UndefinedDof);
  }
  try {
    // d_n = (4*1.5 - 2)/0.5 = 8
    confidence_interval(fake_estimate(1.5, 2.0, 0.05, 100, 100), CiMethod::StudentT, 0.05);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::InvalidDof);
  }
}

TEST(ConfidenceInterval, ContainsEstimateOnRealData) {
  Rng rng(4);
  const std::vector<XiLaw> laws{ChiSquared{30}, KotzHalf{30}, ScaledF{30, 9}, ExpChiProduct{30}};
  for (const auto& law : laws)
    for (int k = 0; k < 10; ++k) {
      const auto x = sample_data(EllipticalSpec::toeplitz(law, 0.5), 40, rng);
      const auto est = estimate_kurtosis(x);
      for (auto m : kAllMethods) {
        try {
          const auto ci = confidence_interval(est, m, 0.05, CiInputs{std::nullopt, &x});
          EXPECT_LE(ci.lower, est.theta_hat);
          EXPECT_GE(ci.upper, est.theta_hat);
          EXPECT_GE(ci.width(), 0.0);
        } catch (const Error& err) {
          EXPECT_TRUE(m == CiMethod::StudentT) << err.what();
        }
      }
    }
}

}  // namespace
}  // namespace ellkurt
