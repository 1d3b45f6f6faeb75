#include "ellkurt/baselines.hpp"
#include "ellkurt/error.hpp"
#include "ellkurt/harness.hpp"
#include "ellkurt/models.hpp"
#include "ellkurt/moments.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace ellkurt {
namespace {

using testing::gaussian_matrix;
using testing::rel_err;

TEST(Oracle, ConstantRadius) {
  for (std::size_t p : {1, 4, 50}) {
    const double pd = static_cast<double>(p);
    const EllipticalSpec spec(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p)), SymmetricMatrix::identity(p),
                              PointMass{p, std::sqrt(pd)});
    Rng rng(1);
    const auto x = sample_data(spec, 25, rng);
    EXPECT_NEAR(oracle_theta(x, spec.mu(), spec.sigma()), pd / (pd + 2.0), 1e-12);
  }
}

TEST(Oracle, MatchesExplicitInverse) {
  Rng rng(2);
  const auto sigma = testing::random_psd(6, rng);
  const Eigen::VectorXd mu = gaussian_matrix(6, 1, rng);
  const DataMatrix x(gaussian_matrix(30, 6, rng));
  const Eigen::MatrixXd inv = sigma.matrix().inverse();
  double acc = 0.0;
  for (std::size_t i = 0; i < x.n(); ++i) {
    const Eigen::VectorXd d = x.row(i).transpose() - mu;
    const double q = d.dot(inv * d);
    acc += q * q;
  }
  EXPECT_LE(rel_err(oracle_theta(x, mu, sigma), acc / (30.0 * 6.0 * 8.0)), 1e-9);
}

TEST(Oracle, AffineReparametrization) {
  Rng rng(3);
  const std::size_t p = 8;
  const auto sigma = toeplitz_ar1(p, 0.5);
  const Eigen::VectorXd mu = gaussian_matrix(p, 1, rng);
  const DataMatrix x(gaussian_matrix(40, p, rng));
  const Eigen::MatrixXd a = gaussian_matrix(p, p, rng) + 3.0 * Eigen::MatrixXd::Identity(p, p);
  const DataMatrix xa(Eigen::MatrixXd(x.values() * a.transpose()));
  const auto sa = SymmetricMatrix::symmetrized(a * sigma.matrix() * a.transpose());
  EXPECT_LE(rel_err(oracle_theta(xa, a * mu, sa), oracle_theta(x, mu, sigma)), 1e-8);

  Eigen::MatrixXd shifted = x.values();
  shifted.rowwise() += Eigen::RowVectorXd::Constant(p, 5.0);
  const Eigen::VectorXd mu_shift = mu.array() + 5.0;
  EXPECT_LE(rel_err(oracle_theta(DataMatrix(shifted), mu_shift, sigma), oracle_theta(x, mu, sigma)), 1e-9);
}

TEST(Oracle, Errors) {
  Eigen::VectorXd d(3);
  d << 1, 1, 0;
  try {
    OracleEstimator(Eigen::VectorXd::Zero(3), SymmetricMatrix::diagonal(d));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularMatrix);
  }
  EXPECT_THROW(OracleEstimator(Eigen::VectorXd::Zero(2), SymmetricMatrix::identity(3)), Error);
  const OracleEstimator est(Eigen::VectorXd::Zero(3), SymmetricMatrix::identity(3));
  EXPECT_THROW(est(DataMatrix(Eigen::MatrixXd::Ones(4, 2))), Error);
}

// Replication mean of the oracle against its exact sampling SD:
// var = (E xi^8 - (E xi^4)^2) / (p(p+2))^2 / n.
void check_oracle_mean(Family family, std::size_t p, const XiLaw& law, double sd_tol) {
  ExperimentConfig cfg;
  cfg.family = family;
  cfg.p_list = {p};
  cfg.methods = {Estimator::Oracle};
  const auto rows = run_estimation_experiment(cfg);
  ASSERT_EQ(rows.size(), 1u);
  const double pd = static_cast<double>(p);
  const double m4 = xi_moment(law, 2), m8 = xi_moment(law, 4);
  const double sd = std::sqrt((m8 - m4 * m4) / (100.0 * std::pow(pd * (pd + 2.0), 2)));
  const double se = sd / std::sqrt(200.0);
  EXPECT_LE(std::abs(rows[0].mean - true_theta(law)), 4.0 * se) << rows[0].mean;
  EXPECT_NEAR(rows[0].sd, sd, sd_tol * sd);
}

TEST(Oracle, NormalReplicationMean) { check_oracle_mean(Family::Normal, 100, ChiSquared{100}, 0.2); }
TEST(Oracle, LaplaceReplicationMean) { check_oracle_mean(Family::Laplace, 100, ExpChiProduct{100}, 0.5); }

TEST(WLPlugin, FormulaByHand) {
  Rng rng(4);
  const DataMatrix x(gaussian_matrix(15, 4, rng));
  const Eigen::MatrixXd c = x.values().rowwise() - x.values().colwise().mean();
  const Eigen::MatrixXd s = c.transpose() * c / 14.0;
  Eigen::VectorXd q = c.rowwise().squaredNorm();
  const double qbar = q.mean();
  const double s2 = (q.array() - qbar).square().sum() / 14.0;
  const double tr = s.trace(), tr2 = (s * s).trace();
  EXPECT_LE(rel_err(wl_theta(x), (s2 + tr * tr) / (tr * tr + 2.0 * tr2)), 1e-12);
}

TEST(WLPlugin, Errors) {
  EXPECT_THROW(wl_theta(DataMatrix(Eigen::MatrixXd::Ones(1, 3))), Error);
  try {
    wl_theta(DataMatrix(Eigen::MatrixXd::Ones(6, 3)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateData);
  }
}

TEST(WLPlugin, LocationInvariant) {
  Rng rng(5);
  const DataMatrix x(gaussian_matrix(30, 10, rng));
  Eigen::MatrixXd shifted = x.values();
  shifted.rowwise() += Eigen::RowVectorXd::Constant(10, -40.0);
  EXPECT_LE(rel_err(wl_theta(DataMatrix(shifted)), wl_theta(x)), 1e-9);
}

TEST(WLPlugin, NormalReplicationMean) {
  ExperimentConfig cfg;
  cfg.family = Family::Normal;
  cfg.p_list = {100};
  cfg.methods = {Estimator::WLPlugin};
  const auto rows = run_estimation_experiment(cfg);
  EXPECT_GE(rows.at(0).mean, 0.95);
  EXPECT_LE(rows.at(0).mean, 1.05);
}

}  // namespace
}  // namespace ellkurt
