#include "ellkurt/validation.hpp"

#include "ellkurt/linalg.hpp"
#include "ellkurt/models.hpp"
#include "ellkurt/moments.hpp"
#include "ellkurt/random.hpp"
#include "ellkurt/ustat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace ellkurt {

namespace {

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;
};

struct VarianceEstimate {
  double var = 0.0;
  double se = 0.0;
};

MeanEstimate mean_with_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

// Sample variance and its delta-method standard error sqrt((m4 - s^4) / N).
VarianceEstimate variance_with_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = (x - mean) * (x - mean);
    m2 += d;
    m4 += d * d;
  }
  const double var = m2 / (n - 1.0);
  m4 /= n;
  const double v2 = m2 / n;
  return {var, std::sqrt(std::max(0.0, m4 - v2 * v2) / n)};
}

SymmetricMatrix random_symmetric(std::size_t p, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) m(i, j) = rng.normal();
  }
  return SymmetricMatrix::symmetrized(m);
}

CheckResult within_se(std::string name, double observed, double expected, double se, double k) {
  const double z = se > 0.0 ? std::abs(observed - expected) / se : (observed == expected ? 0.0 : INFINITY);
  char buf[160];
  std::snprintf(buf, sizeof buf, "mc=%.6g exact=%.6g se=%.3g |z|=%.2f (limit %.1f)", observed, expected, se, z, k);
  return {std::move(name), z <= k, buf};
}

}  // namespace

std::vector<CheckResult> validate_moments(const ValidationOptions& opts) {
  const std::size_t draws = opts.quick ? 100000 : 1000000;
  const double k = opts.quick ? 5.0 : 4.0;
  std::vector<CheckResult> out;
  Rng rng(opts.seed);

  for (std::size_t p : {2, 5, 10}) {
    const SymmetricMatrix id = SymmetricMatrix::identity(p);
    const bool exact = sphere_moment_1(id) == 1.0 && sphere_moment_2(id, id) == 1.0 &&
                       sphere_moment_3(id, id, id) == 1.0 && sphere_moment_4(id) == 1.0;
    out.push_back({"sphere identity p=" + std::to_string(p), exact, exact ? "all four equal 1" : "mismatch"});

    const SymmetricMatrix a = random_symmetric(p, rng);
    const SymmetricMatrix b = random_symmetric(p, rng);
    const SymmetricMatrix c = random_symmetric(p, rng);
    std::vector<double> s1(draws), s2(draws), s3(draws), s4(draws);
    for (std::size_t r = 0; r < draws; ++r) {
      const Eigen::VectorXd u = sample_sphere(p, rng);
      const double qa = u.dot(a.matrix() * u);
      const double qb = u.dot(b.matrix() * u);
      const double qc = u.dot(c.matrix() * u);
      s1[r] = qa;
      s2[r] = qa * qb;
      s3[r] = qa * qb * qc;
      s4[r] = qa * qa * qa * qa;
    }
    const std::string tag = " p=" + std::to_string(p);
    const auto m1 = mean_with_se(s1);
    const auto m2 = mean_with_se(s2);
    const auto m3 = mean_with_se(s3);
    const auto m4 = mean_with_se(s4);
    out.push_back(within_se("sphere_moment_1" + tag, m1.mean, sphere_moment_1(a), m1.se, k));
    out.push_back(within_se("sphere_moment_2" + tag, m2.mean, sphere_moment_2(a, b), m2.se, k));
    out.push_back(within_se("sphere_moment_3" + tag, m3.mean, sphere_moment_3(a, b, c), m3.se, k));
    out.push_back(within_se("sphere_moment_4" + tag, m4.mean, sphere_moment_4(a), m4.se, k));
  }

  for (std::size_t p : {20, 50}) {
    for (int fam = 0; fam < 2; ++fam) {
      const XiLaw law = fam == 0 ? XiLaw{ChiSquared{p}} : XiLaw{ExpChiProduct{p}};
      const EllipticalSpec spec = EllipticalSpec::toeplitz(law, 0.5);
      const double tr = spec.sigma().matrix().trace();
      const double theta = true_theta(law);
      std::vector<double> q, y_tr, y_theta;
      q.reserve(draws);
      y_tr.reserve(draws);
      y_theta.reserve(draws);
      constexpr std::size_t batch = 10000;
      for (std::size_t done = 0; done < draws; done += batch) {
        const DataMatrix x = sample_data(spec, std::min(batch, draws - done), rng);
        for (Eigen::Index i = 0; i < x.values().rows(); ++i) {
          const double v = x.values().row(i).squaredNorm();
          q.push_back(v);
          y_tr.push_back((v - tr) * (v - tr));
          y_theta.push_back((v - theta * tr) * (v - theta * tr));
        }
      }
      const std::string tag = " " + describe(law);
      const auto vq = variance_with_se(q);
      const auto vt = variance_with_se(y_tr);
      const auto vh = variance_with_se(y_theta);
      out.push_back(within_se("var_quadform" + tag, vq.var, var_quadform(spec.sigma(), law), vq.se, k));
      out.push_back(within_se("var_centered_sq/trace" + tag, vt.var,
                              var_centered_sq(spec.sigma(), law, Centering::AtTrace), vt.se, k));
      out.push_back(within_se("var_centered_sq/theta_trace" + tag, vh.var,
                              var_centered_sq(spec.sigma(), law, Centering::AtThetaTrace), vh.se, k));
    }
  }
  return out;
}

std::vector<CheckResult> validate_ustat(const ValidationOptions& opts) {
  std::vector<CheckResult> out;
  Rng rng(opts.seed);
  const std::size_t instances = 50;
  for (std::size_t r = 0; r < instances; ++r) {
    const std::size_t n = 4 + static_cast<std::size_t>(rng.uniform() * 9.0);
    const std::size_t p = 1 + static_cast<std::size_t>(rng.uniform() * 5.0);
    XiLaw law;
    switch (r % 4) {
      case 0: law = ChiSquared{p}; break;
      case 1: law = KotzHalf{p}; break;
      case 2: law = ScaledF{p, 9}; break;
      default: law = ExpChiProduct{p}; break;
    }
    const DataMatrix x = sample_data(EllipticalSpec::toeplitz(law, 0.5), n, rng);
    const UStats slow = ustats_bruteforce(x);
    const UStats fast = ustats_fast(x);
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
    const double worst = std::max({rel(fast.t1, slow.t1), rel(fast.t2, slow.t2), rel(fast.t3, slow.t3)});
    char buf[128];
    std::snprintf(buf, sizeof buf, "n=%zu p=%zu %s max rel err %.2e", n, p, describe(law).c_str(), worst);
    out.push_back({"ustat instance " + std::to_string(r), worst <= 1e-10, buf});
  }
  return out;
}

}  // namespace ellkurt
