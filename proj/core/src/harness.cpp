#include "ellkurt/harness.hpp"

#include "ellkurt/baselines.hpp"
#include "ellkurt/error.hpp"
#include "ellkurt/random.hpp"
#include "ellkurt/ustat.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

namespace ellkurt {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<Family, std::string_view>, 5> kFamilyNames{{
    {Family::Normal, "normal"},
    {Family::Kotz, "kotz"},
    {Family::StudentT, "t"},
    {Family::Laplace, "laplace"},
    {Family::PointMass, "point_mass"},
}};

constexpr std::array<std::pair<Estimator, std::string_view>, 3> kEstimatorNames{{
    {Estimator::ThetaHat, "theta_hat"},
    {Estimator::Oracle, "oracle"},
    {Estimator::WLPlugin, "wl_plugin"},
}};

// Runs body(i) for i in [0, count) on up to `threads` workers. Exceptions
// are rethrown on the calling thread after all workers join.
template <class Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(count, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

struct Aggregate {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double sd = std::numeric_limits<double>::quiet_NaN();
  bool degenerate = true;
};

// Two-pass mean and SD (divisor m - 1) in the given order.
Aggregate aggregate(const std::vector<double>& xs) {
  Aggregate a;
  if (xs.empty()) return a;
  double sum = 0.0;
  for (double x : xs) sum += x;
  a.mean = sum / static_cast<double>(xs.size());
  if (xs.size() == 1) {
    a.sd = 0.0;
    return a;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - a.mean) * (x - a.mean);
  a.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  a.degenerate = false;
  return a;
}

std::string format_real(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string format_real(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

template <class T, class Parse>
std::vector<T> parse_list(const json& j, std::string_view key, Parse parse) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "config: '" + std::string(key) + "' must be an array");
  std::vector<T> out;
  for (const auto& item : j) {
    if (!item.is_string()) {
      throw Error(ErrorCode::ParseError, "config: '" + std::string(key) + "' entries must be strings");
    }
    const auto name = item.get<std::string>();
    const auto v = parse(name);
    if (!v) throw Error(ErrorCode::ParseError, "config: unknown " + std::string(key) + " entry '" + name + "'");
    out.push_back(*v);
  }
  return out;
}

ExperimentConfig config_from_object(const json& j) {
  static const std::set<std::string> known{"family", "p_list",     "n",   "reps",  "alpha", "seed",
                                           "methods", "ci_methods", "rho", "t_dof", "point_mass"};
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "config: expected a JSON object");
  std::string unknown;
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
  }
  if (!unknown.empty()) throw Error(ErrorCode::ParseError, "config: unknown keys: " + unknown);

  ExperimentConfig cfg;
  try {
    if (j.contains("family")) {
      const auto name = j.at("family").get<std::string>();
      const auto f = parse_family(name);
      if (!f) throw Error(ErrorCode::ParseError, "config: unknown family '" + name + "'");
      cfg.family = *f;
    }
    if (j.contains("p_list")) cfg.p_list = j.at("p_list").get<std::vector<std::size_t>>();
    if (j.contains("n")) cfg.n = j.at("n").get<std::size_t>();
    if (j.contains("reps")) cfg.reps = j.at("reps").get<std::size_t>();
    if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("rho")) cfg.rho = j.at("rho").get<double>();
    if (j.contains("t_dof")) cfg.t_dof = j.at("t_dof").get<int>();
    if (j.contains("point_mass")) cfg.point_mass = j.at("point_mass").get<double>();
    if (j.contains("methods")) {
      cfg.methods = parse_list<Estimator>(j.at("methods"), "methods", parse_estimator);
    }
    if (j.contains("ci_methods")) {
      cfg.ci_methods = parse_list<CiMethod>(j.at("ci_methods"), "ci_methods", parse_ci_method);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

}  // namespace

std::string_view to_string(Family f) noexcept {
  for (const auto& [v, name] : kFamilyNames) {
    if (v == f) return name;
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
  for (const auto& [v, n] : kFamilyNames) {
    if (n == name) return v;
  }
  return std::nullopt;
}

std::string_view to_string(Estimator e) noexcept {
  for (const auto& [v, name] : kEstimatorNames) {
    if (v == e) return name;
  }
  return "unknown";
}

std::optional<Estimator> parse_estimator(std::string_view name) noexcept {
  for (const auto& [v, n] : kEstimatorNames) {
    if (n == name) return v;
  }
  return std::nullopt;
}

void validate(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidParameter, "config: " + msg); };
  if (cfg.p_list.empty()) fail("p_list must be nonempty");
  for (std::size_t p : cfg.p_list) {
    if (p < 1) fail("every p must be >= 1");
  }
  if (cfg.n < 1) fail("n must be >= 1");
  if (cfg.reps < 1) fail("reps must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) fail("alpha must be in (0, 1)");
  if (!(std::abs(cfg.rho) < 1.0)) fail("|rho| must be < 1");
  if (cfg.family == Family::StudentT && cfg.t_dof <= 8) fail("t_dof must be > 8");
  if (cfg.family == Family::PointMass && !(cfg.point_mass >= 0.0 && std::isfinite(cfg.point_mass))) {
    fail("point_mass must be finite and >= 0");
  }
}

XiLaw make_law(const ExperimentConfig& cfg, std::size_t p) {
  switch (cfg.family) {
    case Family::Normal: return ChiSquared{p};
    case Family::Kotz: return KotzHalf{p};
    case Family::StudentT: return ScaledF{p, cfg.t_dof};
    case Family::Laplace: return ExpChiProduct{p};
    case Family::PointMass: return PointMass{p, cfg.point_mass};
  }
  throw Error(ErrorCode::InvalidParameter, "unknown family");
}

ExperimentConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  return config_from_object(j);
}

std::vector<ExperimentConfig> configs_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  std::vector<ExperimentConfig> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(config_from_object(item));
  } else {
    out.push_back(config_from_object(j));
  }
  return out;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["family"] = std::string(to_string(cfg.family));
  j["p_list"] = cfg.p_list;
  j["n"] = cfg.n;
  j["reps"] = cfg.reps;
  j["alpha"] = cfg.alpha;
  j["seed"] = cfg.seed;
  j["rho"] = cfg.rho;
  json methods = json::array();
  for (auto m : cfg.methods) methods.push_back(std::string(to_string(m)));
  j["methods"] = methods;
  json ci = json::array();
  for (auto m : cfg.ci_methods) ci.push_back(std::string(to_string(m)));
  j["ci_methods"] = ci;
  if (cfg.family == Family::StudentT) j["t_dof"] = cfg.t_dof;
  if (cfg.family == Family::PointMass) j["point_mass"] = cfg.point_mass;
  return j.dump(2);
}

std::vector<ExperimentConfig> preset(std::string_view name) {
  constexpr std::array<Family, 4> families{Family::Normal, Family::Kotz, Family::StudentT, Family::Laplace};
  std::vector<ExperimentConfig> out;
  if (name == "table1-desk") {
    for (Family f : families) {
      ExperimentConfig cfg;
      cfg.family = f;
      cfg.p_list = {100, 200, 400, 800, 1600};
      cfg.reps = 200;
      cfg.methods = {Estimator::ThetaHat, Estimator::Oracle, Estimator::WLPlugin};
      out.push_back(cfg);
    }
  } else if (name == "table2-desk") {
    for (Family f : families) {
      ExperimentConfig cfg;
      cfg.family = f;
      cfg.p_list = {100, 200, 400, 800, 1600};
      cfg.reps = 500;
      switch (f) {
        case Family::Normal: cfg.ci_methods = {CiMethod::Example1Delta, CiMethod::GeneralCaseI}; break;
        case Family::Kotz: cfg.ci_methods = {CiMethod::KotzTau4, CiMethod::GeneralCaseI}; break;
        case Family::StudentT: cfg.ci_methods = {CiMethod::StudentT, CiMethod::GeneralCaseII}; break;
        default: cfg.ci_methods = {CiMethod::Laplace, CiMethod::GeneralCaseII}; break;
      }
      out.push_back(cfg);
    }
  } else {
    throw Error(ErrorCode::InvalidParameter, "unknown preset '" + std::string(name) + "'");
  }
  return out;
}

std::uint64_t replication_seed(std::uint64_t master, Family family, std::size_t p,
                               std::size_t rep) noexcept {
  return derive_seed(master, {static_cast<std::uint64_t>(family), static_cast<std::uint64_t>(p),
                              static_cast<std::uint64_t>(rep)});
}

std::vector<EstimationReplicate> run_estimation_replications(const ExperimentConfig& cfg, std::size_t p,
                                                             const RunOptions& opts) {
  validate(cfg);
  const EllipticalSpec spec = EllipticalSpec::toeplitz(make_law(cfg, p), cfg.rho);
  const bool need_oracle =
      std::find(cfg.methods.begin(), cfg.methods.end(), Estimator::Oracle) != cfg.methods.end();
  std::optional<OracleEstimator> oracle;
  if (need_oracle) oracle.emplace(spec.mu(), spec.sigma());

  std::vector<EstimationReplicate> out(cfg.reps);
  parallel_for(cfg.reps, opts.threads, [&](std::size_t r) {
    Rng rng(replication_seed(cfg.seed, cfg.family, p, r));
    const DataMatrix x = sample_data(spec, cfg.n, rng);
    EstimationReplicate rep;
    rep.values.reserve(cfg.methods.size());
    for (Estimator m : cfg.methods) {
      try {
        switch (m) {
          case Estimator::ThetaHat: rep.values.emplace_back(estimate_kurtosis(x).theta_hat); break;
          case Estimator::Oracle: rep.values.emplace_back((*oracle)(x)); break;
          case Estimator::WLPlugin: rep.values.emplace_back(wl_theta(x)); break;
        }
      } catch (const Error&) {
        rep.values.emplace_back(std::nullopt);
      }
    }
    out[r] = std::move(rep);
  });
  return out;
}

std::vector<CoverageReplicate> run_coverage_replications(const ExperimentConfig& cfg, std::size_t p,
                                                         const RunOptions& opts) {
  validate(cfg);
  if (cfg.ci_methods.empty()) throw Error(ErrorCode::InvalidParameter, "config: ci_methods must be nonempty");
  const EllipticalSpec spec = EllipticalSpec::toeplitz(make_law(cfg, p), cfg.rho);

  std::vector<CoverageReplicate> out(cfg.reps);
  parallel_for(cfg.reps, opts.threads, [&](std::size_t r) {
    Rng rng(replication_seed(cfg.seed, cfg.family, p, r));
    const DataMatrix x = sample_data(spec, cfg.n, rng);
    CoverageReplicate rep;
    rep.intervals.assign(cfg.ci_methods.size(), std::nullopt);
    std::optional<KurtosisEstimate> est;
    try {
      est = estimate_kurtosis(x);
    } catch (const Error&) {
    }
    if (est) {
      rep.theta_hat = est->theta_hat;
      CiInputs aux;
      aux.data = &x;
      for (std::size_t k = 0; k < cfg.ci_methods.size(); ++k) {
        try {
          rep.intervals[k] = confidence_interval(*est, cfg.ci_methods[k], cfg.alpha, aux);
        } catch (const Error&) {
        }
      }
    }
    out[r] = std::move(rep);
  });
  return out;
}

std::vector<SummaryRow> run_estimation_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  validate(cfg);
  std::vector<SummaryRow> rows;
  for (std::size_t p : cfg.p_list) {
    const auto reps = run_estimation_replications(cfg, p, opts);
    for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
      std::vector<double> values;
      for (const auto& rep : reps) {
        if (rep.values[k]) values.push_back(*rep.values[k]);
      }
      const Aggregate a = aggregate(values);
      SummaryRow row;
      row.family = std::string(to_string(cfg.family));
      row.p = p;
      row.n = cfg.n;
      row.method = std::string(to_string(cfg.methods[k]));
      row.mean = a.mean;
      row.sd = a.sd;
      row.reps_used = values.size();
      row.failures = reps.size() - values.size();
      row.degenerate_aggregate = a.degenerate;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<SummaryRow> run_coverage_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  validate(cfg);
  std::vector<SummaryRow> rows;
  for (std::size_t p : cfg.p_list) {
    const double theta = true_theta(make_law(cfg, p));
    const auto reps = run_coverage_replications(cfg, p, opts);
    for (std::size_t k = 0; k < cfg.ci_methods.size(); ++k) {
      std::vector<double> thetas;
      std::size_t covered = 0;
      double width_sum = 0.0;
      for (const auto& rep : reps) {
        const auto& ci = rep.intervals[k];
        if (!ci) continue;
        thetas.push_back(ci->theta_hat);
        if (ci->contains(theta)) ++covered;
        width_sum += ci->width();
      }
      const Aggregate a = aggregate(thetas);
      SummaryRow row;
      row.family = std::string(to_string(cfg.family));
      row.p = p;
      row.n = cfg.n;
      row.method = std::string(to_string(cfg.ci_methods[k]));
      row.mean = a.mean;
      row.sd = a.sd;
      row.reps_used = thetas.size();
      row.failures = reps.size() - thetas.size();
      row.degenerate_aggregate = a.degenerate;
      if (!thetas.empty()) {
        row.ecp = static_cast<double>(covered) / static_cast<double>(thetas.size());
        row.avg_width = width_sum / static_cast<double>(thetas.size());
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.family << ',' << r.p << ',' << r.n << ',' << r.method << ',' << format_real(r.mean) << ','
        << format_real(r.sd) << ',' << format_real(r.ecp) << ',' << format_real(r.avg_width) << ','
        << r.reps_used << ',' << r.failures << '\n';
  }
}

void summarize_to_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  write_summary_csv(out, rows);
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

}  // namespace ellkurt
