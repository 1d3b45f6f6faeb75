#include "cli.hpp"

#include "ellkurt/csv_input.hpp"
#include "ellkurt/error.hpp"
#include "ellkurt/harness.hpp"
#include "ellkurt/inference.hpp"
#include "ellkurt/ustat.hpp"
#include "ellkurt/validation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ellkurt::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 20240601;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct EstimateArgs {
  std::string input;
  std::string ci;
  double alpha = 0.05;
  bool reference = false;
  std::string out_dir;
};

struct SimulateArgs {
  std::string config;
  std::string preset;
  std::string family = "normal";
  std::vector<std::size_t> p_list;
  std::size_t n = 100;
  std::size_t reps = 0;
  double alpha = 0.05;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::string> methods;
  std::vector<std::string> ci_methods;
  double rho = 0.5;
  int t_dof = 9;
  std::string out_dir = ".";
  std::size_t threads = 0;
  bool dry_run = false;
};

struct ValidateArgs {
  std::string suite;
  bool quick = false;
  std::uint64_t seed = 7;
};

std::vector<CiMethod> resolve_ci(const std::string& spec) {
  if (spec == "all") {
    return {CiMethod::Example1Delta, CiMethod::KotzTau4, CiMethod::StudentT,
            CiMethod::Laplace,       CiMethod::GeneralCaseI, CiMethod::GeneralCaseII};
  }
  const auto m = parse_ci_method(spec);
  if (!m) throw Error(ErrorCode::InvalidParameter, "unknown --ci value '" + spec + "'");
  return {*m};
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  const CsvData csv = read_data_csv_file(a.input);
  const DataMatrix& x = csv.data;
  const KurtosisEstimate est =
      estimate_kurtosis(x, a.reference ? UStatMethod::Reference : UStatMethod::Fast);
  const UStats& u = est.ustats;

  out << "n         " << u.n << '\n'
      << "p         " << u.p << '\n'
      << "T1        " << g17(u.t1) << '\n'
      << "T2        " << g17(u.t2) << '\n'
      << "T3        " << g17(u.t3) << '\n'
      << "theta_hat " << g17(est.theta_hat) << '\n';

  std::ostringstream csv_rows;
  csv_rows << "method,n,p,theta_hat,t1,t2,t3,lower,upper,level,sigma_hat\n";
  csv_rows << "point," << u.n << ',' << u.p << ',' << g17(est.theta_hat) << ',' << g17(u.t1) << ','
           << g17(u.t2) << ',' << g17(u.t3) << ",,,,\n";

  if (!a.ci.empty()) {
    CiInputs aux;
    aux.data = &x;
    out << "\n" << std::left << std::setw(18) << "interval" << std::setw(24) << "lower" << std::setw(24)
        << "upper" << "sigma_hat\n";
    for (CiMethod m : resolve_ci(a.ci)) {
      try {
        const ConfidenceInterval ci = confidence_interval(est, m, a.alpha, aux);
        out << std::setw(18) << to_string(m) << std::setw(24) << g17(ci.lower) << std::setw(24)
            << g17(ci.upper) << g17(ci.sigma_hat);
        if (ci.degenerate_variance) out << "  (negative variance estimate clamped to 0)";
        out << '\n';
        csv_rows << to_string(m) << ',' << u.n << ',' << u.p << ',' << g17(est.theta_hat) << ','
                 << g17(u.t1) << ',' << g17(u.t2) << ',' << g17(u.t3) << ',' << g17(ci.lower) << ','
                 << g17(ci.upper) << ',' << g17(ci.level) << ',' << g17(ci.sigma_hat) << '\n';
      } catch (const Error& e) {
        out << std::setw(18) << to_string(m) << "unavailable: " << e.what() << '\n';
      }
    }
    out << "level " << g6(1.0 - a.alpha) << '\n';
  }

  if (!a.out_dir.empty()) {
    std::filesystem::create_directories(a.out_dir);
    const std::string path = (std::filesystem::path(a.out_dir) / "estimate.csv").string();
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    f << csv_rows.str();
    out << "wrote " << path << '\n';
  }
  return kExitOk;
}

std::vector<ExperimentConfig> build_configs(const SimulateArgs& a) {
  std::vector<ExperimentConfig> cfgs;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw Error(ErrorCode::Io, "cannot open config '" + a.config + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    cfgs = configs_from_json(ss.str());
  } else if (!a.preset.empty()) {
    cfgs = preset(a.preset);
  } else {
    ExperimentConfig cfg;
    const auto fam = parse_family(a.family);
    if (!fam) throw Error(ErrorCode::InvalidParameter, "unknown --family '" + a.family + "'");
    cfg.family = *fam;
    if (!a.p_list.empty()) cfg.p_list = a.p_list;
    cfg.n = a.n;
    cfg.alpha = a.alpha;
    cfg.rho = a.rho;
    cfg.t_dof = a.t_dof;
    for (const auto& m : a.methods) {
      const auto e = parse_estimator(m);
      if (!e) throw Error(ErrorCode::InvalidParameter, "unknown --methods entry '" + m + "'");
      cfg.methods.push_back(*e);
    }
    for (const auto& m : a.ci_methods) {
      const auto c = parse_ci_method(m);
      if (!c) throw Error(ErrorCode::InvalidParameter, "unknown --ci entry '" + m + "'");
      cfg.ci_methods.push_back(*c);
    }
    if (cfg.methods.empty() && cfg.ci_methods.empty()) cfg.methods = {Estimator::ThetaHat};
    cfgs.push_back(cfg);
  }
  for (auto& cfg : cfgs) {
    if (a.reps > 0) cfg.reps = a.reps;
    if (a.config.empty()) cfg.seed = a.seed;
    validate(cfg);
  }
  return cfgs;
}

void print_rows(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << std::left << std::setw(12) << "family" << std::setw(7) << "p" << std::setw(6) << "n"
      << std::setw(17) << "method" << std::setw(12) << "mean" << std::setw(12) << "sd" << std::setw(9)
      << "ecp" << std::setw(12) << "avg_width" << "used/failed\n";
  for (const auto& r : rows) {
    out << std::setw(12) << r.family << std::setw(7) << r.p << std::setw(6) << r.n << std::setw(17)
        << r.method << std::setw(12) << g6(r.mean) << std::setw(12) << g6(r.sd) << std::setw(9)
        << (r.ecp ? g6(*r.ecp) : "-") << std::setw(12) << (r.avg_width ? g6(*r.avg_width) : "-")
        << r.reps_used << '/' << r.failures << (r.degenerate_aggregate ? "  *" : "") << '\n';
  }
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto cfgs = build_configs(a);
  out << "seed " << (cfgs.empty() ? a.seed : cfgs.front().seed) << '\n';
  if (a.dry_run) {
    out << "planned grid (dry run, nothing written):\n";
    for (const auto& cfg : cfgs) {
      out << "  family=" << to_string(cfg.family) << " n=" << cfg.n << " reps=" << cfg.reps << " p=";
      for (std::size_t k = 0; k < cfg.p_list.size(); ++k) out << (k ? "," : "") << cfg.p_list[k];
      out << " methods=";
      for (std::size_t k = 0; k < cfg.methods.size(); ++k) out << (k ? "," : "") << to_string(cfg.methods[k]);
      out << " ci=";
      for (std::size_t k = 0; k < cfg.ci_methods.size(); ++k) {
        out << (k ? "," : "") << to_string(cfg.ci_methods[k]);
      }
      out << '\n';
    }
    return kExitOk;
  }

  RunOptions opts;
  opts.threads = a.threads;
  std::vector<SummaryRow> estimation, coverage;
  for (const auto& cfg : cfgs) {
    if (!cfg.methods.empty()) {
      auto rows = run_estimation_experiment(cfg, opts);
      estimation.insert(estimation.end(), rows.begin(), rows.end());
    }
    if (!cfg.ci_methods.empty()) {
      auto rows = run_coverage_experiment(cfg, opts);
      coverage.insert(coverage.end(), rows.begin(), rows.end());
    }
  }

  std::filesystem::create_directories(a.out_dir);
  if (!estimation.empty()) {
    const auto path = (std::filesystem::path(a.out_dir) / "estimation.csv").string();
    summarize_to_csv(estimation, path);
    out << "\nestimation (" << path << ")\n";
    print_rows(out, estimation);
  }
  if (!coverage.empty()) {
    const auto path = (std::filesystem::path(a.out_dir) / "coverage.csv").string();
    summarize_to_csv(coverage, path);
    out << "\ncoverage (" << path << ")\n";
    print_rows(out, coverage);
  }
  return kExitOk;
}

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  ValidationOptions opts;
  opts.quick = a.quick;
  opts.seed = a.seed;
  std::vector<CheckResult> results;
  if (a.suite == "ustat" || a.suite == "all") {
    auto r = validate_ustat(opts);
    results.insert(results.end(), r.begin(), r.end());
  }
  if (a.suite == "moments" || a.suite == "all") {
    auto r = validate_moments(opts);
    results.insert(results.end(), r.begin(), r.end());
  }
  std::size_t failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << '\n';
    if (!r.passed) ++failed;
  }
  out << results.size() - failed << '/' << results.size() << " checks passed\n";
  return failed == 0 ? kExitOk : kExitValidationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kurtosis estimation for high-dimensional elliptical data", "ellkurt"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate theta from a CSV data file");
  estimate->add_option("--input,-i", est.input, "CSV file: rows are observations")->required();
  estimate->add_option("--ci", est.ci, "Interval: example1|kotz|t|laplace|case1|case2|all")
      ->check(CLI::IsMember({"example1", "kotz", "t", "laplace", "case1", "case2", "all"}));
  estimate->add_option("--alpha", est.alpha, "Significance level")->check(CLI::Range(1e-12, 1.0 - 1e-12));
  estimate->add_flag("--reference", est.reference, "Use the O(n^4 p) quadruple loop");
  estimate->add_option("--out-dir", est.out_dir, "Also write estimate.csv here");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run seeded estimation / coverage experiments");
  auto* cfg_opt = simulate->add_option("--config", sim.config, "JSON experiment config (object or array)");
  simulate->add_option("--preset", sim.preset, "table1-desk | table2-desk")
      ->check(CLI::IsMember({"table1-desk", "table2-desk"}))
      ->excludes(cfg_opt);
  simulate->add_option("--family", sim.family, "normal|kotz|t|laplace|point_mass");
  simulate->add_option("--p", sim.p_list, "Dimensions")->delimiter(',');
  simulate->add_option("--n", sim.n, "Sample size");
  simulate->add_option("--reps", sim.reps, "Replications (overrides config/preset)");
  simulate->add_option("--alpha", sim.alpha, "Significance level");
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--methods", sim.methods, "theta_hat,oracle,wl_plugin")->delimiter(',');
  simulate->add_option("--ci", sim.ci_methods, "Interval methods")->delimiter(',');
  simulate->add_option("--rho", sim.rho, "Toeplitz parameter");
  simulate->add_option("--t-dof", sim.t_dof, "Degrees of freedom for the t family");
  simulate->add_option("--out-dir", sim.out_dir, "Directory for estimation.csv / coverage.csv");
  simulate->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");
  simulate->add_flag("--dry-run", sim.dry_run, "Print the planned grid and exit");

  ValidateArgs val;
  auto* validate_cmd = app.add_subcommand("validate", "Run Monte Carlo and differential self-checks");
  validate_cmd->add_option("suite", val.suite, "moments | ustat | all")
      ->required()
      ->check(CLI::IsMember({"moments", "ustat", "all"}));
  validate_cmd->add_flag("--quick", val.quick, "Fewer Monte Carlo draws, wider bands");
  validate_cmd->add_option("--seed", val.seed, "Seed")->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (estimate->parsed()) return cmd_estimate(est, out);
    if (simulate->parsed()) return cmd_simulate(sim, out);
    if (validate_cmd->parsed()) return cmd_validate(val, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error (io-error): " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace ellkurt::cli
