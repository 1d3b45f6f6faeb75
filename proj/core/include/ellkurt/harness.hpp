#pragma once

#include "ellkurt/inference.hpp"
#include "ellkurt/models.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ellkurt {

enum class Family { Normal, Kotz, StudentT, Laplace, PointMass };

std::string_view to_string(Family f) noexcept;
std::optional<Family> parse_family(std::string_view name) noexcept;

enum class Estimator { ThetaHat, Oracle, WLPlugin };

std::string_view to_string(Estimator e) noexcept;
std::optional<Estimator> parse_estimator(std::string_view name) noexcept;

struct ExperimentConfig {
  Family family = Family::Normal;
  std::vector<std::size_t> p_list{100};
  std::size_t n = 100;
  std::size_t reps = 200;
  double alpha = 0.05;
  std::uint64_t seed = 20240601;
  std::vector<Estimator> methods;
  std::vector<CiMethod> ci_methods;
  double rho = 0.5;
  int t_dof = 9;             ///< StudentT only
  double point_mass = 0.0;   ///< PointMass only: the constant xi
};

/// Throws InvalidParameter on an inconsistent config.
void validate(const ExperimentConfig& cfg);

XiLaw make_law(const ExperimentConfig& cfg, std::size_t p);

/// Reads one config object. Unknown keys throw ParseError naming them.
ExperimentConfig config_from_json(std::string_view text);
/// Accepts either one object or an array of objects.
std::vector<ExperimentConfig> configs_from_json(std::string_view text);
std::string config_to_json(const ExperimentConfig& cfg);

/// Named desk-scale grids: "table1-desk" and "table2-desk".
std::vector<ExperimentConfig> preset(std::string_view name);

struct RunOptions {
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  std::size_t threads = 0;
};

/// Seed of the random stream for replication `rep` of (family, p).
std::uint64_t replication_seed(std::uint64_t master, Family family, std::size_t p,
                               std::size_t rep) noexcept;

/// One replication's estimates; nullopt marks a failed estimator.
struct EstimationReplicate {
  std::vector<std::optional<double>> values;  ///< aligned with cfg.methods
};

struct CoverageReplicate {
  std::optional<double> theta_hat;
  std::vector<std::optional<ConfidenceInterval>> intervals;  ///< aligned with cfg.ci_methods
};

std::vector<EstimationReplicate> run_estimation_replications(const ExperimentConfig& cfg,
                                                             std::size_t p,
                                                             const RunOptions& opts = {});
std::vector<CoverageReplicate> run_coverage_replications(const ExperimentConfig& cfg,
                                                         std::size_t p,
                                                         const RunOptions& opts = {});

struct SummaryRow {
  std::string family;
  std::size_t p = 0;
  std::size_t n = 0;
  std::string method;
  double mean = 0.0;
  double sd = 0.0;
  std::optional<double> ecp;
  std::optional<double> avg_width;
  std::size_t reps_used = 0;
  std::size_t failures = 0;
  /// Fewer than two usable replications: sd is 0 (one) or mean is NaN (none).
  bool degenerate_aggregate = false;
};

/// One row per (p, estimator), p outermost.
std::vector<SummaryRow> run_estimation_experiment(const ExperimentConfig& cfg,
                                                  const RunOptions& opts = {});
/// One row per (p, CI method). mean/sd describe theta_hat over the replications
/// that produced an interval.
std::vector<SummaryRow> run_coverage_experiment(const ExperimentConfig& cfg,
                                                const RunOptions& opts = {});

inline constexpr std::string_view kSummaryCsvHeader =
    "family,p,n,method,mean,sd,ecp,avg_width,reps_used,failures";

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
/// Throws Io if the file cannot be written.
void summarize_to_csv(const std::vector<SummaryRow>& rows, const std::string& path);

}  // namespace ellkurt
