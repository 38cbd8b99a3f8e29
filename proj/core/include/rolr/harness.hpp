#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rolr/learner.hpp"
#include "rolr/losses.hpp"
#include "rolr/metrics.hpp"
#include "rolr/problems.hpp"
#include "rolr/theory.hpp"

namespace rolr {

/// Invalid or unreadable experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScheduleKind { l2, rkhs, manual };
enum class KernelKind { spectral, gaussian };

std::string_view to_string(ScheduleKind s);

struct LossSpec {
  std::string name = "welsch";
  double tukey_c = 1.0;
  bool identity_half_scale = false;

  WindowingFunction make() const;
};

struct ExperimentConfig {
  ProblemParams problem;
  /// Declared capacity; must satisfy beta * gamma > 1 for power-law spectra.
  std::optional<double> beta;

  KernelKind kernel = KernelKind::spectral;
  double gaussian_bandwidth = 0.1;

  LossSpec loss;

  ScheduleKind schedule = ScheduleKind::l2;
  /// Defaults to min_eta0(loss, kappa).
  std::optional<double> eta0;
  /// Manual schedule: eta = eta * T^{-eta_exponent}.
  double manual_eta = 0.0;
  double manual_eta_exponent = 0.0;
  /// Manual: required. Theorem schedules: optional override, must be >= sigma_min.
  std::optional<double> sigma;

  std::vector<std::size_t> T_grid;
  std::size_t seeds = 20;
  std::uint64_t base_seed = 1;

  Representation representation = Representation::feature;
  bool baselines = false;
  bool check_bounds = true;
  /// 0 means hardware concurrency.
  std::size_t threads = 0;
  std::string output;
  EvalOptions eval;
};

/// Parses a JSON document. Unknown keys are rejected. Throws ConfigError.
ExperimentConfig parse_config(std::string_view json_text);
/// Reads and parses a JSON file. Throws ConfigError if it cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);
/// Throws ConfigError when an invariant of the configuration is violated.
void validate(const ExperimentConfig& config);

/// eta and sigma that a cell with sample size T will use.
Schedule resolve_schedule(const ExperimentConfig& config, const WindowingFunction& loss,
                          double kappa, std::size_t T);
double resolve_eta0(const ExperimentConfig& config, const WindowingFunction& loss, double kappa);

struct CellResult {
  std::size_t T = 0;
  std::size_t seed_index = 0;
  std::uint64_t seed = 0;
  std::string learner;  // online | online_ls | batch_gd
  std::string loss;
  std::string schedule;
  double eta = 0.0;
  double sigma = 0.0;
  ErrorReport errors;
  bool diverged = false;
  std::string message;
  /// Worst per-step bound records of this cell (online learner only).
  std::vector<BoundCheckRecord> bounds;
};

struct AggregateRow {
  std::size_t T = 0;
  std::string learner;
  std::size_t n_ok = 0;
  double mean_l2 = 0.0;
  double se_l2 = 0.0;
  double median_l2 = 0.0;
  double mean_rkhs = 0.0;
  double se_rkhs = 0.0;
  double median_rkhs = 0.0;
  double mean_excess = 0.0;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// OLS of log(error) on log(T). Needs at least three points, all positive.
/// Throws std::invalid_argument otherwise.
RateFit fit_rate(std::span<const std::pair<double, double>> points);

struct SlopeRow {
  std::string target;  // l2 | rkhs
  std::string learner;
  bool fitted = false;
  RateFit fit;
  double theory_slope = 0.0;  // NaN when no theorem applies
  std::string note;
};

struct ExperimentResult {
  std::vector<CellResult> cells;
  std::vector<AggregateRow> aggregates;
  std::vector<SlopeRow> slopes;
  /// Per-cell worst records plus per-T theorem and step-size records.
  std::vector<BoundCheckRecord> bounds;
  bool bounds_passed = true;

  const AggregateRow* aggregate(std::size_t T, std::string_view learner = "online") const;
  const SlopeRow* slope(std::string_view target, std::string_view learner = "online") const;
};

/// Builds the problem once and runs every (T, seed) cell, in parallel when
/// threads != 1. Output is identical for any thread count.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// One (T, seed) cell with an explicit stream seed; used by the CLI.
std::vector<CellResult> run_cell(const ExperimentConfig& config, std::size_t T, std::uint64_t seed);

/// Sum in a fixed pairwise order, independent of how the inputs were produced.
double pairwise_sum(std::span<const double> v);

void write_results_csv(std::ostream& os, const ExperimentResult& result);
void write_aggregate_csv(std::ostream& os, const ExperimentResult& result);
void write_slopes_csv(std::ostream& os, const ExperimentResult& result);
void write_bounds_csv(std::ostream& os, std::span<const BoundCheckRecord> records);
/// results.csv, aggregate.csv, slopes.csv and bounds.csv under `dir` (created if needed).
void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace rolr
