#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latentcl/bounds.hpp"
#include "latentcl/model.hpp"
#include "latentcl/risk.hpp"

namespace latentcl {

struct TrialOptions {
  ModelVariant variant = ModelVariant::latent;
  RotationMode rotation = RotationMode::partial;
  RiskSampler sampler = RiskSampler::projected;
  Index n_test = 20000;
};

struct TrialRecord {
  ModelVariant variant = ModelVariant::latent;
  std::size_t point = 0;
  Index d = 0;
  Index n = 0;
  Index p = 0;
  double gamma = 0.0;
  double theta_sq = 0.0;
  std::uint64_t trial = 0;

  bool failed = false;
  std::string error;

  double r_a = 0.0;
  double r_ba = 0.0;
  double r_b_on_b = 0.0;
  double r_null = 0.0;
  double forgetting = 0.0;
  std::optional<double> ratio;
  double proj_energy = 0.0;
  double dual_path_gap = 0.0;

  EmpiricalRisk emp_a{0.0, 0.0};
  EmpiricalRisk emp_ba{0.0, 0.0};
  EmpiricalRisk emp_b_on_b{0.0, 0.0};
  EmpiricalRisk emp_null{0.0, 0.0};

  bool premise_ok = false;
  BoundFlags flags;

  /// Seconds spent in run_trial; never part of records.csv.
  double wall_time = 0.0;
};

/// One draw of the two-task problem: fits beta_A, beta_B and beta_BA, evaluates
/// analytic and Monte-Carlo risks (task A for beta_A, beta_BA and the null
/// predictor; task B for beta_B), the forgetting ratio, the energy of the first
/// W direction outside range(X_A^T), and the bound flags.
///
/// Numerical failures are caught and returned as a record with failed = true.
TrialRecord run_trial(const ModelConfig& cfg, const RngStream& rng, const TrialOptions& options = {});

enum class VariantSelection { latent, surrogate, both };

struct SweepSpec {
  std::vector<ModelConfig> grid;
  std::size_t trials_per_point = 200;
  Index n_test = 20000;
  std::uint64_t root_seed = 0;
  VariantSelection model_variant = VariantSelection::latent;
  RotationMode rotation = RotationMode::partial;
  RiskSampler sampler = RiskSampler::projected;

  /// Throws ConfigError on an empty grid, zero trials, n_test < 1000 or an invalid point.
  void validate() const;

  std::vector<ModelVariant> variants() const;
};

/// Stream of trial `trial` at grid point `point` under `variant`.
RngStream trial_stream(const SweepSpec& spec, std::size_t point, ModelVariant variant, std::uint64_t trial);

struct MetricSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double se = 0.0;
  double median = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
};

/// Mean, standard error, median and the 10% / 90% quantiles (linear interpolation
/// between order statistics). Empty input yields count 0 and NaN statistics.
MetricSummary summarize(std::vector<double> values);

struct BoundFrequency {
  std::size_t satisfied = 0;
  std::size_t applicable = 0;
  std::optional<double> frequency() const;
};

struct PointAggregate {
  ModelVariant variant = ModelVariant::latent;
  std::size_t point = 0;
  Index d = 0;
  Index n = 0;
  Index p = 0;
  double gamma = 0.0;
  double theta_sq = 0.0;
  bool premise_ok = false;

  std::size_t trials = 0;
  std::size_t failed = 0;
  /// More than 1% of the point's trials failed.
  bool flagged = false;

  MetricSummary r_a;
  MetricSummary r_ba;
  MetricSummary r_b_on_b;
  MetricSummary r_null;
  MetricSummary forgetting;
  MetricSummary ratio;
  MetricSummary proj_energy;
  std::size_t ratio_undefined = 0;

  BoundFrequency single;
  BoundFrequency terminal;
  BoundFrequency forgetting_bound;
  BoundFrequency ratio_bound;
  BoundFrequency projection;

  /// (trial, estimator) pairs with |empirical - analytic| <= 3 se.
  std::size_t mc_pairs = 0;
  std::size_t mc_within = 0;
  double max_dual_path_gap = 0.0;

  /// Summary by name: r_a, r_ba, r_b_on_b, r_null, forgetting, ratio, proj_energy.
  const MetricSummary& metric(std::string_view name) const;
  /// Axis value by name: d, n, p, gamma.
  double axis(std::string_view name) const;
};

struct AggregateReport {
  std::vector<PointAggregate> points;
};

/// Groups records by (variant, point) in first-appearance order and summarizes them.
AggregateReport aggregate(const std::vector<TrialRecord>& records);

struct SweepResult {
  std::vector<TrialRecord> records;
  AggregateReport report;
  double wall_time = 0.0;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every (variant, point, trial) on `threads` workers (0 = hardware
/// concurrency). Each trial draws only from its own stream, and records are
/// stored by job index, so the output does not depend on the schedule.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 1, const ProgressFn& progress = {});

enum class TrendDirection { decreasing, increasing };

struct TrendResult {
  bool passed = false;
  double spearman = 0.0;
  std::size_t points = 0;
};

/// Spearman rank correlation with average ranks for ties; 0 when either side is constant.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Correlates the metric median against the axis over the report's points of
/// `variant` (points with an undefined median are skipped). Passes when
/// rho <= -min_spearman (decreasing) or rho >= min_spearman (increasing).
/// Throws std::invalid_argument when fewer than 4 distinct axis values remain.
TrendResult trend_check(const AggregateReport& report, std::string_view metric, std::string_view axis,
                        TrendDirection direction, double min_spearman,
                        ModelVariant variant = ModelVariant::latent);

}  // namespace latentcl
