#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latentcl/experiments.hpp"

namespace latentcl {

enum class CheckStatus { pass, fail, skipped };

std::string to_string(CheckStatus status);

/// Outcome of one verification criterion. `id` is stable and is what
/// summary.json and the acceptance binary report.
struct CheckResult {
  std::string id;
  CheckStatus status = CheckStatus::skipped;
  std::string detail;
  std::vector<std::pair<std::string, double>> metrics;
  double seconds = 0.0;

  bool ok() const { return status != CheckStatus::fail; }
};

/// Thresholds of the verification suite. `scaled` shrinks every tolerance and
/// inflates every required fraction, which the CLI uses as a negative control.
struct Tolerances {
  double identity = 1e-10;
  double s_approx = 1e-8;
  double gd = 1e-6;
  double dual_path = 1e-8;
  double mc_sigmas = 3.0;
  double min_fraction = 0.99;
  double equivalence_sigmas = 3.0;
  double min_spearman = 0.9;
  double ratio_shrink = 0.5;
  double lemma_seconds = 10.0;
  double gd_seconds = 30.0;

  Tolerances corrupted() const;
};

namespace check_id {
inline constexpr const char* kLemmaIdentities = "lemma_identities";
inline constexpr const char* kGdOracle = "gd_closed_form_agreement";
inline constexpr const char* kDualPath = "sequential_dual_path";
inline constexpr const char* kMcConsistency = "mc_analytic_consistency";
inline constexpr const char* kBounds = "bound_satisfaction";
inline constexpr const char* kTrends = "overparameterization_trends";
inline constexpr const char* kEquivalence = "model_equivalence";
inline constexpr const char* kSingularValues = "singular_value_concentration";
inline constexpr const char* kDeterminism = "determinism";
}  // namespace check_id

/// All check ids in acceptance order.
const std::vector<std::string>& all_check_ids();

struct LemmaCheckOptions {
  std::size_t configs = 100;
  Index max_d = 20;
  Index max_p = 500;
  /// Fixed ||theta||^2; when unset each config draws one log-uniformly in [0.1, 10].
  std::optional<double> theta_norm_sq;
};

/// ||beta||^2 = p gamma / (p gamma + 1)^2 ||theta||^2, ||WW^T - p gamma P_W||_F <= 1e-8 p gamma
/// and R(0) = ||theta||^2 over random configs in both W modes.
CheckResult check_lemma_identities(std::uint64_t seed, const LemmaCheckOptions& options = {},
                                   const Tolerances& tol = {});

struct GdCheckOptions {
  std::size_t instances = 50;
  Index d = 3;
  Index n = 20;
  Index p = 60;
  double gamma = 1.0;
  double theta_norm_sq = 1.0;
};

/// Gradient descent from 0 on task A, then from its result on task B, against
/// fit_task_a and fit_sequential.
CheckResult check_gd_oracle(std::uint64_t seed, const GdCheckOptions& options = {}, const Tolerances& tol = {});

/// Every trial succeeded and its dual-path gap is within tolerance.
CheckResult check_dual_path(const std::vector<TrialRecord>& records, const Tolerances& tol = {});

/// Fraction of (trial, estimator) pairs with |empirical - analytic| <= 3 se.
CheckResult check_mc_consistency(const AggregateReport& report, const Tolerances& tol = {});

/// Per-bound satisfaction frequency over points whose premises hold.
CheckResult check_bound_satisfaction(const AggregateReport& report, const Tolerances& tol = {});

/// Median r_a, r_ba and ratio decrease in p (Spearman <= -0.9) and the median
/// ratio at the largest p is below half its value at the smallest p. Evaluated
/// for every (variant, d, n, gamma) slice with at least 4 p values.
CheckResult check_trends(const AggregateReport& report, const Tolerances& tol = {});

struct EquivalenceCheckOptions {
  std::size_t trials = 500;
  Index d = 5;
  Index n = 50;
  Index p = 1000;
  double gamma = 1.0;
  double theta_norm_sq = 1.0;
};

/// Mean R(beta_A) under the latent model and under the noise-on-responses model
/// agree within 3 combined standard errors.
CheckResult check_model_equivalence(std::uint64_t seed, const EquivalenceCheckOptions& options = {},
                                    const Tolerances& tol = {});

struct SingularValueCheckOptions {
  std::size_t trials = 500;
  Index d = 20;
  Index n = 400;
  double gamma = 1.0;
};

/// Singular values of the first d columns of A, scaled by 1 / sqrt(p gamma + 1),
/// lie in [sqrt(n) - 2 sqrt(d), sqrt(n) + 2 sqrt(d)]. A uses an axis-aligned W with p = 2n.
CheckResult check_singular_values(std::uint64_t seed, const SingularValueCheckOptions& options = {},
                                  const Tolerances& tol = {});

/// Byte-for-byte comparison of two records.csv renderings.
CheckResult check_determinism(const std::string& first, const std::string& second);

/// Re-runs the first `per_point` trials of every (variant, point) directly and
/// compares their serialized rows with those in `records`.
CheckResult check_determinism_sample(const SweepSpec& spec, const std::vector<TrialRecord>& records,
                                     std::size_t per_point);

/// Which criteria a suite run evaluates, keyed by check id.
struct CheckSelection {
  std::map<std::string, bool> enabled;

  /// Every check enabled.
  static CheckSelection all();
  bool operator()(const std::string& id) const;
};

struct SuiteOptions {
  SweepSpec spec;
  unsigned threads = 1;
  /// Worker count of the determinism re-run; differs from `threads` on purpose.
  unsigned rerun_threads = 2;
  /// Trials per point re-run for the determinism check; nullopt re-runs the whole sweep.
  std::optional<std::size_t> determinism_sample;
  CheckSelection selection = CheckSelection::all();
  Tolerances tolerances;
  ProgressFn progress;
};

struct SuiteResult {
  std::vector<CheckResult> checks;  ///< in all_check_ids() order, disabled checks skipped
  SweepResult sweep;
  std::string records;  ///< records.csv of the primary sweep
  double checks_seconds = 0.0;
  double sweep_seconds = 0.0;

  bool all_passed() const;
};

/// Runs the sweep and every selected criterion. The standalone checks draw from
/// spec.root_seed on experiment ids disjoint from the sweep's.
SuiteResult run_suite(const SuiteOptions& options);

}  // namespace latentcl
