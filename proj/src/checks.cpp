#include "latentcl/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "latentcl/estimators.hpp"
#include "latentcl/report.hpp"
#include "latentcl/risk.hpp"

namespace latentcl {

namespace {

// Experiment ids of the standalone checks; sweeps use 2 * point (+1).
// These sit far above any realistic grid size.
constexpr std::uint64_t kLemmaExperiment = 1u << 30;
constexpr std::uint64_t kGdExperiment = kLemmaExperiment + 1;
constexpr std::uint64_t kEquivLatentExperiment = kLemmaExperiment + 2;
constexpr std::uint64_t kEquivSurrogateExperiment = kLemmaExperiment + 3;
constexpr std::uint64_t kSingularExperiment = kLemmaExperiment + 4;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double relative_error(double value, double expected) {
  return std::abs(value - expected) / std::max(std::abs(expected), kAbsFloor);
}

CheckStatus status_of(bool passed) { return passed ? CheckStatus::pass : CheckStatus::fail; }

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

}  // namespace

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::skipped:
      return "skipped";
  }
  return "?";
}

Tolerances Tolerances::corrupted() const {
  Tolerances t = *this;
  t.identity = -identity;
  t.s_approx = -s_approx;
  t.gd = -gd;
  t.dual_path = -dual_path;
  t.mc_sigmas = -mc_sigmas;
  t.min_fraction = 1.0 + min_fraction;
  t.equivalence_sigmas = -equivalence_sigmas;
  t.min_spearman = 1.0 + min_spearman;
  t.ratio_shrink = -ratio_shrink;
  return t;
}

const std::vector<std::string>& all_check_ids() {
  static const std::vector<std::string> ids = {
      check_id::kLemmaIdentities, check_id::kGdOracle,    check_id::kDualPath,
      check_id::kMcConsistency,   check_id::kBounds,      check_id::kTrends,
      check_id::kEquivalence,     check_id::kSingularValues, check_id::kDeterminism};
  return ids;
}

CheckResult check_lemma_identities(std::uint64_t seed, const LemmaCheckOptions& options, const Tolerances& tol) {
  const Stopwatch clock;
  CheckResult out;
  out.id = check_id::kLemmaIdentities;
  if (options.configs == 0) {
    out.detail = "no configurations requested";
    return out;
  }

  double max_beta = 0.0, max_s = 0.0, max_null = 0.0;
  std::size_t axis = 0, rotated = 0;
  for (std::size_t i = 0; i < options.configs; ++i) {
    RngStream rng(seed, RngStream::trial_stream(kLemmaExperiment, i));
    ModelConfig cfg;
    cfg.d = 1 + std::min<Index>(options.max_d - 1, static_cast<Index>(rng.uniform() * options.max_d));
    const Index span = options.max_p - cfg.d + 1;
    cfg.p = cfg.d + std::min<Index>(span - 1, static_cast<Index>(rng.uniform() * span));
    cfg.n = cfg.d;
    cfg.gamma = std::pow(10.0, 3.0 * rng.uniform() - 2.0);
    const double theta_sq = options.theta_norm_sq ? *options.theta_norm_sq : std::pow(10.0, 2.0 * rng.uniform() - 1.0);
    const auto theta_seed = static_cast<std::uint64_t>(rng.uniform() * 9.007199254740992e15);
    cfg.theta = ModelConfig::make_theta(cfg.d, theta_sq, ThetaMode::random, theta_seed);
    cfg.w_mode = i % 2 == 0 ? WMode::axis_aligned : WMode::random_rotation;
    (cfg.w_mode == WMode::axis_aligned ? axis : rotated) += 1;
    cfg.validate();

    RngStream w_rng = rng.substream(1);
    const FeatureMap fm = build_feature_map(cfg, w_rng);
    const InducedParams induced = derive_induced(cfg, fm);
    const double pg = fm.signal_scale();

    const double expected_beta = pg / ((pg + 1.0) * (pg + 1.0)) * cfg.theta_sq();
    max_beta = std::max(max_beta, relative_error(induced.beta_star.squaredNorm(), expected_beta));

    // P_W from a pivoted QR of W, independent of the stored basis.
    const Matrix q = orthonormal_range(fm.W());
    const Matrix gap = fm.W() * fm.W().transpose() - pg * (q * q.transpose());
    max_s = std::max(max_s, gap.norm() / pg);

    const double r0 = analytic_risk(Vector::Zero(cfg.p), fm, induced);
    max_null = std::max(max_null, relative_error(r0, cfg.theta_sq()));
  }
  out.seconds = clock.seconds();
  const bool passed = max_beta <= tol.identity && max_s <= tol.s_approx && max_null <= tol.identity &&
                      out.seconds <= tol.lemma_seconds;
  out.status = status_of(passed);
  out.metrics = {{"configs", static_cast<double>(options.configs)},
                 {"axis_aligned", static_cast<double>(axis)},
                 {"random_rotation", static_cast<double>(rotated)},
                 {"max_rel_err_beta_norm", max_beta},
                 {"max_s_approx_over_pgamma", max_s},
                 {"max_rel_err_null_risk", max_null}};
  out.detail = "beta norm " + fmt(max_beta) + ", s-approx " + fmt(max_s) + ", null risk " + fmt(max_null) +
               " over " + std::to_string(options.configs) + " configs in " + fmt(out.seconds) + " s";
  return out;
}

CheckResult check_gd_oracle(std::uint64_t seed, const GdCheckOptions& options, const Tolerances& tol) {
  const Stopwatch clock;
  CheckResult out;
  out.id = check_id::kGdOracle;
  if (options.instances == 0) {
    out.detail = "no instances requested";
    return out;
  }
  ModelConfig cfg;
  cfg.d = options.d;
  cfg.n = options.n;
  cfg.p = options.p;
  cfg.gamma = options.gamma;
  cfg.theta = ModelConfig::make_theta(cfg.d, options.theta_norm_sq, ThetaMode::basis, 0);
  cfg.validate();

  double max_a = 0.0, max_ba = 0.0;
  long max_iters = 0;
  for (std::size_t i = 0; i < options.instances; ++i) {
    const RngStream rng(seed, RngStream::trial_stream(kGdExperiment, i));
    RngStream w_rng = rng.substream(1);
    RngStream data_rng = rng.substream(2);
    const FeatureMap fm = build_feature_map(cfg, w_rng);
    const TaskPair tp = sample_task_pair(cfg, fm, data_rng, RotationMode::dense);

    const EstimatorParams a = fit_task_a(tp);
    const EstimatorParams ba = fit_sequential(tp, a);
    const GdFit gd_a = run_gd(tp.X_A, tp.y, Vector::Zero(cfg.p));
    const GdFit gd_ba = run_gd(tp.X_B, tp.y, gd_a.params.beta_hat);
    max_a = std::max(max_a, relative_gap(gd_a.params.beta_hat, a.beta_hat));
    max_ba = std::max(max_ba, relative_gap(gd_ba.params.beta_hat, ba.beta_hat));
    max_iters = std::max({max_iters, gd_a.iterations, gd_ba.iterations});
  }
  out.seconds = clock.seconds();
  out.status = status_of(max_a <= tol.gd && max_ba <= tol.gd && out.seconds <= tol.gd_seconds);
  out.metrics = {{"instances", static_cast<double>(options.instances)},
                 {"max_rel_gap_task_a", max_a},
                 {"max_rel_gap_sequential", max_ba},
                 {"max_gd_iterations", static_cast<double>(max_iters)}};
  out.detail = "task A " + fmt(max_a) + ", sequential " + fmt(max_ba) + " over " +
               std::to_string(options.instances) + " instances in " + fmt(out.seconds) + " s";
  return out;
}

CheckResult check_dual_path(const std::vector<TrialRecord>& records, const Tolerances& tol) {
  CheckResult out;
  out.id = check_id::kDualPath;
  if (records.empty()) {
    out.detail = "no trials";
    return out;
  }
  std::size_t failed = 0, over = 0;
  double max_gap = 0.0;
  for (const TrialRecord& r : records) {
    if (r.failed) {
      ++failed;
      continue;
    }
    max_gap = std::max(max_gap, r.dual_path_gap);
    if (!(r.dual_path_gap <= tol.dual_path)) ++over;
  }
  out.status = status_of(failed == 0 && over == 0);
  out.metrics = {{"trials", static_cast<double>(records.size())},
                 {"failed_trials", static_cast<double>(failed)},
                 {"trials_over_tolerance", static_cast<double>(over)},
                 {"max_rel_gap", max_gap}};
  out.detail = "max gap " + fmt(max_gap) + " over " + std::to_string(records.size()) + " trials, " +
               std::to_string(failed) + " failed";
  return out;
}

CheckResult check_mc_consistency(const AggregateReport& report, const Tolerances& tol) {
  CheckResult out;
  out.id = check_id::kMcConsistency;
  std::size_t pairs = 0, within = 0;
  for (const PointAggregate& pt : report.points) {
    pairs += pt.mc_pairs;
    within += pt.mc_within;
  }
  if (pairs == 0) {
    out.detail = "no (trial, estimator) pairs";
    return out;
  }
  // Aggregates count pairs at 3 se; other multiples are not re-derivable from them.
  const double fraction = static_cast<double>(within) / static_cast<double>(pairs);
  out.status = status_of(tol.mc_sigmas >= 3.0 && fraction >= tol.min_fraction);
  out.metrics = {{"pairs", static_cast<double>(pairs)},
                 {"within_3se", static_cast<double>(within)},
                 {"fraction", fraction}};
  out.detail = std::to_string(within) + "/" + std::to_string(pairs) + " pairs within 3 SE (" +
               fmt(100.0 * fraction) + "%)";
  return out;
}

CheckResult check_bound_satisfaction(const AggregateReport& report, const Tolerances& tol) {
  CheckResult out;
  out.id = check_id::kBounds;
  BoundFrequency total[5];
  const char* names[] = {"single", "terminal", "forgetting", "ratio", "projection"};
  std::size_t points = 0;
  for (const PointAggregate& pt : report.points) {
    if (!pt.premise_ok) continue;
    ++points;
    const BoundFrequency* f[] = {&pt.single, &pt.terminal, &pt.forgetting_bound, &pt.ratio_bound, &pt.projection};
    for (int i = 0; i < 5; ++i) {
      total[i].satisfied += f[i]->satisfied;
      total[i].applicable += f[i]->applicable;
    }
  }
  if (points == 0) {
    out.detail = "no grid point satisfies the theorem premises";
    return out;
  }
  bool passed = true;
  std::string detail;
  for (int i = 0; i < 5; ++i) {
    const auto freq = total[i].frequency();
    out.metrics.emplace_back(std::string("applicable_") + names[i], static_cast<double>(total[i].applicable));
    out.metrics.emplace_back(std::string("frequency_") + names[i], freq ? *freq : std::nan(""));
    if (!detail.empty()) detail += ", ";
    detail += names[i];
    detail += ' ';
    if (freq) {
      detail += std::to_string(total[i].satisfied) + "/" + std::to_string(total[i].applicable);
      passed = passed && *freq >= tol.min_fraction;
    } else if (i == 3) {
      // The ratio bound is only claimed where its denominator is positive.
      detail += "undefined on every trial";
    } else {
      detail += "no applicable trials";
      passed = false;
    }
  }
  out.status = status_of(passed);
  out.detail = detail;
  return out;
}

CheckResult check_trends(const AggregateReport& report, const Tolerances& tol) {
  CheckResult out;
  out.id = check_id::kTrends;
  using Key = std::tuple<int, Index, Index, double, double>;
  std::map<Key, AggregateReport> slices;
  std::vector<Key> order;
  for (const PointAggregate& pt : report.points) {
    const Key key{static_cast<int>(pt.variant), pt.d, pt.n, pt.gamma, pt.theta_sq};
    auto [it, inserted] = slices.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.points.push_back(pt);
  }

  bool any = false, passed = true;
  std::string detail;
  for (const Key& key : order) {
    const AggregateReport& slice = slices.at(key);
    std::vector<Index> ps;
    for (const auto& pt : slice.points) ps.push_back(pt.p);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    if (ps.size() < 4) continue;
    any = true;
    const ModelVariant variant = slice.points.front().variant;
    std::string prefix = to_string(variant) + "/d=" + std::to_string(std::get<1>(key)) +
                         "/n=" + std::to_string(std::get<2>(key)) + "/gamma=" + fmt(std::get<3>(key)) + ":";
    if (!detail.empty()) detail += "; ";
    detail += prefix;
    for (const char* metric : {"r_a", "r_ba", "ratio"}) {
      TrendResult tr;
      try {
        tr = trend_check(slice, metric, "p", TrendDirection::decreasing, tol.min_spearman, variant);
      } catch (const std::invalid_argument&) {
        tr = TrendResult{false, std::nan(""), 0};
      }
      passed = passed && tr.passed;
      out.metrics.emplace_back(prefix + "spearman_" + metric, tr.spearman);
      detail += std::string(" ") + metric + " rho=" + fmt(tr.spearman);
    }
    double lo = std::nan(""), hi = std::nan("");
    for (const auto& pt : slice.points) {
      if (pt.p == ps.front()) lo = pt.ratio.median;
      if (pt.p == ps.back()) hi = pt.ratio.median;
    }
    const double shrink = hi / lo;
    const bool halved = std::isfinite(shrink) && hi < tol.ratio_shrink * lo;
    passed = passed && halved;
    out.metrics.emplace_back(prefix + "ratio_largest_over_smallest_p", shrink);
    detail += " ratio(p=" + std::to_string(ps.back()) + ")/ratio(p=" + std::to_string(ps.front()) + ")=" + fmt(shrink);
  }
  if (!any) {
    out.detail = "no slice of the grid has 4 or more p values";
    return out;
  }
  out.status = status_of(passed);
  out.detail = detail;
  return out;
}

CheckResult check_model_equivalence(std::uint64_t seed, const EquivalenceCheckOptions& options,
                                    const Tolerances& tol) {
  const Stopwatch clock;
  CheckResult out;
  out.id = check_id::kEquivalence;
  if (options.trials < 2) {
    out.detail = "needs at least 2 trials per variant";
    return out;
  }
  ModelConfig cfg;
  cfg.d = options.d;
  cfg.n = options.n;
  cfg.p = options.p;
  cfg.gamma = options.gamma;
  cfg.theta = ModelConfig::make_theta(cfg.d, options.theta_norm_sq, ThetaMode::basis, 0);
  cfg.validate();

  std::vector<double> latent, surrogate;
  for (std::size_t t = 0; t < options.trials; ++t) {
    {
      const RngStream rng(seed, RngStream::trial_stream(kEquivLatentExperiment, t));
      RngStream w_rng = rng.substream(1);
      RngStream data_rng = rng.substream(2);
      const FeatureMap fm = build_feature_map(cfg, w_rng);
      const TaskPair tp = sample_task_pair(cfg, fm, data_rng, RotationMode::identity);
      latent.push_back(analytic_risk(fit_task_a(tp), fm, derive_induced(cfg, fm)));
    }
    {
      const RngStream rng(seed, RngStream::trial_stream(kEquivSurrogateExperiment, t));
      RngStream w_rng = rng.substream(1);
      RngStream data_rng = rng.substream(2);
      const FeatureMap fm = build_feature_map(cfg, w_rng);
      const TaskPair tp = pair_from_surrogate(sample_surrogate(cfg, fm, data_rng), fm, data_rng,
                                              RotationMode::identity);
      surrogate.push_back(analytic_risk(fit_task_a(tp), fm, derive_induced(cfg, fm)));
    }
  }
  const MetricSummary a = summarize(latent);
  const MetricSummary b = summarize(surrogate);
  const double combined = std::sqrt(a.se * a.se + b.se * b.se);
  const double diff = std::abs(a.mean - b.mean);
  out.seconds = clock.seconds();
  out.status = status_of(diff <= tol.equivalence_sigmas * combined);
  out.metrics = {{"trials_per_variant", static_cast<double>(options.trials)},
                 {"mean_latent", a.mean},
                 {"se_latent", a.se},
                 {"mean_surrogate", b.mean},
                 {"se_surrogate", b.se},
                 {"z", combined > 0.0 ? diff / combined : std::nan("")}};
  out.detail = "latent " + fmt(a.mean) + " +- " + fmt(a.se) + ", surrogate " + fmt(b.mean) + " +- " + fmt(b.se) +
               ", |diff| = " + fmt(combined > 0.0 ? diff / combined : 0.0) + " combined SE";
  return out;
}

CheckResult check_singular_values(std::uint64_t seed, const SingularValueCheckOptions& options,
                                  const Tolerances& tol) {
  const Stopwatch clock;
  CheckResult out;
  out.id = check_id::kSingularValues;
  if (options.trials == 0) {
    out.detail = "no trials requested";
    return out;
  }
  ModelConfig cfg;
  cfg.d = options.d;
  cfg.n = options.n;
  cfg.p = 2 * options.n;
  cfg.gamma = options.gamma;
  cfg.theta = ModelConfig::make_theta(cfg.d, 1.0, ThetaMode::basis, 0);
  cfg.w_mode = WMode::axis_aligned;
  cfg.validate();

  const double root_n = std::sqrt(static_cast<double>(cfg.n));
  const double slack = 2.0 * std::sqrt(static_cast<double>(cfg.d));
  const double lo = root_n - slack, hi = root_n + slack;
  std::size_t inside = 0;
  double smin = std::numeric_limits<double>::infinity(), smax = 0.0;
  for (std::size_t t = 0; t < options.trials; ++t) {
    const RngStream rng(seed, RngStream::trial_stream(kSingularExperiment, t));
    RngStream w_rng = rng.substream(1);
    RngStream data_rng = rng.substream(2);
    const FeatureMap fm = build_feature_map(cfg, w_rng);
    const SurrogateTask task = sample_surrogate(cfg, fm, data_rng);
    const Matrix block = task.A.leftCols(cfg.d) / std::sqrt(fm.signal_scale() + 1.0);
    const Vector s = svd(block).s;
    const double top = s.maxCoeff(), bottom = s.minCoeff();
    smin = std::min(smin, bottom);
    smax = std::max(smax, top);
    if (bottom >= lo && top <= hi) ++inside;
  }
  const double fraction = static_cast<double>(inside) / static_cast<double>(options.trials);
  out.seconds = clock.seconds();
  out.status = status_of(fraction >= tol.min_fraction);
  out.metrics = {{"trials", static_cast<double>(options.trials)},
                 {"window_low", lo},
                 {"window_high", hi},
                 {"min_singular_value", smin},
                 {"max_singular_value", smax},
                 {"fraction_inside", fraction}};
  out.detail = std::to_string(inside) + "/" + std::to_string(options.trials) + " trials inside [" + fmt(lo) + ", " +
               fmt(hi) + "], observed range [" + fmt(smin) + ", " + fmt(smax) + "]";
  return out;
}

CheckResult check_determinism(const std::string& first, const std::string& second) {
  CheckResult out;
  out.id = check_id::kDeterminism;
  if (first == second) {
    out.status = CheckStatus::pass;
    out.detail = "records.csv byte-identical (" + std::to_string(first.size()) + " bytes)";
    out.metrics = {{"bytes", static_cast<double>(first.size())}, {"first_difference_line", 0.0}};
    return out;
  }
  std::size_t line = 1;
  const std::size_t n = std::min(first.size(), second.size());
  for (std::size_t i = 0; i < n && first[i] == second[i]; ++i) line += first[i] == '\n' ? 1 : 0;
  out.status = CheckStatus::fail;
  out.detail = "records.csv differs from line " + std::to_string(line);
  out.metrics = {{"bytes", static_cast<double>(first.size())}, {"first_difference_line", static_cast<double>(line)}};
  return out;
}

CheckResult check_determinism_sample(const SweepSpec& spec, const std::vector<TrialRecord>& records,
                                     std::size_t per_point) {
  const Stopwatch clock;
  CheckResult out;
  out.id = check_id::kDeterminism;
  const std::vector<ModelVariant> variants = spec.variants();
  const std::size_t trials = spec.trials_per_point;
  if (records.size() != variants.size() * spec.grid.size() * trials) {
    out.status = CheckStatus::fail;
    out.detail = "record count does not match the sweep specification";
    return out;
  }
  const std::size_t take = std::min(per_point, trials);
  if (take == 0) {
    out.detail = "determinism sample disabled";
    return out;
  }
  TrialOptions options;
  options.rotation = spec.rotation;
  options.sampler = spec.sampler;
  options.n_test = spec.n_test;
  std::size_t compared = 0, mismatched = 0;
  for (std::size_t v = 0; v < variants.size(); ++v) {
    options.variant = variants[v];
    for (std::size_t point = 0; point < spec.grid.size(); ++point) {
      for (std::size_t t = 0; t < take; ++t) {
        TrialRecord again = run_trial(spec.grid[point], trial_stream(spec, point, variants[v], t), options);
        again.point = point;
        const TrialRecord& original = records[(v * spec.grid.size() + point) * trials + t];
        ++compared;
        if (record_row(again) != record_row(original)) ++mismatched;
      }
    }
  }
  out.seconds = clock.seconds();
  out.status = status_of(mismatched == 0);
  out.metrics = {{"rerun_trials", static_cast<double>(compared)}, {"mismatched", static_cast<double>(mismatched)}};
  out.detail = std::to_string(compared - mismatched) + "/" + std::to_string(compared) +
               " re-run trials reproduce their records.csv rows byte for byte";
  return out;
}

}  // namespace latentcl

namespace latentcl {

CheckSelection CheckSelection::all() {
  CheckSelection s;
  for (const std::string& id : all_check_ids()) s.enabled[id] = true;
  return s;
}

bool CheckSelection::operator()(const std::string& id) const {
  const auto it = enabled.find(id);
  return it != enabled.end() && it->second;
}

bool SuiteResult::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok(); });
}

SuiteResult run_suite(const SuiteOptions& options) {
  options.spec.validate();
  SuiteResult out;
  const Tolerances& tol = options.tolerances;
  const std::uint64_t seed = options.spec.root_seed;
  std::map<std::string, CheckResult> done;
  const auto skipped = [](const std::string& id) {
    CheckResult r;
    r.id = id;
    r.detail = "disabled";
    return r;
  };

  const Stopwatch standalone;
  if (options.selection(check_id::kLemmaIdentities)) {
    done[check_id::kLemmaIdentities] = check_lemma_identities(seed, {}, tol);
  }
  if (options.selection(check_id::kGdOracle)) done[check_id::kGdOracle] = check_gd_oracle(seed, {}, tol);
  if (options.selection(check_id::kEquivalence)) {
    done[check_id::kEquivalence] = check_model_equivalence(seed, {}, tol);
  }
  if (options.selection(check_id::kSingularValues)) {
    done[check_id::kSingularValues] = check_singular_values(seed, {}, tol);
  }
  out.checks_seconds = standalone.seconds();

  const Stopwatch sweep_clock;
  out.sweep = run_sweep(options.spec, options.threads, options.progress);
  out.records = records_csv(out.sweep.records);
  out.sweep_seconds = sweep_clock.seconds();

  const AggregateReport& report = out.sweep.report;
  if (options.selection(check_id::kDualPath)) done[check_id::kDualPath] = check_dual_path(out.sweep.records, tol);
  if (options.selection(check_id::kMcConsistency)) done[check_id::kMcConsistency] = check_mc_consistency(report, tol);
  if (options.selection(check_id::kBounds)) done[check_id::kBounds] = check_bound_satisfaction(report, tol);
  if (options.selection(check_id::kTrends)) done[check_id::kTrends] = check_trends(report, tol);
  if (options.selection(check_id::kDeterminism)) {
    const Stopwatch clock;
    CheckResult det;
    if (options.determinism_sample) {
      det = check_determinism_sample(options.spec, out.sweep.records, *options.determinism_sample);
    } else {
      const SweepResult again = run_sweep(options.spec, options.rerun_threads);
      det = check_determinism(out.records, records_csv(again.records));
      det.detail += " across " + std::to_string(options.threads) + " and " + std::to_string(options.rerun_threads) +
                    " workers";
    }
    det.seconds = clock.seconds();
    done[check_id::kDeterminism] = det;
  }

  for (const std::string& id : all_check_ids()) {
    const auto it = done.find(id);
    out.checks.push_back(it == done.end() ? skipped(id) : it->second);
  }
  return out;
}

}  // namespace latentcl
