#include "latentcl/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "latentcl/estimators.hpp"

namespace latentcl {

namespace {

// Substream lanes of a trial stream.
enum Lane : std::uint64_t {
  kLaneFeatureMap = 1,
  kLaneData = 2,
  kLaneTestA = 3,
  kLaneTestBA = 4,
  kLaneTestBOnB = 5,
  kLaneTestNull = 6,
};

bool within_band(const EmpiricalRisk& emp, double analytic) {
  return std::abs(emp.mean - analytic) <= 3.0 * emp.se + kAbsFloor * std::max(1.0, std::abs(analytic));
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw NumericalError(std::string("non-finite trial metric ") + name);
}

}  // namespace

TrialRecord run_trial(const ModelConfig& cfg, const RngStream& rng, const TrialOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();

  TrialRecord rec;
  rec.variant = options.variant;
  rec.d = cfg.d;
  rec.n = cfg.n;
  rec.p = cfg.p;
  rec.gamma = cfg.gamma;
  rec.theta_sq = cfg.theta_sq();
  rec.trial = rng.stream_index() & 0xffffffffULL;
  const BoundSheet sheet = make_bound_sheet(static_cast<double>(cfg.d), static_cast<double>(cfg.n),
                                            static_cast<double>(cfg.p), cfg.gamma, rec.theta_sq);
  rec.premise_ok = sheet.premise_ok;

  try {
    RngStream w_rng = rng.substream(kLaneFeatureMap);
    RngStream data_rng = rng.substream(kLaneData);
    const FeatureMap fm = build_feature_map(cfg, w_rng);
    const InducedParams induced = derive_induced(cfg, fm);
    const TaskPair tp = options.variant == ModelVariant::latent
                            ? sample_task_pair(cfg, fm, data_rng, options.rotation)
                            : pair_from_surrogate(sample_surrogate(cfg, fm, data_rng), fm, data_rng,
                                                  options.rotation);

    const EstimatorParams beta_a = fit_task_a(tp);
    const SequentialFit seq = fit_sequential_checked(tp, beta_a);
    const EstimatorParams zero = null_estimator(cfg.p);

    rec.r_a = analytic_risk(beta_a, fm, induced);
    rec.r_ba = analytic_risk(seq.sequential, fm, induced);
    rec.r_b_on_b = analytic_risk_task_b(seq.task_b, fm, tp.O, induced);
    rec.r_null = analytic_risk(zero, fm, induced);
    rec.dual_path_gap = seq.dual_path_gap;

    if (std::abs(rec.r_null - rec.theta_sq) > 1e-10 * std::max(rec.theta_sq, kAbsFloor)) {
      throw NumericalError("null risk differs from ||theta||^2");
    }

    rec.forgetting = forgetting(rec.r_ba, rec.r_a);
    rec.ratio = forgetting_ratio(rec.r_ba, rec.r_a, rec.r_null);
    rec.proj_energy = orth_projector_apply(tp.X_A, fm.basis().col(0)).residual.squaredNorm();

    RngStream test_a = rng.substream(kLaneTestA);
    RngStream test_ba = rng.substream(kLaneTestBA);
    RngStream test_b = rng.substream(kLaneTestBOnB);
    RngStream test_null = rng.substream(kLaneTestNull);
    rec.emp_a = empirical_risk(beta_a, cfg, fm, Task::a, tp.O, options.n_test, test_a, options.sampler);
    rec.emp_ba = empirical_risk(seq.sequential, cfg, fm, Task::a, tp.O, options.n_test, test_ba, options.sampler);
    rec.emp_b_on_b = empirical_risk(seq.task_b, cfg, fm, Task::b, tp.O, options.n_test, test_b, options.sampler);
    rec.emp_null = empirical_risk(zero, cfg, fm, Task::a, tp.O, options.n_test, test_null, options.sampler);

    for (const auto& [value, name] :
         {std::pair{rec.r_a, "r_a"}, {rec.r_ba, "r_ba"}, {rec.r_b_on_b, "r_b_on_b"}, {rec.r_null, "r_null"},
          {rec.proj_energy, "proj_energy"}, {rec.emp_a.mean, "emp_a"}, {rec.emp_ba.mean, "emp_ba"},
          {rec.emp_b_on_b.mean, "emp_b_on_b"}, {rec.emp_null.mean, "emp_null"}}) {
      require_finite(value, name);
    }

    rec.flags = check_trial(sheet, RealizedQuantities{rec.r_a, rec.r_ba, rec.r_null, rec.forgetting, rec.ratio,
                                                      rec.proj_energy});
  } catch (const NumericalError& e) {
    const TrialRecord blank;
    const std::string message = e.what();
    rec.r_a = rec.r_ba = rec.r_b_on_b = rec.r_null = rec.forgetting = rec.proj_energy = rec.dual_path_gap = 0.0;
    rec.ratio.reset();
    rec.emp_a = rec.emp_ba = rec.emp_b_on_b = rec.emp_null = blank.emp_a;
    rec.flags = BoundFlags{};
    rec.failed = true;
    rec.error = message;
  }
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

void SweepSpec::validate() const {
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  if (trials_per_point < 1) throw ConfigError("trials_per_point must be >= 1");
  if (trials_per_point > 0xffffffffULL) throw ConfigError("trials_per_point exceeds 2^32 - 1");
  if (n_test < 1000) throw ConfigError("n_test must be >= 1000");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      grid[i].validate();
    } catch (const PremiseError& e) {
      throw PremiseError("grid point " + std::to_string(i) + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError("grid point " + std::to_string(i) + ": " + e.what());
    }
  }
}

std::vector<ModelVariant> SweepSpec::variants() const {
  switch (model_variant) {
    case VariantSelection::latent:
      return {ModelVariant::latent};
    case VariantSelection::surrogate:
      return {ModelVariant::surrogate};
    case VariantSelection::both:
      return {ModelVariant::latent, ModelVariant::surrogate};
  }
  return {};
}

RngStream trial_stream(const SweepSpec& spec, std::size_t point, ModelVariant variant, std::uint64_t trial) {
  const std::uint64_t experiment = 2 * static_cast<std::uint64_t>(point) + (variant == ModelVariant::surrogate ? 1 : 0);
  return RngStream(spec.root_seed, RngStream::trial_stream(experiment, trial));
}

MetricSummary summarize(std::vector<double> values) {
  MetricSummary s;
  s.count = values.size();
  if (values.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.mean = s.se = s.median = s.q10 = s.q90 = nan;
    return s;
  }
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.se = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;

  std::sort(values.begin(), values.end());
  const auto quantile = [&](double q) {
    const double pos = q * (n - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  s.median = quantile(0.5);
  s.q10 = quantile(0.1);
  s.q90 = quantile(0.9);
  return s;
}

std::optional<double> BoundFrequency::frequency() const {
  if (applicable == 0) return std::nullopt;
  return static_cast<double>(satisfied) / static_cast<double>(applicable);
}

const MetricSummary& PointAggregate::metric(std::string_view name) const {
  if (name == "r_a") return r_a;
  if (name == "r_ba") return r_ba;
  if (name == "r_b_on_b") return r_b_on_b;
  if (name == "r_null") return r_null;
  if (name == "forgetting") return forgetting;
  if (name == "ratio") return ratio;
  if (name == "proj_energy") return proj_energy;
  throw std::invalid_argument("unknown metric: " + std::string(name));
}

double PointAggregate::axis(std::string_view name) const {
  if (name == "d") return static_cast<double>(d);
  if (name == "n") return static_cast<double>(n);
  if (name == "p") return static_cast<double>(p);
  if (name == "gamma") return gamma;
  throw std::invalid_argument("unknown axis: " + std::string(name));
}

namespace {

void tally(BoundFrequency& freq, BoundFlag flag) {
  if (flag == BoundFlag::not_applicable) return;
  ++freq.applicable;
  if (flag == BoundFlag::satisfied) ++freq.satisfied;
}

}  // namespace

AggregateReport aggregate(const std::vector<TrialRecord>& records) {
  std::map<std::pair<int, std::size_t>, std::vector<const TrialRecord*>> groups;
  std::vector<std::pair<int, std::size_t>> order;
  for (const TrialRecord& rec : records) {
    const std::pair key{static_cast<int>(rec.variant), rec.point};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&rec);
  }

  AggregateReport report;
  for (const auto& key : order) {
    const auto& recs = groups.at(key);
    const TrialRecord& first = *recs.front();
    PointAggregate agg;
    agg.variant = first.variant;
    agg.point = first.point;
    agg.d = first.d;
    agg.n = first.n;
    agg.p = first.p;
    agg.gamma = first.gamma;
    agg.theta_sq = first.theta_sq;
    agg.premise_ok = first.premise_ok;
    agg.trials = recs.size();

    std::vector<double> r_a, r_ba, r_b, r_null, forget, ratio, proj;
    for (const TrialRecord* rec : recs) {
      if (rec->failed) {
        ++agg.failed;
        continue;
      }
      r_a.push_back(rec->r_a);
      r_ba.push_back(rec->r_ba);
      r_b.push_back(rec->r_b_on_b);
      r_null.push_back(rec->r_null);
      forget.push_back(rec->forgetting);
      proj.push_back(rec->proj_energy);
      if (rec->ratio) {
        ratio.push_back(*rec->ratio);
      } else {
        ++agg.ratio_undefined;
      }
      tally(agg.single, rec->flags.single);
      tally(agg.terminal, rec->flags.terminal);
      tally(agg.forgetting_bound, rec->flags.forgetting);
      tally(agg.ratio_bound, rec->flags.ratio);
      tally(agg.projection, rec->flags.projection);

      for (const auto& [emp, analytic] : {std::pair{rec->emp_a, rec->r_a}, {rec->emp_ba, rec->r_ba},
                                          {rec->emp_b_on_b, rec->r_b_on_b}, {rec->emp_null, rec->r_null}}) {
        ++agg.mc_pairs;
        if (within_band(emp, analytic)) ++agg.mc_within;
      }
      agg.max_dual_path_gap = std::max(agg.max_dual_path_gap, rec->dual_path_gap);
    }
    agg.flagged = static_cast<double>(agg.failed) > 0.01 * static_cast<double>(agg.trials);
    agg.r_a = summarize(std::move(r_a));
    agg.r_ba = summarize(std::move(r_ba));
    agg.r_b_on_b = summarize(std::move(r_b));
    agg.r_null = summarize(std::move(r_null));
    agg.forgetting = summarize(std::move(forget));
    agg.ratio = summarize(std::move(ratio));
    agg.proj_energy = summarize(std::move(proj));
    report.points.push_back(std::move(agg));
  }
  return report;
}

SweepResult run_sweep(const SweepSpec& spec, unsigned threads, const ProgressFn& progress) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();

  struct Job {
    ModelVariant variant;
    std::size_t point;
    std::uint64_t trial;
  };
  std::vector<Job> jobs;
  for (ModelVariant variant : spec.variants()) {
    for (std::size_t point = 0; point < spec.grid.size(); ++point) {
      for (std::uint64_t t = 0; t < spec.trials_per_point; ++t) jobs.push_back({variant, point, t});
    }
  }

  TrialOptions base;
  base.rotation = spec.rotation;
  base.sampler = spec.sampler;
  base.n_test = spec.n_test;

  SweepResult result;
  result.records.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= jobs.size()) return;
      const Job& job = jobs[idx];
      try {
        TrialOptions options = base;
        options.variant = job.variant;
        TrialRecord rec = run_trial(spec.grid[job.point], trial_stream(spec, job.point, job.variant, job.trial),
                                    options);
        rec.point = job.point;
        result.records[idx] = std::move(rec);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(jobs.size());
        return;
      }
      const std::size_t finished = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, jobs.size());
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  result.report = aggregate(result.records);
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: size mismatch");
  if (x.size() < 2) return 0.0;
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

TrendResult trend_check(const AggregateReport& report, std::string_view metric, std::string_view axis,
                        TrendDirection direction, double min_spearman, ModelVariant variant) {
  std::vector<double> xs, ys;
  for (const PointAggregate& pt : report.points) {
    if (pt.variant != variant) continue;
    const double median = pt.metric(metric).median;
    if (!std::isfinite(median)) continue;
    xs.push_back(pt.axis(axis));
    ys.push_back(median);
  }
  std::vector<double> distinct = xs;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 4) {
    throw std::invalid_argument("trend_check needs at least 4 distinct " + std::string(axis) + " values, got " +
                                std::to_string(distinct.size()));
  }
  TrendResult out;
  out.points = xs.size();
  out.spearman = spearman(xs, ys);
  out.passed = direction == TrendDirection::decreasing ? out.spearman <= -min_spearman
                                                       : out.spearman >= min_spearman;
  return out;
}

}  // namespace latentcl
