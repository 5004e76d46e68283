#include <gtest/gtest.h>

#include <cmath>

#include "latentcl/checks.hpp"

using namespace latentcl;

namespace {

double metric(const CheckResult& r, const std::string& name) {
  for (const auto& [k, v] : r.metrics) {
    if (k == name) return v;
  }
  ADD_FAILURE() << "no metric " << name << " in " << r.id;
  return std::nan("");
}

SweepSpec small_spec(std::size_t trials) {
  SweepSpec spec;
  for (Index p : {200, 800, 3200, 12800}) {
    ModelConfig cfg;
    cfg.d = 2;
    cfg.n = 40;
    cfg.p = p;
    cfg.theta = ModelConfig::make_theta(2, 1.0, ThetaMode::basis, 0);
    spec.grid.push_back(cfg);
  }
  spec.trials_per_point = trials;
  spec.n_test = 1000;
  spec.root_seed = 8;
  return spec;
}

PointAggregate synthetic_point(std::size_t index, Index p, double ratio_median) {
  PointAggregate pt;
  pt.point = index;
  pt.d = 5;
  pt.n = 100;
  pt.p = p;
  pt.gamma = 1.0;
  pt.theta_sq = 1.0;
  pt.premise_ok = true;
  pt.trials = 10;
  for (MetricSummary* m : {&pt.r_a, &pt.r_ba, &pt.ratio}) {
    m->count = 10;
    m->median = ratio_median;
    m->mean = ratio_median;
  }
  for (BoundFrequency* f : {&pt.single, &pt.terminal, &pt.forgetting_bound, &pt.projection}) {
    f->satisfied = 10;
    f->applicable = 10;
  }
  return pt;
}

}  // namespace

TEST(Tolerances, CorruptedIsStricter) {
  const Tolerances t, c = t.corrupted();
  EXPECT_LT(c.identity, 0.0);
  EXPECT_LT(c.gd, 0.0);
  EXPECT_LT(c.dual_path, 0.0);
  EXPECT_GT(c.min_fraction, 1.0);
  EXPECT_GT(c.min_spearman, 1.0);
}

TEST(CheckIds, OrderAndStatusNames) {
  const auto& ids = all_check_ids();
  ASSERT_EQ(ids.size(), 9u);
  EXPECT_EQ(ids.front(), "lemma_identities");
  EXPECT_EQ(ids.back(), "determinism");
  EXPECT_EQ(to_string(CheckStatus::skipped), "skipped");
  CheckSelection sel = CheckSelection::all();
  EXPECT_TRUE(sel("determinism"));
  sel.enabled["determinism"] = false;
  EXPECT_FALSE(sel("determinism"));
  EXPECT_FALSE(sel("unknown"));
}

TEST(LemmaCheck, PassesAndFailsWhenCorrupted) {
  LemmaCheckOptions opt;
  opt.configs = 20;
  opt.max_d = 8;
  opt.max_p = 200;
  const CheckResult ok = check_lemma_identities(1, opt);
  EXPECT_EQ(ok.status, CheckStatus::pass) << ok.detail;
  EXPECT_EQ(check_lemma_identities(1, opt, Tolerances{}.corrupted()).status, CheckStatus::fail);
  opt.theta_norm_sq = 0.0;
  EXPECT_EQ(check_lemma_identities(1, opt).status, CheckStatus::pass);
}

TEST(GdCheck, PassesAndFailsWhenCorrupted) {
  GdCheckOptions opt;
  opt.instances = 3;
  const CheckResult ok = check_gd_oracle(2, opt);
  EXPECT_EQ(ok.status, CheckStatus::pass) << ok.detail;
  EXPECT_EQ(check_gd_oracle(2, opt, Tolerances{}.corrupted()).status, CheckStatus::fail);
}

TEST(SweepChecks, PassOnASmallGrid) {
  const SweepResult res = run_sweep(small_spec(20), 1);
  const CheckResult dual = check_dual_path(res.records);
  EXPECT_EQ(dual.status, CheckStatus::pass) << dual.detail;
  EXPECT_LE(metric(dual, "max_rel_gap"), 1e-8);
  const CheckResult trends = check_trends(res.report);
  EXPECT_EQ(trends.status, CheckStatus::pass) << trends.detail;
  const CheckResult mc = check_mc_consistency(res.report);
  EXPECT_GE(metric(mc, "fraction"), 0.95) << mc.detail;
  const Tolerances bad = Tolerances{}.corrupted();
  EXPECT_EQ(check_dual_path(res.records, bad).status, CheckStatus::fail);
  EXPECT_EQ(check_trends(res.report, bad).status, CheckStatus::fail);
  EXPECT_EQ(check_mc_consistency(res.report, bad).status, CheckStatus::fail);
}

TEST(DualPathCheck, FailedTrialFails) {
  std::vector<TrialRecord> recs(3);
  EXPECT_EQ(check_dual_path(recs).status, CheckStatus::pass);
  recs[1].failed = true;
  EXPECT_EQ(check_dual_path(recs).status, CheckStatus::fail);
  recs[1].failed = false;
  recs[2].dual_path_gap = 1e-6;
  EXPECT_EQ(check_dual_path(recs).status, CheckStatus::fail);
}

TEST(McCheck, Fraction) {
  AggregateReport rep;
  rep.points.push_back(synthetic_point(0, 2000, 0.1));
  rep.points[0].mc_pairs = 1000;
  rep.points[0].mc_within = 990;
  EXPECT_EQ(check_mc_consistency(rep).status, CheckStatus::pass);
  rep.points[0].mc_within = 989;
  EXPECT_EQ(check_mc_consistency(rep).status, CheckStatus::fail);
  rep.points[0].mc_pairs = 0;
  EXPECT_EQ(check_mc_consistency(rep).status, CheckStatus::skipped);
}

TEST(BoundCheck, SyntheticReports) {
  AggregateReport rep;
  rep.points.push_back(synthetic_point(0, 2000, 0.1));
  const CheckResult vacuous_ratio = check_bound_satisfaction(rep);
  EXPECT_EQ(vacuous_ratio.status, CheckStatus::pass) << vacuous_ratio.detail;
  EXPECT_NE(vacuous_ratio.detail.find("undefined on every trial"), std::string::npos);

  rep.points[0].single.satisfied = 9;
  EXPECT_EQ(check_bound_satisfaction(rep).status, CheckStatus::fail);
  rep.points[0].single.satisfied = 10;

  rep.points[0].projection.applicable = 0;
  rep.points[0].projection.satisfied = 0;
  EXPECT_EQ(check_bound_satisfaction(rep).status, CheckStatus::fail);
  rep.points[0].projection = rep.points[0].single;

  // Points outside the premises are ignored.
  PointAggregate outside = synthetic_point(1, 500, 0.1);
  outside.premise_ok = false;
  outside.single.satisfied = 0;
  rep.points.push_back(outside);
  EXPECT_EQ(check_bound_satisfaction(rep).status, CheckStatus::pass);
}

TEST(TrendCheck, SyntheticReports) {
  AggregateReport rep;
  const Index ps[] = {2000, 4000, 8000, 16000};
  for (std::size_t i = 0; i < 4; ++i) rep.points.push_back(synthetic_point(i, ps[i], 0.4 / (i + 1)));
  EXPECT_EQ(check_trends(rep).status, CheckStatus::pass);
  // Monotone but shrinking by less than half.
  for (std::size_t i = 0; i < 4; ++i) rep.points[i].ratio.median = 0.4 - 0.05 * i;
  EXPECT_EQ(check_trends(rep).status, CheckStatus::fail);
  rep.points.pop_back();
  EXPECT_EQ(check_trends(rep).status, CheckStatus::skipped);
}

TEST(EquivalenceCheck, SmallScale) {
  EquivalenceCheckOptions opt;
  opt.trials = 60;
  opt.n = 20;
  opt.p = 400;
  const CheckResult r = check_model_equivalence(3, opt);
  EXPECT_EQ(r.status, CheckStatus::pass) << r.detail;
}

TEST(SingularValueCheck, SmallScale) {
  SingularValueCheckOptions opt;
  opt.trials = 40;
  opt.d = 4;
  opt.n = 100;
  const CheckResult r = check_singular_values(4, opt);
  EXPECT_EQ(r.status, CheckStatus::pass) << r.detail;
  EXPECT_EQ(check_singular_values(4, opt, Tolerances{}.corrupted()).status, CheckStatus::fail);
}

TEST(DeterminismCheck, Strings) {
  EXPECT_EQ(check_determinism("a\nb\n", "a\nb\n").status, CheckStatus::pass);
  const CheckResult r = check_determinism("a\nb\nc\n", "a\nb\nd\n");
  EXPECT_EQ(r.status, CheckStatus::fail);
  EXPECT_EQ(metric(r, "first_difference_line"), 3.0);
}

TEST(DeterminismCheck, SampleReproducesRows) {
  const SweepSpec spec = small_spec(3);
  const SweepResult res = run_sweep(spec, 2);
  EXPECT_EQ(check_determinism_sample(spec, res.records, 2).status, CheckStatus::pass);
  std::vector<TrialRecord> tampered = res.records;
  tampered[0].r_a *= 1.0 + 1e-15;
  tampered[0].r_a += 1e-17;
  EXPECT_EQ(check_determinism_sample(spec, tampered, 1).status, CheckStatus::fail);
}

TEST(Suite, SmallRunCoversEveryCheck) {
  SuiteOptions opt;
  opt.spec = small_spec(4);
  opt.determinism_sample = std::nullopt;
  opt.threads = 1;
  opt.rerun_threads = 2;
  opt.selection.enabled[check_id::kLemmaIdentities] = false;
  opt.selection.enabled[check_id::kGdOracle] = false;
  opt.selection.enabled[check_id::kEquivalence] = false;
  opt.selection.enabled[check_id::kSingularValues] = false;
  const SuiteResult res = run_suite(opt);
  ASSERT_EQ(res.checks.size(), 9u);
  for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(res.checks[i].id, all_check_ids()[i]);
  EXPECT_EQ(res.checks[0].status, CheckStatus::skipped);
  EXPECT_EQ(res.checks[2].status, CheckStatus::pass) << res.checks[2].detail;
  EXPECT_EQ(res.checks[8].status, CheckStatus::pass) << res.checks[8].detail;
  EXPECT_EQ(res.sweep.records.size(), 16u);
}
