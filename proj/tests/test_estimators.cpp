#include <gtest/gtest.h>

#include <stdexcept>

#include "latentcl/errors.hpp"
#include "latentcl/estimators.hpp"
#include "oracles.hpp"

using namespace latentcl;

namespace {

struct Instance {
  ModelConfig cfg;
  TaskPair tp;
};

Instance draw(Index d, Index n, Index p, std::uint64_t seed, RotationMode rot = RotationMode::dense) {
  ModelConfig cfg;
  cfg.d = d;
  cfg.n = n;
  cfg.p = p;
  cfg.gamma = 1.0;
  cfg.theta = ModelConfig::make_theta(d, 1.0, ThetaMode::basis, 0);
  RngStream w_rng(seed, 1), rng(seed, 2);
  const FeatureMap fm = build_feature_map(cfg, w_rng);
  return {cfg, sample_task_pair(cfg, fm, rng, rot)};
}

TaskPair with_responses(TaskPair tp, Vector y) {
  tp.y = std::move(y);
  return tp;
}

}  // namespace

TEST(TaskA, ZeroResponsesGiveZero) {
  const Instance in = draw(2, 4, 8, 1);
  const TaskPair tp = with_responses(in.tp, Vector::Zero(4));
  EXPECT_EQ(fit_task_a(tp).beta_hat.norm(), 0.0);
  EXPECT_EQ(fit_task_b(tp).beta_hat.norm(), 0.0);
}

TEST(TaskA, OrthonormalRowsGiveTranspose) {
  RngStream rng(2, 0);
  const Matrix q = haar_frame(rng, 9, 3);
  TaskPair tp = draw(1, 3, 9, 2).tp;
  tp.X_A = q.transpose();
  const Vector y = gaussian_vector(rng, 3);
  tp.y = y;
  EXPECT_LE(oracle::rel(fit_task_a(tp).beta_hat, q * y), 1e-12);
}

TEST(TaskA, MatchesPseudoinverse) {
  const Instance in = draw(2, 4, 8, 3);
  const EstimatorParams a = fit_task_a(in.tp);
  EXPECT_LE(oracle::rel(a.beta_hat, oracle::pinv(in.tp.X_A) * in.tp.y), 1e-8);
  EXPECT_EQ(a.provenance, Provenance::task_a);
  EXPECT_EQ(a.init.norm(), 0.0);
  EXPECT_LE((in.tp.X_A * a.beta_hat - in.tp.y).norm(), 1e-6 * in.tp.y.norm());
}

TEST(TaskB, RotatedCopyOfTaskA) {
  const Instance in = draw(2, 4, 8, 4);
  const EstimatorParams a = fit_task_a(in.tp);
  const EstimatorParams b = fit_task_b(in.tp);
  EXPECT_LE(oracle::rel(b.beta_hat, in.tp.O.apply(a.beta_hat)), 1e-8);
  EXPECT_LE(oracle::rel(b.beta_hat, oracle::pinv(in.tp.X_B) * in.tp.y), 1e-8);
  EXPECT_EQ(b.provenance, Provenance::task_b);
}

TEST(Sequential, IdentityRotationLeavesTaskAUnchanged) {
  const Instance in = draw(3, 10, 40, 5, RotationMode::identity);
  const EstimatorParams a = fit_task_a(in.tp);
  const SequentialFit s = fit_sequential_checked(in.tp, a);
  EXPECT_LE(oracle::rel(s.sequential.beta_hat, a.beta_hat), 1e-12);
}

TEST(Sequential, InterpolatesTaskBAndMatchesComposition) {
  for (RotationMode rot : {RotationMode::dense, RotationMode::partial}) {
    const Instance in = draw(3, 10, 40, 6, rot);
    const EstimatorParams a = fit_task_a(in.tp);
    const SequentialFit s = fit_sequential_checked(in.tp, a);
    EXPECT_LE((in.tp.X_B * s.sequential.beta_hat - in.tp.y).norm(), 1e-8 * in.tp.y.norm());
    EXPECT_LE(s.dual_path_gap, 1e-8);
    // Three-term composition with an explicitly materialized projector.
    const Vector b = oracle::pinv(in.tp.X_B) * in.tp.y;
    const Vector composed = a.beta_hat + b - oracle::row_space_projector(in.tp.X_B) * a.beta_hat;
    EXPECT_LE(oracle::rel(s.sequential.beta_hat, composed), 1e-8);
    EXPECT_EQ(s.sequential.provenance, Provenance::sequential_ba);
    EXPECT_EQ(s.sequential.init, a.beta_hat);
    EXPECT_EQ(fit_sequential(in.tp, a).beta_hat, s.sequential.beta_hat);
  }
}

TEST(Sequential, ClosestInterpolantToTaskA) {
  const Instance in = draw(3, 8, 30, 7);
  const EstimatorParams a = fit_task_a(in.tp);
  const Vector ba = fit_sequential(in.tp, a).beta_hat;
  const Matrix null_proj =
      Matrix::Identity(30, 30) - oracle::row_space_projector(in.tp.X_B);
  RngStream rng(7, 9);
  const double best = (ba - a.beta_hat).norm();
  for (int k = 0; k < 100; ++k) {
    const Vector other = ba + null_proj * gaussian_vector(rng, 30);
    EXPECT_LE(best, (other - a.beta_hat).norm() + 1e-12);
  }
}

TEST(Gd, MatchesClosedForm) {
  const Instance in = draw(3, 10, 30, 8);
  RngStream rng(8, 3);
  const Vector b0 = gaussian_vector(rng, 30);
  const GdFit fit = run_gd(in.tp.X_A, in.tp.y, b0);
  EXPECT_LE(oracle::rel(fit.params.beta_hat, min_norm_solve(in.tp.X_A, in.tp.y, b0)), 1e-6);
  EXPECT_LE(fit.gradient_ratio, 1e-10);
  EXPECT_EQ(fit.params.provenance, Provenance::gd_oracle);
}

TEST(Gd, InterpolatingStartStops) {
  const Instance in = draw(3, 10, 30, 9);
  const Vector b0 = fit_task_a(in.tp).beta_hat;
  const GdFit fit = run_gd(in.tp.X_A, in.tp.y, b0);
  EXPECT_LE(fit.iterations, 1);
  EXPECT_LE(oracle::rel(fit.params.beta_hat, b0), 1e-10);
}

TEST(Gd, ZeroProblem) {
  const Instance in = draw(3, 10, 30, 10);
  const GdFit fit = run_gd(in.tp.X_A, Vector::Zero(10), Vector::Zero(30));
  EXPECT_EQ(fit.params.beta_hat.norm(), 0.0);
}

TEST(Gd, UnstableStepRejected) {
  const Instance in = draw(3, 10, 30, 11);
  GdOptions opt;
  opt.step = 1e3;
  EXPECT_THROW(run_gd(in.tp.X_A, in.tp.y, Vector::Zero(30), opt), std::invalid_argument);
}

TEST(Gd, IterationCapRaises) {
  const Instance in = draw(3, 10, 30, 12);
  GdOptions opt;
  opt.max_iters = 2;
  EXPECT_THROW(run_gd(in.tp.X_A, in.tp.y, Vector::Zero(30), opt), NumericalError);
}

TEST(NullEstimator, IsZero) {
  const EstimatorParams z = null_estimator(7);
  EXPECT_EQ(z.beta_hat, Vector::Zero(7));
  EXPECT_EQ(z.provenance, Provenance::null);
  EXPECT_EQ(to_string(Provenance::sequential_ba), "sequentialBA");
}
