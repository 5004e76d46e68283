#pragma once

#include <optional>

#include "latentcl/estimators.hpp"
#include "latentcl/model.hpp"

namespace latentcl {

enum class Task { a, b };

/// How empirical_risk draws test points.
///  - full: materializes x = Wz + u (rotated by O for task B) for every test row.
///  - projected: draws the prediction error directly. For fixed v = beta_hat
///    (or O^T beta_hat on task B), x^T beta_hat - y = z^T (W^T v - theta) + u^T v and
///    u^T v ~ ||v|| N(0, 1), so each test row costs O(d) instead of O(p).
/// Both samplers have the same law; `full` exists to certify `projected`.
enum class RiskSampler { projected, full };

struct RiskReport {
  double analytic = 0.0;
  double empirical = 0.0;
  double empirical_se = 0.0;
  double sigma2_floor = 0.0;
  double excess = 0.0;
  Task task = Task::a;
  Provenance estimator_provenance = Provenance::null;
};

/// sigma^2 + (beta_hat - beta)^T Sigma (beta_hat - beta) with
/// Sigma = (p gamma + 1) P_W + P_{W-perp}; Sigma is never formed.
double analytic_risk(const Vector& beta_hat, const FeatureMap& fm, const InducedParams& induced);
double analytic_risk(const EstimatorParams& est, const FeatureMap& fm, const InducedParams& induced);

/// Risk on task B, whose population is x_B = O x: sigma^2 + (O beta - beta_hat)^T O Sigma O^T (O beta - beta_hat),
/// evaluated as the task-A risk of O^T beta_hat.
double analytic_risk_task_b(const Vector& beta_hat, const FeatureMap& fm, const OrthogonalMap& o,
                            const InducedParams& induced);
double analytic_risk_task_b(const EstimatorParams& est, const FeatureMap& fm, const OrthogonalMap& o,
                            const InducedParams& induced);

struct EmpiricalRisk {
  double mean;
  double se;
};

/// Monte-Carlo mean squared prediction error over n_test (>= 1000) fresh draws
/// of the latent model, with the standard error of the mean.
EmpiricalRisk empirical_risk(const Vector& beta_hat, const ModelConfig& cfg, const FeatureMap& fm, Task task,
                             const OrthogonalMap& o, Index n_test, RngStream& rng,
                             RiskSampler sampler = RiskSampler::projected);
EmpiricalRisk empirical_risk(const EstimatorParams& est, const ModelConfig& cfg, const FeatureMap& fm, Task task,
                             const OrthogonalMap& o, Index n_test, RngStream& rng,
                             RiskSampler sampler = RiskSampler::projected);

RiskReport make_risk_report(const EstimatorParams& est, const ModelConfig& cfg, const FeatureMap& fm,
                            const InducedParams& induced, Task task, const OrthogonalMap& o, Index n_test,
                            RngStream& rng, RiskSampler sampler = RiskSampler::projected);

/// R(beta_BA) - R(beta_A); negative values are reported as-is.
inline double forgetting(double r_ba, double r_a) { return r_ba - r_a; }

/// (r_ba - r_a) / (r_null - r_a), or nullopt when r_null <= r_a (task A not learned).
std::optional<double> forgetting_ratio(double r_ba, double r_a, double r_null);

}  // namespace latentcl
