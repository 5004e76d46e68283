#include "latentcl/risk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latentcl {

double analytic_risk(const Vector& beta_hat, const FeatureMap& fm, const InducedParams& induced) {
  if (beta_hat.size() != fm.p() || induced.beta_star.size() != fm.p()) {
    throw std::invalid_argument("analytic_risk: dimension mismatch");
  }
  const Vector delta = beta_hat - induced.beta_star;
  const Vector coeff = fm.basis().transpose() * delta;
  const double along = coeff.squaredNorm();
  const double across = (delta - fm.basis() * coeff).squaredNorm();
  return induced.sigma2 + (fm.signal_scale() + 1.0) * along + across;
}

double analytic_risk(const EstimatorParams& est, const FeatureMap& fm, const InducedParams& induced) {
  return analytic_risk(est.beta_hat, fm, induced);
}

double analytic_risk_task_b(const Vector& beta_hat, const FeatureMap& fm, const OrthogonalMap& o,
                            const InducedParams& induced) {
  return analytic_risk(o.apply_transpose(beta_hat), fm, induced);
}

double analytic_risk_task_b(const EstimatorParams& est, const FeatureMap& fm, const OrthogonalMap& o,
                            const InducedParams& induced) {
  return analytic_risk_task_b(est.beta_hat, fm, o, induced);
}

namespace {

// Welford accumulation keeps the variance accurate for large n_test.
struct MeanAccumulator {
  long count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  EmpiricalRisk result() const {
    const double var = count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(count))};
  }
};

constexpr Index kFullChunk = 256;

}  // namespace

EmpiricalRisk empirical_risk(const Vector& beta_hat, const ModelConfig& cfg, const FeatureMap& fm, Task task,
                             const OrthogonalMap& o, Index n_test, RngStream& rng, RiskSampler sampler) {
  if (n_test < 1000) throw std::invalid_argument("empirical_risk needs n_test >= 1000");
  if (beta_hat.size() != fm.p() || cfg.theta.size() != fm.d()) {
    throw std::invalid_argument("empirical_risk: dimension mismatch");
  }
  // Test rows of task B are O x, so x_B^T beta_hat = x^T (O^T beta_hat).
  const Vector v = task == Task::a ? beta_hat : o.apply_transpose(beta_hat);
  MeanAccumulator acc;

  if (sampler == RiskSampler::projected) {
    const Vector latent_gap = fm.W().transpose() * v - cfg.theta;
    const double noise_scale = v.norm();
    const Index d = fm.d();
    Vector z(d);
    for (Index i = 0; i < n_test; ++i) {
      for (Index k = 0; k < d; ++k) z(k) = rng.normal();
      const double err = z.dot(latent_gap) + noise_scale * rng.normal();
      acc.add(err * err);
    }
    return acc.result();
  }

  for (Index start = 0; start < n_test; start += kFullChunk) {
    const Index rows = std::min(kFullChunk, n_test - start);
    const Matrix z = gaussian_matrix(rng, rows, fm.d());
    const Matrix u = gaussian_matrix(rng, rows, fm.p());
    const Matrix x = z * fm.W().transpose() + u;
    const Vector err = x * v - z * cfg.theta;
    for (Index i = 0; i < rows; ++i) acc.add(err(i) * err(i));
  }
  return acc.result();
}

EmpiricalRisk empirical_risk(const EstimatorParams& est, const ModelConfig& cfg, const FeatureMap& fm, Task task,
                             const OrthogonalMap& o, Index n_test, RngStream& rng, RiskSampler sampler) {
  return empirical_risk(est.beta_hat, cfg, fm, task, o, n_test, rng, sampler);
}

RiskReport make_risk_report(const EstimatorParams& est, const ModelConfig& cfg, const FeatureMap& fm,
                            const InducedParams& induced, Task task, const OrthogonalMap& o, Index n_test,
                            RngStream& rng, RiskSampler sampler) {
  RiskReport report;
  report.analytic = task == Task::a ? analytic_risk(est, fm, induced) : analytic_risk_task_b(est, fm, o, induced);
  const EmpiricalRisk emp = empirical_risk(est, cfg, fm, task, o, n_test, rng, sampler);
  report.empirical = emp.mean;
  report.empirical_se = emp.se;
  report.sigma2_floor = induced.sigma2;
  report.excess = report.analytic - induced.sigma2;
  report.task = task;
  report.estimator_provenance = est.provenance;
  return report;
}

std::optional<double> forgetting_ratio(double r_ba, double r_a, double r_null) {
  const double gain = r_null - r_a;
  if (!(gain > 0.0)) return std::nullopt;
  return (r_ba - r_a) / gain;
}

}  // namespace latentcl
