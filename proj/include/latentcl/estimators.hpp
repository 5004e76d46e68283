#pragma once

#include <string>

#include "latentcl/linalg.hpp"
#include "latentcl/model.hpp"

namespace latentcl {

enum class Provenance { task_a, task_b, sequential_ba, null, gd_oracle };

std::string to_string(Provenance provenance);

struct EstimatorParams {
  Vector beta_hat;
  Provenance provenance;
  Vector init;
};

/// Zero predictor of dimension p.
EstimatorParams null_estimator(Index p);

/// Minimum-norm interpolator of task A: X_A^T (X_A X_A^T)^{-1} y.
EstimatorParams fit_task_a(const TaskPair& tp);

/// Minimum-norm interpolator of task B: X_B^T (X_B X_B^T)^{-1} y.
EstimatorParams fit_task_b(const TaskPair& tp);

struct SequentialFit {
  EstimatorParams sequential;  ///< beta_BA
  EstimatorParams task_b;      ///< beta_B, a by-product of the cross-check
  double dual_path_gap;        ///< relative gap between the two constructions
};

/// Trains on task B starting from beta_a.
///
/// The primary path is min_norm_solve(X_B, y, beta_a). It is cross-checked
/// against beta_a + beta_B - P_{X_B^T} beta_a, where the projector comes from a
/// Householder QR of X_B^T; a gap above 1e-8 (relative) raises NumericalError.
SequentialFit fit_sequential_checked(const TaskPair& tp, const EstimatorParams& beta_a);

EstimatorParams fit_sequential(const TaskPair& tp, const EstimatorParams& beta_a);

struct GdOptions {
  double step = 0.0;  ///< <= 0 selects 1 / lambda_max(X^T X)
  double tol = 1e-10;  ///< on ||grad|| / ||X^T y||
  long max_iters = 1'000'000;
};

struct GdFit {
  EstimatorParams params;
  long iterations;
  double gradient_ratio;  ///< final ||grad|| / ||X^T y||
};

/// Full-batch gradient descent on 0.5 ||X b - y||^2 from beta0.
/// Throws NumericalError when max_iters is reached first, and
/// std::invalid_argument when the step is at or above the 2 / lambda_max limit.
GdFit run_gd(const Matrix& X, const Vector& y, const Vector& beta0, const GdOptions& options = {});

inline EstimatorParams fit_gd(const Matrix& X, const Vector& y, const Vector& beta0,
                              const GdOptions& options = {}) {
  return run_gd(X, y, beta0, options).params;
}

}  // namespace latentcl
