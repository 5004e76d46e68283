#include "latentcl/estimators.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace latentcl {

std::string to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::task_a:
      return "taskA";
    case Provenance::task_b:
      return "taskB";
    case Provenance::sequential_ba:
      return "sequentialBA";
    case Provenance::null:
      return "null";
    case Provenance::gd_oracle:
      return "gd_oracle";
  }
  return "?";
}

EstimatorParams null_estimator(Index p) {
  return {Vector::Zero(p), Provenance::null, Vector::Zero(p)};
}

EstimatorParams fit_task_a(const TaskPair& tp) {
  const Vector zero = Vector::Zero(tp.X_A.cols());
  return {min_norm_solve(tp.X_A, tp.y, zero), Provenance::task_a, zero};
}

EstimatorParams fit_task_b(const TaskPair& tp) {
  const Vector zero = Vector::Zero(tp.X_B.cols());
  return {min_norm_solve(tp.X_B, tp.y, zero), Provenance::task_b, zero};
}

SequentialFit fit_sequential_checked(const TaskPair& tp, const EstimatorParams& beta_a) {
  if (beta_a.provenance != Provenance::task_a) {
    throw std::invalid_argument("fit_sequential expects a task-A estimator as initialization");
  }
  const MinNormSolver solver(tp.X_B);
  const Vector zero = Vector::Zero(tp.X_B.cols());
  EstimatorParams seq{solver.solve(tp.y, beta_a.beta_hat), Provenance::sequential_ba, beta_a.beta_hat};
  EstimatorParams task_b{solver.solve(tp.y), Provenance::task_b, zero};

  const Projection split = orth_projector_apply(tp.X_B, beta_a.beta_hat);
  const Vector composed = beta_a.beta_hat + task_b.beta_hat - split.onto;
  const double gap = relative_gap(composed, seq.beta_hat);
  if (!(gap <= 1e-8)) {
    throw NumericalError("sequential estimator: dual-path gap " + std::to_string(gap) + " exceeds 1e-8");
  }
  return {std::move(seq), std::move(task_b), gap};
}

EstimatorParams fit_sequential(const TaskPair& tp, const EstimatorParams& beta_a) {
  return fit_sequential_checked(tp, beta_a).sequential;
}

GdFit run_gd(const Matrix& X, const Vector& y, const Vector& beta0, const GdOptions& options) {
  if (y.size() != X.rows() || beta0.size() != X.cols()) throw std::invalid_argument("gd: dimension mismatch");
  if (!(options.tol > 0.0)) throw std::invalid_argument("gd: tolerance must be positive");

  // lambda_max(X^T X) = lambda_max(X X^T); the smaller Gram matrix is cheaper.
  const bool wide = X.rows() <= X.cols();
  const Matrix gram = wide ? Matrix(X * X.transpose()) : Matrix(X.transpose() * X);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("gd: eigenvalue computation failed");
  const double lambda_max = eig.eigenvalues().maxCoeff();

  double step = options.step;
  if (lambda_max > 0.0) {
    if (step <= 0.0) step = 1.0 / lambda_max;
    if (step >= 2.0 / lambda_max) throw std::invalid_argument("gd: step must be below 2 / lambda_max");
  }

  const double target = options.tol * std::max((X.transpose() * y).norm(), kAbsFloor);
  Vector beta = beta0;
  Vector grad = X.transpose() * (X * beta - y);
  long iter = 0;
  while (grad.norm() > target) {
    if (iter >= options.max_iters) {
      throw NumericalError("gd did not converge within " + std::to_string(options.max_iters) + " iterations");
    }
    beta -= step * grad;
    grad = X.transpose() * (X * beta - y);
    ++iter;
  }
  const double ratio = grad.norm() / std::max((X.transpose() * y).norm(), kAbsFloor);
  return {{std::move(beta), Provenance::gd_oracle, beta0}, iter, ratio};
}

}  // namespace latentcl
