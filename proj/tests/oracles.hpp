#pragma once

// Dense reference computations used only by the tests. They share no code
// path with the library: pseudoinverses come from JacobiSVD, projectors from
// an explicit inverse, risks from a materialized covariance.

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline Matrix pinv(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double cutoff = 1e-13 * svd.singularValues()(0);
  Vector inv = svd.singularValues();
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = inv(i) > cutoff ? 1.0 / inv(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// X^T (X X^T)^{-1} X for full-row-rank X.
inline Matrix row_space_projector(const Matrix& x) {
  const Matrix gram = x * x.transpose();
  return x.transpose() * gram.fullPivLu().inverse() * x;
}

/// sigma^2 + (b - beta)^T (W W^T + I) (b - beta)
inline double dense_risk(const Vector& b, const Matrix& w, const Vector& beta, double sigma2) {
  const Matrix sigma = w * w.transpose() + Matrix::Identity(w.rows(), w.rows());
  const Vector delta = b - beta;
  return sigma2 + delta.dot(sigma * delta);
}

/// Singular values of X, descending, from the eigenvalues of the smaller Gram matrix.
inline Vector singular_values_via_gram(const Matrix& x) {
  const Matrix gram = x.rows() <= x.cols() ? Matrix(x * x.transpose()) : Matrix(x.transpose() * x);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  Vector s = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return s.reverse();
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-14); }

inline double rel(const Vector& a, const Vector& b) { return (a - b).norm() / std::max(b.norm(), 1e-14); }

}  // namespace oracle
