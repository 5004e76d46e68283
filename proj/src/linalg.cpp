#include "latentcl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace latentcl {

namespace {

void require_dims(Index rows, Index cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("matrix dimensions must be positive, got " + std::to_string(rows) +
                                "x" + std::to_string(cols));
  }
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw NumericalError(std::string("non-finite entries in ") + what);
}

// Rank test shared by the SVD fallback and the projector: a pivot / singular
// value counts as zero below max(n, p) * eps of the largest one.
double rank_cutoff(Index rows, Index cols) {
  return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon();
}

}  // namespace

double relative_gap(const Vector& a, const Vector& b) {
  return (a - b).norm() / std::max(b.norm(), kAbsFloor);
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

Matrix gaussian_matrix(RngStream& rng, Index rows, Index cols) {
  require_dims(rows, cols);
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) out(i, j) = rng.normal();
  }
  return out;
}

Vector gaussian_vector(RngStream& rng, Index size) {
  require_dims(size, 1);
  Vector out(size);
  for (Index i = 0; i < size; ++i) out(i) = rng.normal();
  return out;
}

Matrix haar_frame(RngStream& rng, Index p, Index k) {
  require_dims(p, k);
  if (k > p) throw std::invalid_argument("haar_frame: k must not exceed p");
  const Matrix g = gaussian_matrix(rng, p, k);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(p, k);
  const auto& r = qr.matrixQR();
  for (Index j = 0; j < k; ++j) {
    const double rjj = r(j, j);
    if (rjj == 0.0 || !std::isfinite(rjj)) {
      throw NumericalError("haar sampling: QR breakdown on a Gaussian matrix");
    }
    if (rjj < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

Matrix haar_orthogonal(RngStream& rng, Index p) { return haar_frame(rng, p, p); }

Matrix orthonormal_range(const Matrix& V, double rank_tol) {
  if (V.cols() == 0) return Matrix(V.rows(), 0);
  Eigen::ColPivHouseholderQR<Matrix> qr(V);
  qr.setThreshold(rank_tol);
  const Index r = qr.rank();
  return qr.householderQ() * Matrix::Identity(V.rows(), r);
}

MinNormSolver::MinNormSolver(const Matrix& X) : X_(X) {
  require_dims(X.rows(), X.cols());
  if (X.rows() > X.cols()) {
    throw std::invalid_argument("min-norm solve needs n <= p, got n=" + std::to_string(X.rows()) +
                                ", p=" + std::to_string(X.cols()));
  }
  require_finite(X_, "design matrix");

  Matrix gram = Matrix::Zero(X_.rows(), X_.rows());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(X_);
  llt_.compute(gram);
  if (llt_.info() == Eigen::Success && llt_.rcond() >= 1e-12) return;

  Eigen::BDCSVD<Matrix> dec(X_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) throw NumericalError("min-norm solve: SVD did not converge");
  const Vector& s = dec.singularValues();
  if (s.size() == 0 || s(s.size() - 1) <= s(0) * rank_cutoff(X_.rows(), X_.cols())) {
    throw NumericalError("min-norm solve: design matrix is rank deficient");
  }
  svd_ = SvdFactors{dec.matrixU(), s, dec.matrixV()};
}

Vector MinNormSolver::solve(const Vector& y) const { return solve(y, Vector::Zero(X_.cols())); }

Vector MinNormSolver::solve(const Vector& y, const Vector& beta0) const {
  if (y.size() != X_.rows() || beta0.size() != X_.cols()) {
    throw std::invalid_argument("min-norm solve: dimension mismatch");
  }
  require_finite(y, "responses");
  require_finite(beta0, "initialization");

  const Vector fitted0 = X_ * beta0;
  const Vector r = y - fitted0;
  Vector beta;
  if (svd_) {
    const Vector coeff = (svd_->U.transpose() * r).cwiseQuotient(svd_->s);
    beta = beta0 + svd_->V * coeff;
  } else {
    beta = beta0 + X_.transpose() * llt_.solve(r);
  }
  if (!beta.allFinite()) throw NumericalError("min-norm solve produced non-finite coefficients");

  const double scale = y.norm() + fitted0.norm() + kAbsFloor;
  const double residual = (X_ * beta - y).norm();
  if (residual > 1e-8 * scale) {
    throw NumericalError("min-norm solve: interpolation residual " + std::to_string(residual / scale) +
                         " exceeds 1e-8");
  }
  return beta;
}

Vector min_norm_solve(const Matrix& X, const Vector& y, const Vector& beta0) {
  return MinNormSolver(X).solve(y, beta0);
}

Projection orth_projector_apply(const Matrix& X, const Vector& v) {
  require_dims(X.rows(), X.cols());
  if (X.rows() > X.cols()) throw std::invalid_argument("projector needs n <= p");
  if (v.size() != X.cols()) throw std::invalid_argument("projector: dimension mismatch");
  require_finite(X, "design matrix");
  require_finite(v, "projected vector");

  const Index n = X.rows();
  Eigen::HouseholderQR<Matrix> qr(X.transpose());
  const Vector rdiag = qr.matrixQR().diagonal().cwiseAbs();
  if (rdiag.minCoeff() <= rdiag.maxCoeff() * rank_cutoff(X.rows(), X.cols())) {
    throw NumericalError("projector: design matrix is rank deficient");
  }
  Vector w = qr.householderQ().adjoint() * v;
  w.tail(w.size() - n).setZero();
  Projection out;
  out.onto = qr.householderQ() * w;
  out.residual = v - out.onto;
  return out;
}

SvdResult svd(const Matrix& X) {
  require_dims(X.rows(), X.cols());
  require_finite(X, "svd input");
  Eigen::BDCSVD<Matrix> dec(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) throw NumericalError("svd did not converge");
  return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

}  // namespace latentcl
