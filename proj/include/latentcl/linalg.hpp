#pragma once

#include <Eigen/Dense>

#include <optional>

#include "latentcl/errors.hpp"
#include "latentcl/rng.hpp"

namespace latentcl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Absolute floor used by every relative tolerance so that zero inputs compare cleanly.
inline constexpr double kAbsFloor = 1e-14;

/// ||a - b|| / max(||b||, kAbsFloor).
double relative_gap(const Vector& a, const Vector& b);

bool all_finite(const Matrix& m);

/// rows x cols matrix of i.i.d. N(0, 1) entries, filled in row-major order.
Matrix gaussian_matrix(RngStream& rng, Index rows, Index cols);
Vector gaussian_vector(RngStream& rng, Index size);

/// Haar-distributed p x p orthogonal matrix: Householder QR of a Gaussian
/// matrix with the columns of Q flipped so that diag(R) > 0.
Matrix haar_orthogonal(RngStream& rng, Index p);

/// First k columns of a Haar orthogonal p x p matrix (a uniform point on the
/// Stiefel manifold), drawn as the sign-corrected QR factor of a p x k
/// Gaussian matrix.
Matrix haar_frame(RngStream& rng, Index p, Index k);

/// Orthonormal basis for range(V) with rank revealed at relative tolerance
/// `rank_tol` (relative to the largest pivot). Returns a p x r matrix, r may be 0.
Matrix orthonormal_range(const Matrix& V, double rank_tol = 1e-10);

/// Minimum-distance interpolation for a wide design X (n <= p, full row rank).
///
/// Factors the n x n Gram matrix XX^T once and then answers
///   solve(y, b0) = b0 + X^T (XX^T)^{-1} (y - X b0),
/// the point of {b : Xb = y} closest to b0. Cholesky is the primary path; when
/// its reciprocal condition estimate drops below 1e-12 the solver switches to
/// a thin SVD of X, and a numerically rank-deficient X raises NumericalError.
/// Every solve is checked for interpolation (relative residual <= 1e-8).
class MinNormSolver {
 public:
  explicit MinNormSolver(const Matrix& X);

  Vector solve(const Vector& y, const Vector& beta0) const;
  Vector solve(const Vector& y) const;

  bool used_svd_fallback() const noexcept { return svd_.has_value(); }
  Index rows() const noexcept { return X_.rows(); }
  Index cols() const noexcept { return X_.cols(); }

 private:
  Matrix X_;
  Eigen::LLT<Matrix> llt_;
  struct SvdFactors {
    Matrix U;
    Vector s;
    Matrix V;
  };
  std::optional<SvdFactors> svd_;
};

/// beta0 + X^+ (y - X beta0) for full-row-rank X; see MinNormSolver.
Vector min_norm_solve(const Matrix& X, const Vector& y, const Vector& beta0);

struct Projection {
  Vector onto;      ///< component in range(X^T)
  Vector residual;  ///< component in null(X)
};

/// Splits v against the row space of X using a Householder QR of X^T. This
/// deliberately shares no factorization with MinNormSolver.
Projection orth_projector_apply(const Matrix& X, const Vector& v);

struct SvdResult {
  Matrix U;  ///< rows x k
  Vector s;  ///< k = min(rows, cols), non-negative, descending
  Matrix V;  ///< cols x k
};

/// Thin singular value decomposition.
SvdResult svd(const Matrix& X);

}  // namespace latentcl
