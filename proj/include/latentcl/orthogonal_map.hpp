#pragma once

#include "latentcl/linalg.hpp"

namespace latentcl {

/// An orthogonal p x p transformation O, held in one of three forms:
///
///  - identity: O = I_p (diagnostic override).
///  - dense: an explicit matrix, e.g. from haar_orthogonal.
///  - partial: a Haar-distributed O that is only realized on the subspaces the
///    caller needs. The map stores orthonormal frames D (domain) and I (image)
///    with O D = I. Given the realized part, the rest of a Haar O is a Haar
///    isometry between the orthogonal complements, so each extension draws the
///    new image directions as a sign-corrected Gaussian QR frame inside the
///    complement of I (or, going backwards, new domain directions inside the
///    complement of D). The resulting joint law of every queried product is
///    exactly that of a full Haar draw, at O(p k^2) cost instead of O(p^3).
///
/// Instances are immutable once constructed. Applying a partial map to a
/// vector outside its realized subspace throws std::domain_error.
class OrthogonalMap {
 public:
  enum class Kind { identity, dense, partial };

  static OrthogonalMap identity(Index p);
  static OrthogonalMap from_dense(Matrix o);
  static OrthogonalMap sample_dense(RngStream& rng, Index p);

  /// Haar O realized so that O can be applied to range(forward) and O^T to
  /// range(backward). Extensions happen in that order; the draw is a pure
  /// function of (rng state, forward, backward).
  static OrthogonalMap sample_partial(RngStream& rng, Index p, const Matrix& forward,
                                      const Matrix& backward);

  Kind kind() const noexcept { return kind_; }
  Index dim() const noexcept { return p_; }
  /// Dimension of the realized subspace (p for identity and dense maps).
  Index realized_rank() const noexcept;

  Vector apply(const Vector& v) const;
  Vector apply_transpose(const Vector& v) const;
  Matrix apply_block(const Matrix& v) const;
  Matrix apply_transpose_block(const Matrix& v) const;

  /// Explicit matrix; only available when the whole space is realized.
  Matrix dense() const;

 private:
  OrthogonalMap(Kind kind, Index p) : kind_(kind), p_(p) {}

  static Matrix map_through(const Matrix& from, const Matrix& to, const Matrix& v);

  Kind kind_;
  Index p_;
  Matrix dense_;
  Matrix domain_;
  Matrix image_;
};

}  // namespace latentcl
