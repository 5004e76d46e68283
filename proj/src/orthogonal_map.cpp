#include "latentcl/orthogonal_map.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace latentcl {

namespace {

constexpr double kSpanTolerance = 1e-8;

// Removes the range(basis) component of v; two passes keep the result
// orthogonal to working precision.
Matrix project_out(const Matrix& basis, Matrix v) {
  if (basis.cols() == 0) return v;
  for (int pass = 0; pass < 2; ++pass) v.noalias() -= basis * (basis.transpose() * v);
  return v;
}

// Thin QR by two rounds of Cholesky QR. The triangular factor has a positive
// diagonal, so for Gaussian input Q is the sign-corrected QR factor that
// haar_frame computes by Householder reflections. Returns nullopt when v is too
// ill-conditioned for the Gram route (cond(v) beyond ~1e7).
std::optional<Matrix> cholesky_qr2(Matrix v) {
  for (int pass = 0; pass < 2; ++pass) {
    Matrix gram = Matrix::Zero(v.cols(), v.cols());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(v.transpose());
    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success || !(llt.rcond() >= 1e-14)) return std::nullopt;
    // v <- v R^{-1} with R = L^T
    llt.matrixU().solveInPlace<Eigen::OnTheRight>(v);
  }
  return v;
}

// Realizes O on range(queries) given O known_from = known_to. Returns the new
// (from, to) directions that extend the pair.
std::pair<Matrix, Matrix> extend(RngStream& rng, const Matrix& known_from, const Matrix& known_to,
                                 const Matrix& queries) {
  const Index p = queries.rows();
  const std::pair<Matrix, Matrix> nothing{Matrix(p, 0), Matrix(p, 0)};
  if (queries.cols() == 0) return nothing;
  const Matrix fresh = project_out(known_from, queries);
  // The residual of a vector already in the span is pure rounding noise, so
  // rank is judged against the size of the queries themselves.
  const double query_scale = queries.colwise().norm().maxCoeff();
  if (query_scale == 0.0) return nothing;
  const double fresh_scale = fresh.colwise().norm().maxCoeff();
  if (fresh_scale <= 1e-10 * query_scale) return nothing;

  Matrix new_from;
  const double min_fresh = fresh.colwise().norm().minCoeff();
  std::optional<Matrix> fast;
  if (min_fresh > 1e-10 * query_scale) fast = cholesky_qr2(fresh);
  if (fast) {
    new_from = project_out(known_from, std::move(*fast));
  } else {
    new_from = project_out(known_from, orthonormal_range(fresh, 1e-10 * query_scale / fresh_scale));
    new_from = orthonormal_range(new_from, 1e-10);
  }
  const Index r = new_from.cols();
  if (r == 0) return nothing;
  if (known_to.cols() + r > p) throw NumericalError("orthogonal map: realized rank exceeds dimension");

  // Uniform r-frame in the complement of known_to.
  const Matrix g = project_out(known_to, gaussian_matrix(rng, p, r));
  Matrix new_to;
  if (auto q = cholesky_qr2(g)) {
    new_to = std::move(*q);
  } else {
    Eigen::HouseholderQR<Matrix> qr(g);
    new_to = qr.householderQ() * Matrix::Identity(p, r);
    for (Index j = 0; j < r; ++j) {
      const double rjj = qr.matrixQR()(j, j);
      if (rjj == 0.0 || !std::isfinite(rjj)) throw NumericalError("orthogonal map: QR breakdown");
      if (rjj < 0.0) new_to.col(j) = -new_to.col(j);
    }
  }
  new_to = project_out(known_to, std::move(new_to));
  return {std::move(new_from), std::move(new_to)};
}

void append_columns(Matrix& m, const Matrix& extra) {
  if (extra.cols() == 0) return;
  Matrix joined(m.rows(), m.cols() + extra.cols());
  joined << m, extra;
  m = std::move(joined);
}

}  // namespace

OrthogonalMap OrthogonalMap::identity(Index p) {
  if (p < 1) throw std::invalid_argument("orthogonal map dimension must be positive");
  return OrthogonalMap(Kind::identity, p);
}

OrthogonalMap OrthogonalMap::from_dense(Matrix o) {
  if (o.rows() != o.cols() || o.rows() < 1) throw std::invalid_argument("orthogonal map must be square");
  const Index p = o.rows();
  const double err = (o.transpose() * o - Matrix::Identity(p, p)).norm();
  if (!(err <= 1e-10 * std::sqrt(static_cast<double>(p)))) {
    throw std::invalid_argument("matrix is not orthogonal");
  }
  OrthogonalMap out(Kind::dense, p);
  out.dense_ = std::move(o);
  return out;
}

OrthogonalMap OrthogonalMap::sample_dense(RngStream& rng, Index p) {
  return from_dense(haar_orthogonal(rng, p));
}

OrthogonalMap OrthogonalMap::sample_partial(RngStream& rng, Index p, const Matrix& forward,
                                            const Matrix& backward) {
  if (p < 1) throw std::invalid_argument("orthogonal map dimension must be positive");
  if ((forward.cols() > 0 && forward.rows() != p) || (backward.cols() > 0 && backward.rows() != p)) {
    throw std::invalid_argument("orthogonal map: query dimension mismatch");
  }
  OrthogonalMap out(Kind::partial, p);
  out.domain_ = Matrix(p, 0);
  out.image_ = Matrix(p, 0);

  if (forward.cols() > 0) {
    auto [from, to] = extend(rng, out.domain_, out.image_, forward);
    append_columns(out.domain_, from);
    append_columns(out.image_, to);
  }
  if (backward.cols() > 0) {
    // O^T is Haar as well, with O^T image = domain.
    auto [from, to] = extend(rng, out.image_, out.domain_, backward);
    append_columns(out.image_, from);
    append_columns(out.domain_, to);
  }
  return out;
}

Index OrthogonalMap::realized_rank() const noexcept {
  return kind_ == Kind::partial ? domain_.cols() : p_;
}

Matrix OrthogonalMap::map_through(const Matrix& from, const Matrix& to, const Matrix& v) {
  const Matrix coeff = from.transpose() * v;
  const Matrix outside = v - from * coeff;
  for (Index j = 0; j < v.cols(); ++j) {
    const double scale = std::max(v.col(j).norm(), kAbsFloor);
    if (outside.col(j).norm() > kSpanTolerance * scale) {
      throw std::domain_error("orthogonal map applied outside its realized subspace");
    }
  }
  return to * coeff;
}

Matrix OrthogonalMap::apply_block(const Matrix& v) const {
  if (v.rows() != p_) throw std::invalid_argument("orthogonal map: dimension mismatch");
  switch (kind_) {
    case Kind::identity:
      return v;
    case Kind::dense:
      return dense_ * v;
    case Kind::partial:
      return map_through(domain_, image_, v);
  }
  return v;
}

Matrix OrthogonalMap::apply_transpose_block(const Matrix& v) const {
  if (v.rows() != p_) throw std::invalid_argument("orthogonal map: dimension mismatch");
  switch (kind_) {
    case Kind::identity:
      return v;
    case Kind::dense:
      return dense_.transpose() * v;
    case Kind::partial:
      return map_through(image_, domain_, v);
  }
  return v;
}

Vector OrthogonalMap::apply(const Vector& v) const { return apply_block(v); }

Vector OrthogonalMap::apply_transpose(const Vector& v) const { return apply_transpose_block(v); }

Matrix OrthogonalMap::dense() const {
  switch (kind_) {
    case Kind::identity:
      return Matrix::Identity(p_, p_);
    case Kind::dense:
      return dense_;
    case Kind::partial:
      if (domain_.cols() != p_) throw std::logic_error("partial orthogonal map is not fully realized");
      return image_ * domain_.transpose();
  }
  return {};
}

}  // namespace latentcl
