#pragma once

#include <cstdint>
#include <string>

#include "latentcl/linalg.hpp"
#include "latentcl/orthogonal_map.hpp"

namespace latentcl {

enum class WMode { axis_aligned, random_rotation };
enum class ThetaMode { basis, random };
enum class RotationMode { partial, dense, identity };
enum class ModelVariant { latent, surrogate };

std::string to_string(WMode mode);
std::string to_string(RotationMode mode);
std::string to_string(ModelVariant variant);

/// One problem-instance family: latent dimension d, sample count n, observed
/// dimension p, signal scale gamma (W^T W = p gamma I_d) and latent parameters theta.
struct ModelConfig {
  Index d = 1;
  Index n = 1;
  Index p = 1;
  double gamma = 1.0;
  Vector theta = Vector::Ones(1);
  WMode w_mode = WMode::axis_aligned;
  std::uint64_t seed = 0;

  /// theta with the requested squared norm: the first basis vector scaled, or a
  /// uniformly random direction drawn from `seed`.
  static Vector make_theta(Index d, double theta_norm_sq, ThetaMode mode, std::uint64_t seed);

  /// Throws ConfigError unless 1 <= d <= n <= p, gamma > 0 and theta is a finite d-vector.
  void validate() const;

  double theta_sq() const { return theta.squaredNorm(); }

  /// n >= d, p >= 20 n and gamma >= 1 / sqrt(n d).
  bool within_theorem_premises() const;
  /// d < n < p; equality cases are accepted for testing but degenerate.
  bool degenerate() const { return !(d < n && n < p); }
};

/// W with W^T W = p gamma I_d, together with the orthonormal basis W / sqrt(p gamma)
/// of its range.
class FeatureMap {
 public:
  FeatureMap(Matrix w, double gamma);

  const Matrix& W() const noexcept { return w_; }
  const Matrix& basis() const noexcept { return basis_; }
  double gamma() const noexcept { return gamma_; }
  /// p * gamma, the common squared column length of W.
  double signal_scale() const noexcept { return scale_; }
  Index p() const noexcept { return w_.rows(); }
  Index d() const noexcept { return w_.cols(); }

  /// P_W v
  Vector project(const Vector& v) const { return basis_ * (basis_.transpose() * v); }

 private:
  Matrix w_;
  double gamma_;
  double scale_;
  Matrix basis_;
};

FeatureMap build_feature_map(const ModelConfig& cfg, RngStream& rng);

/// Quantities of the equivalent noise-on-responses model. The covariance
/// Sigma = WW^T + I = (p gamma + 1) P_W + P_{W-perp} stays implicit in the
/// FeatureMap.
struct InducedParams {
  Vector beta_star;  ///< W theta / (p gamma + 1)
  double sigma2;     ///< ||theta||^2 / (p gamma + 1)
};

InducedParams derive_induced(const ModelConfig& cfg, const FeatureMap& fm);

/// Two tasks sharing responses y, with X_B = X_A O^T.
///
/// For the latent variant y = latents * theta and X_A = latents W^T + feature_noise.
/// Pairs built from a surrogate task keep its Z and U in these fields and its
/// noisy responses in y.
struct TaskPair {
  Matrix X_A;
  Matrix X_B;
  OrthogonalMap O;
  Vector y;
  Matrix latents;
  Matrix feature_noise;
};

TaskPair sample_task_pair(const ModelConfig& cfg, const FeatureMap& fm, RngStream& rng,
                          RotationMode rotation = RotationMode::partial);

/// Single task of the noise-on-responses model: y = A beta + eps with
/// A = Z W^T + U and eps ~ N(0, sigma^2 I_n).
struct SurrogateTask {
  Matrix A;
  Vector y;
  Vector beta_star;
  double sigma2;
  Vector epsilon;
  Matrix latents;
  Matrix feature_noise;
};

SurrogateTask sample_surrogate(const ModelConfig& cfg, const FeatureMap& fm, RngStream& rng);

/// Attaches a rotation O (drawn from rng) and X_B = A O^T to a surrogate task.
TaskPair pair_from_surrogate(const SurrogateTask& task, const FeatureMap& fm, RngStream& rng,
                             RotationMode rotation = RotationMode::partial);

/// Draws O for task A data X_A. Partial maps are realized on range(X_A^T) and
/// range(W) forwards and range(X_A^T) backwards, which covers every product the
/// estimators and risks need.
OrthogonalMap draw_rotation(const Matrix& X_A, const FeatureMap& fm, RngStream& rng, RotationMode rotation);

}  // namespace latentcl
