#include "latentcl/model.hpp"

#include <cmath>

namespace latentcl {

std::string to_string(WMode mode) {
  return mode == WMode::axis_aligned ? "axis-aligned" : "random-rotation";
}

std::string to_string(RotationMode mode) {
  switch (mode) {
    case RotationMode::partial:
      return "partial";
    case RotationMode::dense:
      return "dense";
    case RotationMode::identity:
      return "identity";
  }
  return "?";
}

std::string to_string(ModelVariant variant) {
  return variant == ModelVariant::latent ? "latent" : "surrogate";
}

Vector ModelConfig::make_theta(Index d, double theta_norm_sq, ThetaMode mode, std::uint64_t seed) {
  if (d < 1) throw ConfigError("theta: d must be >= 1");
  if (!(theta_norm_sq >= 0.0) || !std::isfinite(theta_norm_sq)) {
    throw ConfigError("theta: squared norm must be finite and non-negative");
  }
  const double norm = std::sqrt(theta_norm_sq);
  if (mode == ThetaMode::basis) {
    Vector t = Vector::Zero(d);
    t(0) = norm;
    return t;
  }
  // Lane 7 keeps theta draws apart from any trial stream sharing the seed.
  RngStream rng(seed, 0, 7);
  Vector t = gaussian_vector(rng, d);
  return t * (norm / t.norm());
}

void ModelConfig::validate() const {
  if (d < 1) throw ConfigError("d must be >= 1");
  if (n < d) throw PremiseError("premise violated: n >= d is required (d=" + std::to_string(d) +
                               ", n=" + std::to_string(n) + ")");
  if (p < n) throw PremiseError("premise violated: overparameterized regime requires p >= n (n=" +
                               std::to_string(n) + ", p=" + std::to_string(p) + ")");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be finite and > 0");
  if (theta.size() != d) throw ConfigError("theta must have d entries");
  if (!theta.allFinite()) throw ConfigError("theta must be finite");
}

bool ModelConfig::within_theorem_premises() const {
  return n >= d && p >= 20 * n &&
         gamma >= 1.0 / std::sqrt(static_cast<double>(n) * static_cast<double>(d));
}

FeatureMap::FeatureMap(Matrix w, double gamma) : w_(std::move(w)), gamma_(gamma) {
  if (w_.rows() < w_.cols() || w_.cols() < 1) throw ConfigError("feature map needs p >= d >= 1");
  if (!(gamma_ > 0.0)) throw ConfigError("feature map needs gamma > 0");
  scale_ = static_cast<double>(w_.rows()) * gamma_;
  const Index d = w_.cols();
  const double err = (w_.transpose() * w_ - scale_ * Matrix::Identity(d, d)).norm();
  if (!(err <= 1e-10 * scale_ * std::sqrt(static_cast<double>(d)))) {
    throw ConfigError("feature map violates W^T W = p gamma I_d");
  }
  basis_ = w_ / std::sqrt(scale_);
}

FeatureMap build_feature_map(const ModelConfig& cfg, RngStream& rng) {
  cfg.validate();
  const double root = std::sqrt(static_cast<double>(cfg.p) * cfg.gamma);
  Matrix w;
  if (cfg.w_mode == WMode::axis_aligned) {
    w = Matrix::Zero(cfg.p, cfg.d);
    w.topRows(cfg.d).diagonal().setConstant(root);
  } else {
    w = root * haar_frame(rng, cfg.p, cfg.d);
  }
  return FeatureMap(std::move(w), cfg.gamma);
}

InducedParams derive_induced(const ModelConfig& cfg, const FeatureMap& fm) {
  if (cfg.theta.size() != fm.d()) throw ConfigError("theta dimension does not match W");
  const double shrink = 1.0 / (fm.signal_scale() + 1.0);
  return {fm.W() * cfg.theta * shrink, cfg.theta.squaredNorm() * shrink};
}

OrthogonalMap draw_rotation(const Matrix& X_A, const FeatureMap& fm, RngStream& rng,
                            RotationMode rotation) {
  const Index p = X_A.cols();
  switch (rotation) {
    case RotationMode::identity:
      return OrthogonalMap::identity(p);
    case RotationMode::dense:
      return OrthogonalMap::sample_dense(rng, p);
    case RotationMode::partial: {
      Matrix forward(p, X_A.rows() + fm.d());
      forward << X_A.transpose(), fm.W();
      return OrthogonalMap::sample_partial(rng, p, forward, X_A.transpose());
    }
  }
  throw std::logic_error("unknown rotation mode");
}

namespace {

TaskPair assemble(Matrix x_a, Vector y, Matrix latents, Matrix noise, const FeatureMap& fm, RngStream& rng,
                  RotationMode rotation) {
  OrthogonalMap o = draw_rotation(x_a, fm, rng, rotation);
  Matrix x_b = o.apply_block(x_a.transpose()).transpose();
  return TaskPair{std::move(x_a), std::move(x_b), std::move(o), std::move(y), std::move(latents),
                  std::move(noise)};
}

}  // namespace

TaskPair sample_task_pair(const ModelConfig& cfg, const FeatureMap& fm, RngStream& rng, RotationMode rotation) {
  cfg.validate();
  Matrix z = gaussian_matrix(rng, cfg.n, cfg.d);
  Matrix u = gaussian_matrix(rng, cfg.n, cfg.p);
  Matrix x_a = z * fm.W().transpose() + u;
  Vector y = z * cfg.theta;
  return assemble(std::move(x_a), std::move(y), std::move(z), std::move(u), fm, rng, rotation);
}

SurrogateTask sample_surrogate(const ModelConfig& cfg, const FeatureMap& fm, RngStream& rng) {
  cfg.validate();
  const InducedParams induced = derive_induced(cfg, fm);
  Matrix z = gaussian_matrix(rng, cfg.n, cfg.d);
  Matrix u = gaussian_matrix(rng, cfg.n, cfg.p);
  Matrix a = z * fm.W().transpose() + u;
  Vector eps = std::sqrt(induced.sigma2) * gaussian_vector(rng, cfg.n);
  Vector y = a * induced.beta_star + eps;
  return SurrogateTask{std::move(a), std::move(y), induced.beta_star, induced.sigma2, std::move(eps),
                       std::move(z), std::move(u)};
}

TaskPair pair_from_surrogate(const SurrogateTask& task, const FeatureMap& fm, RngStream& rng,
                             RotationMode rotation) {
  return assemble(task.A, task.y, task.latents, task.feature_noise, fm, rng, rotation);
}

}  // namespace latentcl
