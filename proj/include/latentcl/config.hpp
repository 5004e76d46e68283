#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "latentcl/checks.hpp"
#include "latentcl/experiments.hpp"

namespace latentcl {

/// Parsed run configuration. The JSON document is strict: unknown keys, wrong
/// types and out-of-range values raise ConfigError before any work starts.
///
///   {
///     "grid": {"d": 5, "n": 100, "gamma": 1.0, "p": [2000, 4000, 8000, 16000]},
///     "theta_norm_sq": 1.0, "theta_mode": "basis", "w_mode": "axis_aligned",
///     "rotation": "partial", "risk_sampler": "projected", "model_variant": "latent",
///     "trials_per_point": 200, "n_test": 20000, "root_seed": 20240501,
///     "threads": 0, "output_dir": "out", "verbosity": 1,
///     "checks": {"determinism": true, ...}, "determinism_sample": "full",
///     "verify_trials": 25
///   }
///
/// Grid axes take a number or a list; points are the Cartesian product with p
/// innermost. "p_multipliers" (p = m * n) may replace "p", and an explicit
/// "points" list of {d, n, p, gamma} objects may replace "grid".
struct GridPoint {
  Index d = 1;
  Index n = 1;
  Index p = 1;
  double gamma = 1.0;
};

struct RunConfig {
  std::vector<GridPoint> points;
  std::size_t trials_per_point = 200;
  Index n_test = 20000;
  std::uint64_t root_seed = 20240501;
  VariantSelection model_variant = VariantSelection::latent;
  RotationMode rotation = RotationMode::partial;
  RiskSampler sampler = RiskSampler::projected;
  double theta_norm_sq = 1.0;
  ThetaMode theta_mode = ThetaMode::basis;
  WMode w_mode = WMode::axis_aligned;
  /// 0 defers to the environment and then to the hardware.
  unsigned threads = 0;
  std::string output_dir = "out";
  int verbosity = 1;
  CheckSelection checks = CheckSelection::all();
  /// Trials per point re-run for the determinism check; nullopt re-runs the full sweep.
  std::optional<std::size_t> determinism_sample;
  std::size_t verify_trials = 25;

  /// Sweep over `points`; a random theta is drawn from root_seed. Validated.
  SweepSpec sweep_spec() const;
};

/// The default acceptance grid: d=5, n=100, gamma=1, ||theta||^2=1,
/// p in {2000, 4000, 8000, 16000}, 200 trials per point, n_test = 20000.
RunConfig default_run_config();

RunConfig parse_run_config(std::string_view text);
/// Reads and parses a file; IoError when unreadable.
RunConfig load_run_config(const std::filesystem::path& path);

/// Normalized JSON echo (explicit points), accepted back by parse_run_config.
nlohmann::json to_json(const RunConfig& cfg);

/// Thread count from LATENTCL_THREADS, if set to a positive integer. ConfigError otherwise.
std::optional<unsigned> threads_from_environment();

}  // namespace latentcl
