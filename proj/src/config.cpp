#include "latentcl/config.hpp"

#include <cstdlib>
#include <limits>
#include <set>

#include "latentcl/errors.hpp"
#include "latentcl/report.hpp"

namespace latentcl {

namespace {

using nlohmann::json;

template <typename E>
struct Names {
  std::vector<std::pair<E, const char*>> entries;

  E parse(const json& v, const std::string& key) const {
    if (!v.is_string()) throw ConfigError(key + " must be a string");
    const std::string s = v.get<std::string>();
    for (const auto& [value, name] : entries) {
      if (s == name) return value;
    }
    std::string allowed;
    for (const auto& [value, name] : entries) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
    throw ConfigError(key + ": unknown value '" + s + "' (expected one of " + allowed + ")");
  }

  const char* name(E value) const {
    for (const auto& [v, n] : entries) {
      if (v == value) return n;
    }
    return "?";
  }
};

const Names<ThetaMode> kThetaModes{{{ThetaMode::basis, "basis"}, {ThetaMode::random, "random"}}};
const Names<WMode> kWModes{{{WMode::axis_aligned, "axis_aligned"}, {WMode::random_rotation, "random_rotation"}}};
const Names<RotationMode> kRotations{
    {{RotationMode::partial, "partial"}, {RotationMode::dense, "dense"}, {RotationMode::identity, "identity"}}};
const Names<RiskSampler> kSamplers{{{RiskSampler::projected, "projected"}, {RiskSampler::full, "full"}}};
const Names<VariantSelection> kVariants{{{VariantSelection::latent, "latent"},
                                         {VariantSelection::surrogate, "surrogate"},
                                         {VariantSelection::both, "both"}}};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

std::int64_t as_integer(const json& v, const std::string& key, std::int64_t min_value) {
  if (!v.is_number_integer()) throw ConfigError(key + " must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < min_value) throw ConfigError(key + " must be >= " + std::to_string(min_value));
  return x;
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key + " must be finite");
  return x;
}

template <typename F>
auto axis_values(const json& v, const std::string& key, F convert) {
  std::vector<decltype(convert(v, key))> out;
  if (v.is_array()) {
    if (v.empty()) throw ConfigError("grid." + key + " must not be empty");
    for (const json& item : v) out.push_back(convert(item, "grid." + key));
  } else {
    out.push_back(convert(v, "grid." + key));
  }
  return out;
}

std::vector<GridPoint> parse_grid(const json& g) {
  if (!g.is_object()) throw ConfigError("grid must be an object");
  reject_unknown(g, {"d", "n", "p", "p_multipliers", "gamma"}, "grid");
  for (const char* key : {"d", "n", "gamma"}) {
    if (!g.contains(key)) throw ConfigError(std::string("grid.") + key + " is required");
  }
  if (g.contains("p") == g.contains("p_multipliers")) {
    throw ConfigError("grid needs exactly one of p and p_multipliers");
  }
  const auto integer = [](const json& v, const std::string& key) { return as_integer(v, key, 1); };
  const auto number = [](const json& v, const std::string& key) { return as_number(v, key); };
  const auto ds = axis_values(g["d"], "d", integer);
  const auto ns = axis_values(g["n"], "n", integer);
  const auto gammas = axis_values(g["gamma"], "gamma", number);
  const bool multipliers = g.contains("p_multipliers");
  const auto ps = multipliers ? axis_values(g["p_multipliers"], "p_multipliers", number)
                              : std::vector<double>{};
  const auto ps_abs = multipliers ? std::vector<std::int64_t>{} : axis_values(g["p"], "p", integer);

  std::vector<GridPoint> out;
  for (auto d : ds) {
    for (auto n : ns) {
      for (double gamma : gammas) {
        const std::size_t count = multipliers ? ps.size() : ps_abs.size();
        for (std::size_t i = 0; i < count; ++i) {
          GridPoint pt{d, n, 0, gamma};
          if (multipliers) {
            const double p = ps[i] * static_cast<double>(n);
            if (!(ps[i] > 0.0) || p != std::floor(p)) {
              throw ConfigError("grid.p_multipliers: multiplier " + std::to_string(ps[i]) +
                                " times n must be a positive integer");
            }
            pt.p = static_cast<Index>(p);
          } else {
            pt.p = ps_abs[i];
          }
          out.push_back(pt);
        }
      }
    }
  }
  return out;
}

std::vector<GridPoint> parse_points(const json& list) {
  if (!list.is_array()) throw ConfigError("points must be a list");
  std::vector<GridPoint> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& item = list[i];
    const std::string where = "points[" + std::to_string(i) + "]";
    if (!item.is_object()) throw ConfigError(where + " must be an object");
    reject_unknown(item, {"d", "n", "p", "gamma"}, where);
    for (const char* key : {"d", "n", "p", "gamma"}) {
      if (!item.contains(key)) throw ConfigError(where + "." + key + " is required");
    }
    out.push_back({as_integer(item["d"], where + ".d", 1), as_integer(item["n"], where + ".n", 1),
                   as_integer(item["p"], where + ".p", 1), as_number(item["gamma"], where + ".gamma")});
  }
  return out;
}

}  // namespace

SweepSpec RunConfig::sweep_spec() const {
  SweepSpec spec;
  spec.trials_per_point = trials_per_point;
  spec.n_test = n_test;
  spec.root_seed = root_seed;
  spec.model_variant = model_variant;
  spec.rotation = rotation;
  spec.sampler = sampler;
  if (!(theta_norm_sq >= 0.0) || !std::isfinite(theta_norm_sq)) {
    throw ConfigError("theta_norm_sq must be finite and >= 0");
  }
  for (const GridPoint& pt : points) {
    ModelConfig cfg;
    cfg.d = pt.d;
    cfg.n = pt.n;
    cfg.p = pt.p;
    cfg.gamma = pt.gamma;
    cfg.w_mode = w_mode;
    cfg.seed = root_seed;
    cfg.theta = ModelConfig::make_theta(pt.d, theta_norm_sq, theta_mode, root_seed);
    spec.grid.push_back(std::move(cfg));
  }
  spec.validate();
  return spec;
}

RunConfig default_run_config() {
  RunConfig cfg;
  for (Index p : {2000, 4000, 8000, 16000}) cfg.points.push_back({5, 100, p, 1.0});
  return cfg;
}

RunConfig parse_run_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc,
                 {"grid", "points", "theta_norm_sq", "theta_mode", "w_mode", "rotation", "risk_sampler",
                  "model_variant", "trials_per_point", "n_test", "root_seed", "threads", "output_dir", "verbosity",
                  "checks", "determinism_sample", "verify_trials"},
                 "config");

  RunConfig cfg = default_run_config();
  if (doc.contains("grid") && doc.contains("points")) throw ConfigError("config takes grid or points, not both");
  if (doc.contains("grid")) cfg.points = parse_grid(doc["grid"]);
  if (doc.contains("points")) cfg.points = parse_points(doc["points"]);
  if (doc.contains("theta_norm_sq")) cfg.theta_norm_sq = as_number(doc["theta_norm_sq"], "theta_norm_sq");
  if (doc.contains("theta_mode")) cfg.theta_mode = kThetaModes.parse(doc["theta_mode"], "theta_mode");
  if (doc.contains("w_mode")) cfg.w_mode = kWModes.parse(doc["w_mode"], "w_mode");
  if (doc.contains("rotation")) cfg.rotation = kRotations.parse(doc["rotation"], "rotation");
  if (doc.contains("risk_sampler")) cfg.sampler = kSamplers.parse(doc["risk_sampler"], "risk_sampler");
  if (doc.contains("model_variant")) cfg.model_variant = kVariants.parse(doc["model_variant"], "model_variant");
  if (doc.contains("trials_per_point")) {
    cfg.trials_per_point = static_cast<std::size_t>(as_integer(doc["trials_per_point"], "trials_per_point", 1));
  }
  if (doc.contains("n_test")) cfg.n_test = as_integer(doc["n_test"], "n_test", 1000);
  if (doc.contains("root_seed")) {
    const json& v = doc["root_seed"];
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ConfigError("root_seed must be a non-negative integer");
    }
    cfg.root_seed = v.get<std::uint64_t>();
  }
  if (doc.contains("threads")) {
    const auto t = as_integer(doc["threads"], "threads", 0);
    if (t > 1024) throw ConfigError("threads must be <= 1024");
    cfg.threads = static_cast<unsigned>(t);
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string() || doc["output_dir"].get<std::string>().empty()) {
      throw ConfigError("output_dir must be a non-empty string");
    }
    cfg.output_dir = doc["output_dir"].get<std::string>();
  }
  if (doc.contains("verbosity")) {
    const auto v = as_integer(doc["verbosity"], "verbosity", 0);
    if (v > 2) throw ConfigError("verbosity must be 0, 1 or 2");
    cfg.verbosity = static_cast<int>(v);
  }
  if (doc.contains("checks")) {
    const json& c = doc["checks"];
    if (!c.is_object()) throw ConfigError("checks must be an object");
    const auto& ids = all_check_ids();
    reject_unknown(c, std::set<std::string>(ids.begin(), ids.end()), "checks");
    for (const auto& [key, value] : c.items()) {
      if (!value.is_boolean()) throw ConfigError("checks." + key + " must be true or false");
      cfg.checks.enabled[key] = value.get<bool>();
    }
  }
  if (doc.contains("determinism_sample")) {
    const json& v = doc["determinism_sample"];
    if (v.is_string() && v.get<std::string>() == "full") {
      cfg.determinism_sample.reset();
    } else {
      cfg.determinism_sample = static_cast<std::size_t>(as_integer(v, "determinism_sample", 0));
    }
  }
  if (doc.contains("verify_trials")) {
    cfg.verify_trials = static_cast<std::size_t>(as_integer(doc["verify_trials"], "verify_trials", 1));
  }
  if (cfg.points.empty()) throw ConfigError("sweep grid is empty");
  cfg.sweep_spec();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(read_text_file(path)); }

nlohmann::json to_json(const RunConfig& cfg) {
  json points = json::array();
  for (const GridPoint& pt : cfg.points) points.push_back({{"d", pt.d}, {"n", pt.n}, {"p", pt.p}, {"gamma", pt.gamma}});
  json checks = json::object();
  for (const std::string& id : all_check_ids()) checks[id] = cfg.checks(id);
  json out = {{"points", points},
              {"theta_norm_sq", cfg.theta_norm_sq},
              {"theta_mode", kThetaModes.name(cfg.theta_mode)},
              {"w_mode", kWModes.name(cfg.w_mode)},
              {"rotation", kRotations.name(cfg.rotation)},
              {"risk_sampler", kSamplers.name(cfg.sampler)},
              {"model_variant", kVariants.name(cfg.model_variant)},
              {"trials_per_point", cfg.trials_per_point},
              {"n_test", cfg.n_test},
              {"root_seed", cfg.root_seed},
              {"threads", cfg.threads},
              {"output_dir", cfg.output_dir},
              {"verbosity", cfg.verbosity},
              {"checks", checks},
              {"verify_trials", cfg.verify_trials}};
  out["determinism_sample"] = cfg.determinism_sample ? json(*cfg.determinism_sample) : json("full");
  return out;
}

std::optional<unsigned> threads_from_environment() {
  const char* raw = std::getenv("LATENTCL_THREADS");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 1 || v > 1024) {
    throw ConfigError(std::string("LATENTCL_THREADS must be an integer in [1, 1024], got '") + raw + "'");
  }
  return static_cast<unsigned>(v);
}

}  // namespace latentcl
