// latentcl: sweeps, verification and single-draw inspection for the latent
// two-task linear regression model.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "latentcl/checks.hpp"
#include "latentcl/config.hpp"
#include "latentcl/errors.hpp"
#include "latentcl/experiments.hpp"
#include "latentcl/report.hpp"

namespace fs = std::filesystem;
using namespace latentcl;

namespace {

enum Exit : int { kOk = 0, kCheckFailed = 2, kConfigError = 3, kRuntimeError = 4, kIoError = 5, kPremiseError = 6 };

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

RunConfig load(const CommonFlags& flags) {
  RunConfig cfg = flags.config.empty() ? default_run_config() : load_run_config(flags.config);
  if (flags.seed) cfg.root_seed = *flags.seed;
  return cfg;
}

unsigned resolve_threads(const CommonFlags& flags, const RunConfig& cfg) {
  if (flags.threads && *flags.threads > 0) return *flags.threads;
  if (cfg.threads > 0) return cfg.threads;
  if (auto env = threads_from_environment()) return *env;
  return std::max(1u, std::thread::hardware_concurrency());
}

void print_check(const CheckResult& c) {
  const char* tag = c.status == CheckStatus::pass ? "PASS" : c.status == CheckStatus::fail ? "FAIL" : "SKIP";
  std::cout << tag << "  " << c.id << ": " << c.detail << '\n';
}

ProgressFn progress_printer(int verbosity) {
  if (verbosity < 1) return {};
  return [last = std::size_t{0}](std::size_t done, std::size_t total) mutable {
    const std::size_t pct = 100 * done / total;
    if (pct / 10 != last / 10 || done == total) {
      std::fprintf(stderr, "  sweep %zu/%zu trials\n", done, total);
      last = pct;
    }
  };
}

int cmd_run(const CommonFlags& flags, const std::string& out_flag, std::optional<std::size_t> trials,
            std::optional<std::string> determinism_sample) {
  const auto start = std::chrono::steady_clock::now();
  RunConfig cfg = load(flags);
  if (trials) {
    if (*trials < 1) throw ConfigError("--trials must be >= 1");
    cfg.trials_per_point = *trials;
  }
  if (determinism_sample) {
    if (*determinism_sample == "full") {
      cfg.determinism_sample.reset();
    } else {
      try {
        cfg.determinism_sample = std::stoul(*determinism_sample);
      } catch (const std::exception&) {
        throw ConfigError("--determinism-sample takes 'full' or a trial count");
      }
    }
  }
  if (!out_flag.empty()) cfg.output_dir = out_flag;

  SuiteOptions options;
  options.spec = cfg.sweep_spec();
  options.threads = resolve_threads(flags, cfg);
  options.rerun_threads = options.threads == 1 ? 2 : 1;
  options.determinism_sample = cfg.determinism_sample;
  options.selection = cfg.checks;
  options.progress = progress_printer(cfg.verbosity);

  const fs::path out_dir = cfg.output_dir;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw IoError("cannot create output directory " + out_dir.string());
  // Fail on an unwritable directory before the expensive part.
  write_text_file(out_dir / "summary.json", "{}\n");

  if (cfg.verbosity >= 1) {
    std::fprintf(stderr, "latentcl run: %zu points x %zu trials, %u worker(s), seed %llu\n", cfg.points.size(),
                 cfg.trials_per_point, options.threads, static_cast<unsigned long long>(cfg.root_seed));
  }
  const SuiteResult suite = run_suite(options);

  RunTiming timing;
  timing.checks_seconds = suite.checks_seconds;
  timing.sweep_seconds = suite.sweep_seconds;
  double trial_total = 0.0;
  for (const TrialRecord& r : suite.sweep.records) trial_total += r.wall_time;
  timing.mean_trial_seconds = suite.sweep.records.empty() ? 0.0 : trial_total / suite.sweep.records.size();
  timing.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  write_text_file(out_dir / "records.csv", suite.records);
  write_text_file(out_dir / "aggregate.csv", aggregate_csv(suite.sweep.report));
  write_text_file(out_dir / "sweep.svg", sweep_svg(suite.sweep.report));
  write_text_file(out_dir / "summary.json", summary_json(suite.checks, suite.sweep, to_json(cfg), timing).dump(2) + "\n");

  for (const CheckResult& c : suite.checks) print_check(c);
  std::cout << (suite.all_passed() ? "all enabled checks passed" : "some checks failed") << "; outputs in "
            << out_dir.string() << '\n';
  return suite.all_passed() ? kOk : kCheckFailed;
}

int cmd_verify(const CommonFlags& flags, bool corrupt) {
  const RunConfig cfg = load(flags);
  SweepSpec spec = cfg.sweep_spec();
  spec.trials_per_point = cfg.verify_trials;
  const Tolerances tol = corrupt ? Tolerances{}.corrupted() : Tolerances{};

  LemmaCheckOptions lemma;
  lemma.theta_norm_sq = cfg.theta_norm_sq;
  GdCheckOptions gd;
  gd.theta_norm_sq = cfg.theta_norm_sq;

  std::vector<CheckResult> checks;
  checks.push_back(check_lemma_identities(spec.root_seed, lemma, tol));
  checks.push_back(check_gd_oracle(spec.root_seed, gd, tol));
  const SweepResult sweep = run_sweep(spec, resolve_threads(flags, cfg));
  checks.push_back(check_dual_path(sweep.records, tol));
  checks.push_back(check_mc_consistency(sweep.report, tol));

  bool ok = true;
  for (const CheckResult& c : checks) {
    print_check(c);
    ok = ok && c.status == CheckStatus::pass;
  }
  std::cout << (ok ? "verify: all identity checks hold" : "verify: identity checks failed") << '\n';
  return ok ? kOk : kCheckFailed;
}

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : "undefined"; }

int cmd_single(Index d, Index n, Index p, double gamma, std::uint64_t seed, double theta_norm_sq, Index n_test,
               const std::string& rotation) {
  ModelConfig cfg;
  cfg.d = d;
  cfg.n = n;
  cfg.p = p;
  cfg.gamma = gamma;
  cfg.seed = seed;
  cfg.theta = ModelConfig::make_theta(d, theta_norm_sq, ThetaMode::basis, seed);
  cfg.validate();
  if (n_test < 1000) throw ConfigError("--n-test must be >= 1000");

  TrialOptions options;
  options.n_test = n_test;
  if (rotation == "partial") {
    options.rotation = RotationMode::partial;
  } else if (rotation == "dense") {
    options.rotation = RotationMode::dense;
  } else if (rotation == "identity") {
    options.rotation = RotationMode::identity;
  } else {
    throw ConfigError("--rotation must be partial, dense or identity");
  }

  const TrialRecord r = run_trial(cfg, RngStream(seed, RngStream::trial_stream(0, 0)), options);
  const BoundSheet sheet = make_bound_sheet(static_cast<double>(d), static_cast<double>(n), static_cast<double>(p),
                                            gamma, cfg.theta_sq());
  const auto row = [](const std::string& name, const std::string& value) {
    std::printf("  %-40s %s\n", name.c_str(), value.c_str());
  };
  std::printf("instance\n");
  row("d", std::to_string(d));
  row("n", std::to_string(n));
  row("p", std::to_string(p));
  row("gamma", format_number(gamma));
  row("||theta||^2", format_number(cfg.theta_sq()));
  row("seed", std::to_string(seed));
  row("rotation", to_string(options.rotation));
  if (cfg.degenerate()) row("note", "degenerate (p = n or n = d)");
  if (r.failed) {
    std::printf("trial failed: %s\n", r.error.c_str());
    return kRuntimeError;
  }
  std::printf("risks\n");
  row("R(beta_A)", format_number(r.r_a));
  row("R(beta_BA)", format_number(r.r_ba));
  row("R_B(beta_B)", format_number(r.r_b_on_b));
  row("R(0)", format_number(r.r_null));
  row("forgetting", format_number(r.forgetting));
  row("forgetting ratio", cell(r.ratio));
  row("projection energy", format_number(r.proj_energy));
  row("dual-path gap", format_number(r.dual_path_gap));
  std::printf("monte carlo (n_test = %lld)\n", static_cast<long long>(n_test));
  row("R(beta_A)", format_number(r.emp_a.mean) + " +- " + format_number(r.emp_a.se));
  row("R(beta_BA)", format_number(r.emp_ba.mean) + " +- " + format_number(r.emp_ba.se));
  row("R_B(beta_B)", format_number(r.emp_b_on_b.mean) + " +- " + format_number(r.emp_b_on_b.se));
  row("R(0)", format_number(r.emp_null.mean) + " +- " + format_number(r.emp_null.se));
  std::printf("bounds\n");
  row("single task", format_number(sheet.b_single) + "  [" + to_string(r.flags.single) + "]");
  row("terminal", format_number(sheet.b_terminal) + "  [" + to_string(r.flags.terminal) + "]");
  row("forgetting", format_number(sheet.b_forgetting) + "  [" + to_string(r.flags.forgetting) + "]");
  row("forgetting ratio", cell(sheet.b_ratio) + "  [" + to_string(r.flags.ratio) + "]");
  row("projection", format_number(sheet.b_proj) + "  [" + to_string(r.flags.projection) + "]");
  std::printf("premises\n");
  row("n >= d, p >= 20n, gamma >= 1/sqrt(nd)", sheet.premises.main ? "yes" : "no");
  row("p >= max(17n, 1/gamma)", sheet.premises.forgetting ? "yes" : "no");
  row("2n <= p, gamma >= 1/sqrt(nd)", sheet.premises.projection ? "yes" : "no");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Overparameterization and forgetting in a latent two-task linear model"};
  app.require_subcommand(1);
  app.footer("Exit status: 0 ok, 2 check failed, 3 config error, 4 runtime error, 5 i/o error, 6 premise violated.");

  CommonFlags run_flags, verify_flags;
  std::string out_dir;
  std::optional<std::size_t> trials;
  std::optional<std::string> determinism_sample;
  auto* run = app.add_subcommand("run", "Run the acceptance checks and the sweep, writing records.csv, "
                                        "aggregate.csv, summary.json and sweep.svg");
  run->add_option("--config", run_flags.config, "JSON run configuration (default: the acceptance grid)");
  run->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  run->add_option("--seed", run_flags.seed, "Root seed (overrides root_seed)");
  run->add_option("--threads", run_flags.threads, "Worker threads (default: config, LATENTCL_THREADS, hardware)");
  run->add_option("--trials", trials, "Trials per grid point (overrides trials_per_point)");
  run->add_option("--determinism-sample", determinism_sample,
                  "'full' re-runs the whole sweep; a number re-runs that many trials per point");

  bool corrupt = false;
  auto* verify = app.add_subcommand("verify", "Check the closed-form identities and oracle agreements");
  verify->add_option("--config", verify_flags.config, "JSON run configuration");
  verify->add_option("--seed", verify_flags.seed, "Root seed");
  verify->add_option("--threads", verify_flags.threads, "Worker threads");
  verify->add_flag("--corrupt-tolerance", corrupt, "Negate every tolerance (negative control; must fail)");

  Index d = 5, n = 100, p = 2000, n_test = 20000;
  double gamma = 1.0, theta_norm_sq = 1.0;
  std::uint64_t seed = 0;
  std::string rotation = "partial";
  auto* single = app.add_subcommand("single", "Print every quantity of one draw");
  single->add_option("--d", d, "Latent dimension")->capture_default_str();
  single->add_option("--n", n, "Samples per task")->capture_default_str();
  single->add_option("--p", p, "Observed dimension")->capture_default_str();
  single->add_option("--gamma", gamma, "Signal scale")->capture_default_str();
  single->add_option("--seed", seed, "Root seed")->capture_default_str();
  single->add_option("--theta-norm-sq", theta_norm_sq, "||theta||^2")->capture_default_str();
  single->add_option("--n-test", n_test, "Monte-Carlo test draws")->capture_default_str();
  single->add_option("--rotation", rotation, "partial, dense or identity")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*run) return cmd_run(run_flags, out_dir, trials, determinism_sample);
    if (*verify) return cmd_verify(verify_flags, corrupt);
    return cmd_single(d, n, p, gamma, seed, theta_norm_sq, n_test, rotation);
  } catch (const PremiseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kPremiseError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
