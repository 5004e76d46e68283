#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "latentcl/config.hpp"
#include "latentcl/errors.hpp"
#include "latentcl/report.hpp"

using namespace latentcl;

namespace {

SweepResult tiny_sweep() {
  SweepSpec spec;
  for (Index p : {60, 120, 240, 480}) {
    ModelConfig cfg;
    cfg.d = 2;
    cfg.n = 6;
    cfg.p = p;
    cfg.theta = ModelConfig::make_theta(2, 1.0, ThetaMode::basis, 0);
    spec.grid.push_back(cfg);
  }
  spec.trials_per_point = 3;
  spec.n_test = 1000;
  spec.root_seed = 17;
  return run_sweep(spec, 1);
}

void expect_config_error(const std::string& text, const std::string& fragment) {
  try {
    parse_run_config(text);
    ADD_FAILURE() << "accepted: " << text;
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(FormatNumber, RoundTripsAndMarksMissing) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(format_number(std::nan("")), "NA");
  EXPECT_EQ(format_number(HUGE_VAL), "NA");
  EXPECT_EQ(format_number(2.0), "2");
}

TEST(RecordsCsv, HeaderAndRoundTrip) {
  const SweepResult res = tiny_sweep();
  const std::string csv = records_csv(res.records);
  std::string header = csv.substr(0, csv.find('\n'));
  std::string expected;
  for (const std::string& c : record_columns()) expected += (expected.empty() ? "" : ",") + c;
  EXPECT_EQ(header, expected);
  std::istringstream in(csv);
  const std::vector<TrialRecord> parsed = parse_records_csv(in);
  ASSERT_EQ(parsed.size(), res.records.size());
  EXPECT_EQ(records_csv(parsed), csv);
}

TEST(RecordsCsv, FailedRowsRenderMissingMetrics) {
  TrialRecord rec;
  rec.d = 1;
  rec.n = 2;
  rec.p = 3;
  rec.failed = true;
  rec.error = "singular, system";
  const std::string row = record_row(rec);
  EXPECT_NE(row.find("failed"), std::string::npos);
  EXPECT_NE(row.find("NA"), std::string::npos);
  std::istringstream in(records_csv({rec}));
  const std::vector<TrialRecord> back = parse_records_csv(in);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_TRUE(back[0].failed);
  // Commas would split the cell; they are written as spaces.
  EXPECT_EQ(back[0].error, "singular  system");
}

TEST(RecordsCsv, MalformedInputRaises) {
  std::istringstream bad_header("a,b,c\n1,2,3\n");
  EXPECT_THROW(parse_records_csv(bad_header), IoError);
  const SweepResult res = tiny_sweep();
  std::string csv = records_csv(res.records);
  csv += "latent,0,1\n";
  std::istringstream short_row(csv);
  EXPECT_THROW(parse_records_csv(short_row), IoError);
}

TEST(AggregateCsv, OneRowPerPoint) {
  const SweepResult res = tiny_sweep();
  const std::string csv = aggregate_csv(res.report);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  EXPECT_EQ(lines, 1 + res.report.points.size());
  std::string expected;
  for (const std::string& c : aggregate_columns()) expected += (expected.empty() ? "" : ",") + c;
  EXPECT_EQ(csv.substr(0, csv.find('\n')), expected);
  for (const char* col : {"r_a_median", "r_ba_q10", "freq_single", "mc_within", "max_dual_path_gap"}) {
    EXPECT_NE(expected.find(col), std::string::npos) << col;
  }
}

TEST(SweepSvg, HasOneLinePerSeries) {
  const std::string svg = sweep_svg(tiny_sweep().report);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
}

TEST(SummaryJson, ListsEveryCheck) {
  std::vector<CheckResult> checks;
  for (const std::string& id : all_check_ids()) checks.push_back({id, CheckStatus::pass, "ok", {{"x", 1.0}}, 0.1});
  checks[3].status = CheckStatus::fail;
  const SweepResult res = tiny_sweep();
  const nlohmann::json doc = summary_json(checks, res, to_json(default_run_config()), RunTiming{});
  EXPECT_FALSE(doc["all_passed"].get<bool>());
  ASSERT_EQ(doc["checks"].size(), 9u);
  for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(doc["checks"][i]["id"], all_check_ids()[i]);
  EXPECT_EQ(doc["checks"][3]["status"], "fail");
  EXPECT_EQ(doc["sweep"]["records"], res.records.size());
  EXPECT_EQ(doc["sweep"]["points"].size(), 4u);
  EXPECT_TRUE(doc.contains("timing"));
  EXPECT_EQ(doc["config"]["root_seed"], 20240501u);
}

TEST(TextFiles, RoundTripAndErrors) {
  const auto dir = std::filesystem::temp_directory_path() / "latentcl_text_files";
  std::filesystem::create_directories(dir);
  write_text_file(dir / "a.txt", "hello\n");
  EXPECT_EQ(read_text_file(dir / "a.txt"), "hello\n");
  EXPECT_THROW(read_text_file(dir / "missing.txt"), IoError);
  EXPECT_THROW(write_text_file(dir / "a.txt" / "b.txt", "x"), IoError);
  std::filesystem::remove_all(dir);
}

TEST(Config, DefaultGrid) {
  const RunConfig cfg = default_run_config();
  ASSERT_EQ(cfg.points.size(), 4u);
  EXPECT_EQ(cfg.points[0].p, 2000);
  EXPECT_EQ(cfg.points[3].p, 16000);
  EXPECT_EQ(cfg.points[0].d, 5);
  EXPECT_EQ(cfg.points[0].n, 100);
  EXPECT_EQ(cfg.trials_per_point, 200u);
  EXPECT_EQ(cfg.n_test, 20000);
  EXPECT_FALSE(cfg.determinism_sample.has_value());
  const SweepSpec spec = cfg.sweep_spec();
  EXPECT_EQ(spec.grid[2].theta_sq(), 1.0);
  const RunConfig empty_doc = parse_run_config("{}");
  EXPECT_EQ(empty_doc.points.size(), 4u);
}

TEST(Config, GridExpandsWithPInnermost) {
  const RunConfig cfg = parse_run_config(R"({"grid": {"d": [1, 2], "n": 10, "gamma": 1.0, "p": [200, 400]}})");
  ASSERT_EQ(cfg.points.size(), 4u);
  EXPECT_EQ(cfg.points[0].d, 1);
  EXPECT_EQ(cfg.points[1].p, 400);
  EXPECT_EQ(cfg.points[2].d, 2);
  EXPECT_EQ(cfg.points[2].p, 200);
}

TEST(Config, PMultipliers) {
  const RunConfig cfg = parse_run_config(R"({"grid": {"d": 2, "n": [10, 20], "gamma": 1, "p_multipliers": [20, 40]}})");
  ASSERT_EQ(cfg.points.size(), 4u);
  EXPECT_EQ(cfg.points[1].p, 400);
  EXPECT_EQ(cfg.points[3].p, 800);
  expect_config_error(R"({"grid": {"d": 2, "n": 10, "gamma": 1, "p_multipliers": [20.05]}})", "p_multipliers");
}

TEST(Config, ExplicitPointsAndScalars) {
  const RunConfig cfg = parse_run_config(R"({
    "points": [{"d": 2, "n": 10, "p": 300, "gamma": 0.5}],
    "theta_norm_sq": 2.5, "theta_mode": "random", "w_mode": "random_rotation",
    "rotation": "dense", "risk_sampler": "full", "model_variant": "both",
    "trials_per_point": 7, "n_test": 5000, "root_seed": 3, "threads": 2,
    "output_dir": "elsewhere", "verbosity": 2, "checks": {"determinism": false},
    "determinism_sample": 3, "verify_trials": 4})");
  EXPECT_EQ(cfg.points[0].gamma, 0.5);
  EXPECT_EQ(cfg.theta_mode, ThetaMode::random);
  EXPECT_EQ(cfg.w_mode, WMode::random_rotation);
  EXPECT_EQ(cfg.rotation, RotationMode::dense);
  EXPECT_EQ(cfg.sampler, RiskSampler::full);
  EXPECT_EQ(cfg.model_variant, VariantSelection::both);
  EXPECT_EQ(cfg.trials_per_point, 7u);
  EXPECT_EQ(cfg.threads, 2u);
  EXPECT_EQ(cfg.output_dir, "elsewhere");
  EXPECT_FALSE(cfg.checks(check_id::kDeterminism));
  EXPECT_TRUE(cfg.checks(check_id::kBounds));
  EXPECT_EQ(cfg.determinism_sample.value(), 3u);
  EXPECT_EQ(cfg.verify_trials, 4u);
  EXPECT_NEAR(cfg.sweep_spec().grid[0].theta_sq(), 2.5, 1e-12);

  const RunConfig back = parse_run_config(to_json(cfg).dump());
  EXPECT_EQ(to_json(back), to_json(cfg));
}

TEST(Config, StrictErrors) {
  expect_config_error(R"({"grdi": {}})", "unknown key 'grdi'");
  expect_config_error(R"({"points": []})", "empty");
  expect_config_error(R"({"grid": {"d": 5, "n": 100, "gamma": 1, "p": []}})", "must not be empty");
  expect_config_error(R"({"grid": {"d": 5, "n": 100, "gamma": 1}})", "exactly one of p");
  expect_config_error(R"({"grid": {"d": 5, "n": 100, "p": 2000}})", "grid.gamma is required");
  expect_config_error(R"({"grid": {"d": 5, "n": 100, "gamma": 1, "p": 2000, "q": 1}})", "unknown key 'q'");
  expect_config_error(R"({"trials_per_point": "many"})", "trials_per_point must be an integer");
  expect_config_error(R"({"trials_per_point": 0})", "trials_per_point must be >= 1");
  expect_config_error(R"({"n_test": 10})", "n_test");
  expect_config_error(R"({"rotation": "sideways"})", "unknown value 'sideways'");
  expect_config_error(R"({"checks": {"everything": true}})", "unknown key 'everything'");
  expect_config_error(R"({"checks": {"determinism": 1}})", "true or false");
  expect_config_error(R"({"theta_norm_sq": -1})", "theta_norm_sq");
  expect_config_error(R"({"points": [{"d": 5, "n": 4, "p": 100, "gamma": 1}]})", "");
  expect_config_error("[1, 2]", "JSON object");
  expect_config_error("{", "not valid JSON");
  expect_config_error(R"({"grid": {}, "points": []})", "not both");
}

TEST(Config, LoadMissingFileIsIoError) {
  EXPECT_THROW(load_run_config("/nonexistent/latentcl.json"), IoError);
}

TEST(Config, ThreadsFromEnvironment) {
  ::unsetenv("LATENTCL_THREADS");
  EXPECT_FALSE(threads_from_environment().has_value());
  ::setenv("LATENTCL_THREADS", "3", 1);
  EXPECT_EQ(threads_from_environment().value(), 3u);
  ::setenv("LATENTCL_THREADS", "zero", 1);
  EXPECT_THROW(threads_from_environment(), ConfigError);
  ::setenv("LATENTCL_THREADS", "0", 1);
  EXPECT_THROW(threads_from_environment(), ConfigError);
  ::unsetenv("LATENTCL_THREADS");
}
