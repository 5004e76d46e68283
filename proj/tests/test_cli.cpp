#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string output;
};

Outcome run_cli(const std::string& args) {
  const std::string cmd = std::string(LATENTCL_CLI_PATH) + " " + args + " 2>&1";
  Outcome out;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return out;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.output.append(buf, got);
  const int status = ::pclose(pipe);
  out.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("latentcl_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

const char* kTinyConfig = R"({
  "grid": {"d": 2, "n": 40, "gamma": 1.0, "p": [800, 1600, 3200, 6400]},
  "trials_per_point": 4, "n_test": 1000, "root_seed": 11,
  "checks": {"lemma_identities": false, "gd_closed_form_agreement": false,
             "model_equivalence": false, "singular_value_concentration": false,
             "mc_analytic_consistency": false, "overparameterization_trends": false},
  "determinism_sample": 2
})";

}  // namespace

TEST(Cli, SingleIsDeterministic) {
  const Outcome a = run_cli("single --d 2 --n 10 --p 200 --seed 3 --n-test 2000");
  const Outcome b = run_cli("single --d 2 --n 10 --p 200 --seed 3 --n-test 2000");
  ASSERT_EQ(a.code, 0) << a.output;
  EXPECT_EQ(a.output, b.output);
  EXPECT_NE(a.output.find("R(0)"), std::string::npos) << a.output;
}

TEST(Cli, PremiseViolationHasItsOwnExitCode) {
  const Outcome r = run_cli("single --d 5 --n 100 --p 50");
  EXPECT_EQ(r.code, 6) << r.output;
  EXPECT_NE(r.output.find("premise violated"), std::string::npos) << r.output;
  const fs::path dir = scratch("premise");
  write(dir / "under.json", R"({"points": [{"d": 5, "n": 100, "p": 50, "gamma": 1}]})");
  EXPECT_EQ(run_cli("run --config " + (dir / "under.json").string()).code, 6);
  fs::remove_all(dir);
}

TEST(Cli, BadArgumentsAreConfigErrors) {
  EXPECT_EQ(run_cli("single --d notanumber").code, 3);
  EXPECT_EQ(run_cli("nosuchcommand").code, 3);
  const fs::path dir = scratch("bad_config");
  write(dir / "empty.json", R"({"grid": {"d": 5, "n": 100, "gamma": 1, "p": []}})");
  write(dir / "unknown.json", R"({"grdi": 1})");
  const Outcome empty = run_cli("run --config " + (dir / "empty.json").string() + " --out " + (dir / "o").string());
  EXPECT_EQ(empty.code, 3) << empty.output;
  EXPECT_EQ(run_cli("run --config " + (dir / "unknown.json").string()).code, 3);
  EXPECT_FALSE(fs::exists(dir / "o" / "records.csv"));
  EXPECT_EQ(run_cli("run --config " + (dir / "missing.json").string()).code, 5);
  fs::remove_all(dir);
}

TEST(Cli, TinyRunWritesOutputsAndIsReproducible) {
  const fs::path dir = scratch("tiny_run");
  write(dir / "tiny.json", kTinyConfig);
  const std::string base = "run --config " + (dir / "tiny.json").string() + " --threads 1 --out ";
  const Outcome first = run_cli(base + (dir / "a").string());
  ASSERT_EQ(first.code, 0) << first.output;
  for (const char* f : {"records.csv", "aggregate.csv", "sweep.svg", "summary.json"}) {
    EXPECT_TRUE(fs::exists(dir / "a" / f)) << f;
  }
  EXPECT_NE(first.output.find("PASS"), std::string::npos);
  const nlohmann::json summary = nlohmann::json::parse(slurp(dir / "a" / "summary.json"));
  EXPECT_TRUE(summary["all_passed"].get<bool>());
  EXPECT_EQ(summary["checks"].size(), 9u);
  EXPECT_EQ(summary["sweep"]["records"], 16);

  const Outcome second = run_cli(base + (dir / "b").string());
  ASSERT_EQ(second.code, 0) << second.output;
  EXPECT_EQ(slurp(dir / "a" / "records.csv"), slurp(dir / "b" / "records.csv"));
  EXPECT_EQ(slurp(dir / "a" / "aggregate.csv"), slurp(dir / "b" / "aggregate.csv"));
  fs::remove_all(dir);
}

TEST(Cli, UnwritableOutputIsIoError) {
  const fs::path dir = scratch("unwritable");
  write(dir / "tiny.json", kTinyConfig);
  write(dir / "file", "x");
  const Outcome r = run_cli("run --config " + (dir / "tiny.json").string() + " --out " + (dir / "file" / "sub").string());
  EXPECT_EQ(r.code, 5) << r.output;
  fs::remove_all(dir);
}

TEST(Cli, CorruptedVerifyFails) {
  const fs::path dir = scratch("verify");
  write(dir / "small.json", R"({"grid": {"d": 2, "n": 20, "gamma": 1.0, "p": [400, 800]}, "n_test": 1000,
                                 "verify_trials": 3})");
  const Outcome r = run_cli("verify --corrupt-tolerance --threads 1 --config " + (dir / "small.json").string());
  EXPECT_EQ(r.code, 2) << r.output;
  EXPECT_NE(r.output.find("FAIL"), std::string::npos);
  fs::remove_all(dir);
}
