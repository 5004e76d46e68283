// Acceptance run: the default grid at full size, every criterion at its
// stated tolerance, and a full determinism re-run on a different worker count.

#include <cstdio>
#include <exception>

#include "latentcl/checks.hpp"
#include "latentcl/config.hpp"

using namespace latentcl;

int main() {
  try {
    const RunConfig cfg = default_run_config();
    SuiteOptions opt;
    opt.spec = cfg.sweep_spec();
    opt.threads = 1;
    opt.rerun_threads = 3;
    opt.determinism_sample = std::nullopt;
    opt.progress = [](std::size_t done, std::size_t total) {
      if (done % 100 == 0 || done == total) std::fprintf(stderr, "sweep %zu/%zu\n", done, total);
    };
    std::printf("grid: d=5 n=100 gamma=1 |theta|^2=1 p in {2000,4000,8000,16000}, %zu trials/point, "
                "n_test=%ld, seed=%llu\n",
                opt.spec.trials_per_point, static_cast<long>(opt.spec.n_test),
                static_cast<unsigned long long>(opt.spec.root_seed));
    const SuiteResult res = run_suite(opt);
    int failed = 0, k = 0;
    for (const CheckResult& c : res.checks) {
      ++k;
      // Every criterion is enabled, so a skipped one counts as a failure here.
      const bool ok = c.status == CheckStatus::pass;
      failed += ok ? 0 : 1;
      std::printf("%s [%d] %s: %s (%.1f s)\n", ok ? "PASS" : "FAIL", k, c.id.c_str(), c.detail.c_str(), c.seconds);
    }
    std::printf("standalone checks %.1f s, sweep %.1f s\n", res.checks_seconds, res.sweep_seconds);
    std::printf("%d/%d criteria passed\n", k - failed, k);
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance: %s\n", e.what());
    return 4;
  }
}
