#include "latentcl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latentcl {

namespace {

void require_positive(double v, const char* name) {
  if (!(v >= 1.0)) throw std::invalid_argument(std::string("bound argument ") + name + " must be >= 1");
}

BoundFlag compare(double realized, double bound) {
  return realized <= bound ? BoundFlag::satisfied : BoundFlag::violated;
}

}  // namespace

double bound_single(double d, double n, double p, double theta_sq) {
  require_positive(d, "d");
  require_positive(n, "n");
  require_positive(p, "p");
  return (72.0 * std::sqrt(d / n) + 18.0 * n / p) * theta_sq;
}

double bound_terminal(double d, double n, double p, double theta_sq) {
  require_positive(d, "d");
  require_positive(n, "n");
  require_positive(p, "p");
  return (72.0 * std::sqrt(d / n) + 96.0 * std::sqrt(n / p)) * theta_sq;
}

double bound_forgetting(double n, double p, double gamma, double theta_sq) {
  require_positive(n, "n");
  require_positive(p, "p");
  if (!(gamma > 0.0)) throw std::invalid_argument("bound argument gamma must be > 0");
  return (66.0 * std::sqrt(n / p) + 12.0 / (p * gamma)) * theta_sq;
}

std::optional<double> bound_ratio(double d, double n, double p) {
  require_positive(d, "d");
  require_positive(n, "n");
  require_positive(p, "p");
  const double denom = 1.0 - 72.0 * std::sqrt(d / n) - 18.0 * n / p;
  if (!(denom > 0.0)) return std::nullopt;
  return 78.0 * std::sqrt(n / p) / denom;
}

double bound_projection(double d, double n) {
  require_positive(d, "d");
  require_positive(n, "n");
  return 18.0 * std::sqrt(d / n);
}

Premises evaluate_premises(double d, double n, double p, double gamma) {
  const double gamma_floor = 1.0 / std::sqrt(n * d);
  Premises out;
  out.main = n >= d && p >= 20.0 * n && gamma >= gamma_floor;
  out.forgetting = n >= d && p >= std::max(17.0 * n, 1.0 / gamma);
  out.projection = d <= n && 2.0 * n <= p && gamma >= gamma_floor;
  return out;
}

BoundSheet make_bound_sheet(double d, double n, double p, double gamma, double theta_sq) {
  BoundSheet sheet;
  sheet.premises = evaluate_premises(d, n, p, gamma);
  sheet.premise_ok = sheet.premises.main && sheet.premises.forgetting && sheet.premises.projection;
  sheet.b_single = bound_single(d, n, p, theta_sq);
  sheet.b_terminal = bound_terminal(d, n, p, theta_sq);
  sheet.b_ratio = bound_ratio(d, n, p);
  sheet.b_forgetting = bound_forgetting(n, p, gamma, theta_sq);
  sheet.b_proj = bound_projection(d, n);
  sheet.theta_sq = theta_sq;
  return sheet;
}

std::string to_string(BoundFlag flag) {
  switch (flag) {
    case BoundFlag::satisfied:
      return "ok";
    case BoundFlag::violated:
      return "violated";
    case BoundFlag::not_applicable:
      return "NA";
  }
  return "?";
}

BoundFlags check_trial(const BoundSheet& sheet, const RealizedQuantities& realized) {
  BoundFlags flags;
  if (!sheet.premise_ok) return flags;
  flags.single = compare(realized.r_a, sheet.b_single);
  flags.terminal = compare(realized.r_ba, sheet.b_terminal);
  flags.forgetting = compare(realized.forgetting, sheet.b_forgetting);
  if (sheet.b_ratio && realized.ratio) flags.ratio = compare(*realized.ratio, *sheet.b_ratio);
  flags.projection = compare(realized.proj_energy, sheet.b_proj);
  return flags;
}

}  // namespace latentcl
