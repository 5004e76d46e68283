#pragma once

#include <optional>
#include <string>

namespace latentcl {

/// (72 sqrt(d/n) + 18 n/p) ||theta||^2 : risk of the task-A interpolator.
double bound_single(double d, double n, double p, double theta_sq);

/// (72 sqrt(d/n) + 96 sqrt(n/p)) ||theta||^2 : task-A risk after training on B.
double bound_terminal(double d, double n, double p, double theta_sq);

/// (66 sqrt(n/p) + 12 / (p gamma)) ||theta||^2 : forgetting R(beta_BA) - R(beta_A).
double bound_forgetting(double n, double p, double gamma, double theta_sq);

/// 78 sqrt(n/p) / (1 - 72 sqrt(d/n) - 18 n/p); nullopt when the denominator is <= 0.
std::optional<double> bound_ratio(double d, double n, double p);

/// 18 sqrt(d/n) : energy of a unit direction of range(W) outside the row space of A.
double bound_projection(double d, double n);

/// Premise sets, kept per theorem because they differ.
struct Premises {
  bool main = false;         ///< n >= d, p >= 20 n, gamma >= 1/sqrt(n d)  (single, terminal, ratio)
  bool forgetting = false;   ///< n >= d, p >= max(17 n, 1/gamma)
  bool projection = false;   ///< d <= n, 2 n <= p, gamma >= 1/sqrt(n d)
};

Premises evaluate_premises(double d, double n, double p, double gamma);

/// All bound right-hand sides at one (d, n, p, gamma, ||theta||^2).
struct BoundSheet {
  bool premise_ok = false;  ///< intersection of all premise sets
  Premises premises;
  double b_single = 0.0;
  double b_terminal = 0.0;
  std::optional<double> b_ratio;
  double b_forgetting = 0.0;
  double b_proj = 0.0;
  double theta_sq = 0.0;
};

BoundSheet make_bound_sheet(double d, double n, double p, double gamma, double theta_sq);

/// Realized quantities of one trial.
struct RealizedQuantities {
  double r_a = 0.0;
  double r_ba = 0.0;
  double r_null = 0.0;
  double forgetting = 0.0;
  std::optional<double> ratio;
  double proj_energy = 0.0;
};

enum class BoundFlag { satisfied, violated, not_applicable };

std::string to_string(BoundFlag flag);

struct BoundFlags {
  BoundFlag single = BoundFlag::not_applicable;
  BoundFlag terminal = BoundFlag::not_applicable;
  BoundFlag forgetting = BoundFlag::not_applicable;
  BoundFlag ratio = BoundFlag::not_applicable;
  BoundFlag projection = BoundFlag::not_applicable;
};

/// Compares realized values with the sheet. Every flag is not_applicable unless
/// premise_ok; the ratio flag is also not_applicable when either the bound or
/// the realized ratio is undefined.
BoundFlags check_trial(const BoundSheet& sheet, const RealizedQuantities& realized);

}  // namespace latentcl
