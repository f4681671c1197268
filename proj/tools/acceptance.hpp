#pragma once

#include <functional>
#include <string>
#include <vector>

#include "svanish/designer.hpp"

namespace svanish::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Reference parameters of the six-layer order-2 design (four decimals).
DesignProblem reference_problem();
std::vector<double> reference_mu();
std::vector<double> reference_eps();

/// Least-squares slope of log|f(t)| against log t on `count` log-spaced points in [t_lo, t_hi].
double loglog_slope(const std::function<double(double)>& f, double t_lo, double t_hi, int count = 9);

/// Largest scaled |W_{n,l}| / |W_{n,l}^{bare}| of a structure built from the problem geometry.
double max_scaled_coefficient(const DesignProblem& problem, const std::vector<double>& mu, const std::vector<double>& eps);

/// Runs criteria 1..10 (or the listed subset) in order.
std::vector<CriterionResult> run_all(const std::vector<int>& only = {});

/// "[PASS] 3 title (detail) 0.12s"
std::string format_line(const CriterionResult& r);

}  // namespace svanish::acceptance
