#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "svanish/lowfreq.hpp"
#include "svanish/multilayer.hpp"

namespace svanish {

/// Search for layer parameters whose low-frequency coefficients W_{n,l} vanish up to order N.
struct DesignProblem {
  int layers = 1;
  int order = 1;
  std::vector<double> radii;
  std::vector<double> mu;  ///< initial guess
  std::vector<double> eps;  ///< initial guess
  Background background{};
  double lower = 0.1;
  double upper = 10.0;
  int max_iters = 200;
  double residual_tol = 1e-10;
  double step_damping = 1.0;
  int restarts = 0;  ///< extra random starts tried when the first run does not converge
  std::uint64_t seed = 0;
  TransferOrdering ordering = TransferOrdering::outward;

  /// Residual length N(N+1).
  int residual_size() const { return order * (order + 1); }
  /// True when there are more targets than parameters (least-squares semantics).
  bool overdetermined() const { return residual_size() > 2 * layers; }
  /// Throws DomainError when the invariants are violated.
  void validate() const;
};

/// Six-layer style problem: equally spaced radii 2 -> 1 and an alternating (3, 6, ...) start.
DesignProblem make_default_problem(int layers, int order);

struct DesignResult {
  std::vector<double> mu;
  std::vector<double> eps;
  std::vector<double> residual_norm_history;
  CoefficientTable table;
  bool converged = false;
  int iterations = 0;
  std::string stop_reason;
  /// Largest |Im W_{n,l}| relative to the matching bare-PEC magnitude at the final point.
  double max_imaginary_ratio = 0.0;
  int starts_used = 1;
  std::uint64_t seed = 0;

  double final_residual() const { return residual_norm_history.empty() ? 0.0 : residual_norm_history.back(); }
};

/// Bare-PEC magnitudes |W_{n,l}| used to scale each residual component (same radii, background layers).
std::vector<double> residual_scales(const DesignProblem& problem);

/// Re W_{n,l} / |W_{n,l}^{bare}| ordered TE then TM, n ascending, l ascending.
Eigen::VectorXd residual(const DesignProblem& problem, const std::vector<double>& mu, const std::vector<double>& eps);

/// d residual / d (mu_1..mu_L, eps_1..eps_L) by central differences, h = 1e-6 max(1, |p|);
/// one-sided three-point stencils where a central step would leave the bounds.
Eigen::MatrixXd jacobian(const DesignProblem& problem, const std::vector<double>& mu, const std::vector<double>& eps);

/// Minimum-norm least-squares solution of A delta = b through the SVD with relative cutoff rcond.
Eigen::VectorXd pseudoinverse_step(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double rcond = 1e-12);

/// Projected, damped Gauss-Newton iteration p <- clamp(p - lambda A^+ b).
/// Parameters in a thin band at a bound whose gradient or step points outward are frozen
/// (Jacobian column zeroed); each raw step is scaled so no component moves more than a
/// quarter of the box, then halved up to 20 times until the residual decreases.
DesignResult design(const DesignProblem& problem);

/// Structure built from the problem radii/background and the given parameters.
LayeredStructure design_structure(const DesignProblem& problem, const std::vector<double>& mu, const std::vector<double>& eps);

}  // namespace svanish
