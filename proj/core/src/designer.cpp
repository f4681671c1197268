#include "svanish/designer.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "svanish/error.hpp"

namespace svanish {

namespace {

constexpr int kMaxBacktracks = 20;
constexpr double kMinStep = 1e-14;
// Width of the band next to a bound, relative to the box, inside which outward moves are frozen.
constexpr double kActiveBand = 1e-4;
// Largest parameter move per iteration, relative to the box.
constexpr double kStepCap = 0.25;

struct Params {
  std::vector<double> mu;
  std::vector<double> eps;
};

std::vector<double> flatten(const Params& p) {
  std::vector<double> v = p.mu;
  v.insert(v.end(), p.eps.begin(), p.eps.end());
  return v;
}

Params unflatten(const std::vector<double>& v, int layers) {
  const auto L = static_cast<std::size_t>(layers);
  return {std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(L)),
          std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(L), v.end())};
}

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

class Evaluator {
 public:
  explicit Evaluator(const DesignProblem& p) : problem_(p), scales_(residual_scales(p)) {}

  Eigen::VectorXd operator()(const std::vector<double>& flat) const {
    const Params q = unflatten(flat, problem_.layers);
    const CoefficientTable t = lowfreq_coefficients(design_structure(problem_, q.mu, q.eps), problem_.order);
    Eigen::VectorXd r(static_cast<Eigen::Index>(t.entries().size()));
    for (std::size_t k = 0; k < t.entries().size(); ++k) r(static_cast<Eigen::Index>(k)) = t.entries()[k].value.real() / scales_[k];
    if (!all_finite(r)) throw SolverError("design residual is not finite");
    return r;
  }

  Eigen::MatrixXd jacobian(const std::vector<double>& flat, const Eigen::VectorXd& r0) const {
    const auto m = static_cast<Eigen::Index>(flat.size());
    Eigen::MatrixXd a(r0.size(), m);
    for (Eigen::Index c = 0; c < m; ++c) {
      const double p = flat[static_cast<std::size_t>(c)];
      const double h = 1e-6 * std::max(1.0, std::abs(p));
      auto at = [&](double v) {
        std::vector<double> q = flat;
        q[static_cast<std::size_t>(c)] = v;
        return (*this)(q);
      };
      if (p - h >= problem_.lower && p + h <= problem_.upper) {
        a.col(c) = (at(p + h) - at(p - h)) / (2.0 * h);
      } else if (p - h < problem_.lower) {
        a.col(c) = (-3.0 * r0 + 4.0 * at(p + h) - at(p + 2.0 * h)) / (2.0 * h);
      } else {
        a.col(c) = (3.0 * r0 - 4.0 * at(p - h) + at(p - 2.0 * h)) / (2.0 * h);
      }
    }
    if (!all_finite(a)) throw SolverError("design Jacobian is not finite");
    return a;
  }

 private:
  const DesignProblem& problem_;
  std::vector<double> scales_;
};

// Pseudoinverse step with bound handling. A parameter within `eps_active` of a bound is frozen
// (Jacobian column zeroed) when the descent direction -A^T b points outward, and again whenever the
// recomputed step would push it outward, until the set of frozen parameters is stable.
Eigen::VectorXd projected_step(const DesignProblem& problem, const Eigen::MatrixXd& a_full, const Eigen::VectorXd& b,
                               const std::vector<double>& p, double eps_active) {
  const auto m = static_cast<Eigen::Index>(p.size());
  const Eigen::VectorXd grad = a_full.transpose() * b;
  auto at_lower = [&](std::size_t i) { return p[i] - problem.lower <= eps_active; };
  auto at_upper = [&](std::size_t i) { return problem.upper - p[i] <= eps_active; };

  Eigen::MatrixXd a = a_full;
  std::vector<bool> frozen(p.size(), false);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto i = static_cast<std::size_t>(k);
    if ((at_lower(i) && grad(k) > 0.0) || (at_upper(i) && grad(k) < 0.0)) {
      frozen[i] = true;
      a.col(k).setZero();
    }
  }
  Eigen::VectorXd delta = pseudoinverse_step(a, b);
  for (;;) {
    bool changed = false;
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto i = static_cast<std::size_t>(k);
      if (frozen[i]) continue;
      const double move = -delta(k);
      if ((at_lower(i) && move < 0.0) || (at_upper(i) && move > 0.0)) {
        frozen[i] = true;
        a.col(k).setZero();
        changed = true;
      }
    }
    if (!changed) break;
    delta = pseudoinverse_step(a, b);
  }
  return delta;
}

struct RunOutcome {
  std::vector<double> params;
  std::vector<double> history;
  bool converged = false;
  int iterations = 0;
  std::string stop_reason;
};

RunOutcome run_from(const DesignProblem& problem, const Evaluator& eval, std::vector<double> p) {
  for (auto& v : p) v = std::clamp(v, problem.lower, problem.upper);
  RunOutcome out;
  Eigen::VectorXd b = eval(p);
  out.history.push_back(b.norm());

  for (;;) {
    if (b.norm() <= problem.residual_tol) {
      out.converged = true;
      out.stop_reason = "residual below tolerance";
      break;
    }
    if (out.iterations >= problem.max_iters) {
      out.stop_reason = "iteration limit";
      break;
    }

    const Eigen::MatrixXd a_full = eval.jacobian(p, b);
    const double band = kActiveBand * (problem.upper - problem.lower);

    std::vector<double> next;
    Eigen::VectorXd b_next;
    auto line_search = [&](const Eigen::VectorXd& delta) {
      if (!delta.allFinite()) throw SolverError("design step is not finite");
      double lambda = problem.step_damping;
      const double largest = delta.cwiseAbs().maxCoeff();
      const double cap = kStepCap * (problem.upper - problem.lower);
      if (largest > cap) lambda *= cap / largest;
      for (int k = 0; k <= kMaxBacktracks; ++k, lambda *= 0.5) {
        std::vector<double> cand = p;
        for (std::size_t i = 0; i < p.size(); ++i) {
          cand[i] = std::clamp(p[i] - lambda * delta(static_cast<Eigen::Index>(i)), problem.lower, problem.upper);
        }
        Eigen::VectorXd r = eval(cand);
        if (r.norm() < b.norm()) {
          next = std::move(cand);
          b_next = std::move(r);
          return true;
        }
      }
      return false;
    };
    // The projected step is tried first; the plain clamped step is the fallback.
    if (!line_search(projected_step(problem, a_full, b, p, band)) && !line_search(pseudoinverse_step(a_full, b))) {
      out.stop_reason = "stalled";
      break;
    }
    double step = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) step = std::max(step, std::abs(next[i] - p[i]));
    p = std::move(next);
    b = std::move(b_next);
    ++out.iterations;
    out.history.push_back(b.norm());
    if (step < kMinStep) {
      out.converged = b.norm() <= problem.residual_tol;
      out.stop_reason = "step below minimum";
      break;
    }
  }
  out.params = std::move(p);
  return out;
}

}  // namespace

void DesignProblem::validate() const {
  if (layers < 1) throw DomainError("design needs at least one layer");
  if (order < 1) throw DomainError("design order must be >= 1");
  if (radii.size() != static_cast<std::size_t>(layers) + 1) throw DomainError("radii must have layers + 1 entries");
  if (mu.size() != static_cast<std::size_t>(layers) || eps.size() != static_cast<std::size_t>(layers)) {
    throw DomainError("initial mu/eps must have one entry per layer");
  }
  if (!(lower > 0.0) || !(lower < upper)) throw DomainError("bounds must satisfy 0 < lower < upper");
  for (std::size_t k = 0; k < mu.size(); ++k) {
    if (mu[k] < lower || mu[k] > upper || eps[k] < lower || eps[k] > upper) {
      throw DomainError("initial parameters must lie within the bounds");
    }
  }
  if (max_iters < 0) throw DomainError("max_iters must be non-negative");
  if (!(residual_tol > 0.0)) throw DomainError("residual_tol must be positive");
  if (!(step_damping > 0.0) || step_damping > 1.0) throw DomainError("step_damping must lie in (0, 1]");
  if (restarts < 0) throw DomainError("restarts must be non-negative");
}

DesignProblem make_default_problem(int layers, int order) {
  DesignProblem p;
  p.layers = layers;
  p.order = order;
  p.radii = default_radii(layers);
  p.mu.resize(static_cast<std::size_t>(layers));
  for (int j = 0; j < layers; ++j) p.mu[static_cast<std::size_t>(j)] = j % 2 == 0 ? 3.0 : 6.0;
  p.eps = p.mu;
  return p;
}

LayeredStructure design_structure(const DesignProblem& problem, const std::vector<double>& mu, const std::vector<double>& eps) {
  return LayeredStructure(problem.radii, mu, eps, problem.background).with_ordering(problem.ordering);
}

std::vector<double> residual_scales(const DesignProblem& problem) {
  const CoefficientTable bare =
      lowfreq_coefficients(LayeredStructure::vacuum(problem.radii, problem.background), problem.order);
  std::vector<double> s;
  s.reserve(bare.entries().size());
  for (const auto& e : bare.entries()) {
    const double m = std::abs(e.value);
    s.push_back(m > 0.0 ? m : 1.0);
  }
  return s;
}

Eigen::VectorXd residual(const DesignProblem& problem, const std::vector<double>& mu, const std::vector<double>& eps) {
  Params p{mu, eps};
  return Evaluator(problem)(flatten(p));
}

Eigen::MatrixXd jacobian(const DesignProblem& problem, const std::vector<double>& mu, const std::vector<double>& eps) {
  const Evaluator eval(problem);
  const std::vector<double> flat = flatten(Params{mu, eps});
  return eval.jacobian(flat, eval(flat));
}

Eigen::VectorXd pseudoinverse_step(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double rcond) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cut = s.size() > 0 ? rcond * s(0) : 0.0;
  Eigen::VectorXd coeff = svd.matrixU().transpose() * b;
  for (Eigen::Index k = 0; k < s.size(); ++k) coeff(k) = s(k) > cut && s(k) > 0.0 ? coeff(k) / s(k) : 0.0;
  return svd.matrixV() * coeff;
}

DesignResult design(const DesignProblem& problem) {
  problem.validate();
  const Evaluator eval(problem);

  RunOutcome best = run_from(problem, eval, flatten(Params{problem.mu, problem.eps}));
  int starts = 1;
  if (!best.converged && problem.restarts > 0) {
    std::mt19937_64 rng(problem.seed);
    std::uniform_real_distribution<double> dist(problem.lower, problem.upper);
    for (int k = 0; k < problem.restarts && !best.converged; ++k) {
      std::vector<double> start(static_cast<std::size_t>(2 * problem.layers));
      for (auto& v : start) v = dist(rng);
      RunOutcome trial = run_from(problem, eval, std::move(start));
      ++starts;
      if (trial.converged || trial.history.back() < best.history.back()) best = std::move(trial);
    }
  }

  const Params final_params = unflatten(best.params, problem.layers);
  CoefficientTable table =
      lowfreq_coefficients(design_structure(problem, final_params.mu, final_params.eps), problem.order);
  const std::vector<double> scales = residual_scales(problem);
  double imag_ratio = 0.0;
  for (std::size_t k = 0; k < table.entries().size(); ++k) {
    imag_ratio = std::max(imag_ratio, std::abs(table.entries()[k].value.imag()) / scales[k]);
  }

  return DesignResult{final_params.mu,
                      final_params.eps,
                      std::move(best.history),
                      std::move(table),
                      best.converged,
                      best.iterations,
                      std::move(best.stop_reason),
                      imag_ratio,
                      starts,
                      problem.seed};
}

}  // namespace svanish
