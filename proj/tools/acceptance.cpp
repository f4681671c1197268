#include "acceptance.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "svanish/cloakmap.hpp"
#include "svanish/farfield.hpp"
#include "svanish/lowfreq.hpp"
#include "svanish/specfun.hpp"

namespace svanish::acceptance {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr Polarization kPols[] = {Polarization::TE, Polarization::TM};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel_err(cplx a, cplx b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

LayeredStructure random_structure(std::mt19937_64& rng, int layers, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> mu(static_cast<std::size_t>(layers));
  std::vector<double> eps(static_cast<std::size_t>(layers));
  for (int j = 0; j < layers; ++j) {
    mu[static_cast<std::size_t>(j)] = dist(rng);
    eps[static_cast<std::size_t>(j)] = dist(rng);
  }
  return LayeredStructure(default_radii(layers), mu, eps);
}

std::vector<LayeredStructure> random_structures(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  const int layer_choices[] = {1, 3, 6};
  std::vector<LayeredStructure> out;
  for (int k = 0; k < count; ++k) out.push_back(random_structure(rng, layer_choices[k % 3], 0.5, 5.0));
  return out;
}

LayeredStructure reference_structure(TransferOrdering ordering = TransferOrdering::outward) {
  return LayeredStructure(default_radii(6), reference_mu(), reference_eps()).with_ordering(ordering);
}

// Designs shared by criteria 1 and 3.
struct DesignRuns {
  DesignResult outward;
  double outward_seconds;
  DesignResult reversed;
};

const DesignRuns& design_runs() {
  static const DesignRuns runs = [] {
    DesignProblem p = make_default_problem(6, 2);
    const auto t0 = std::chrono::steady_clock::now();
    DesignResult out = design(p);
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    p.ordering = TransferOrdering::reversed;
    p.restarts = 30;
    p.seed = 1;
    return DesignRuns{std::move(out), sec, design(p)};
  }();
  return runs;
}

double suppression_slope(const LayeredStructure& s) {
  return loglog_slope(
      [&](double t) {
        double worst = 0.0;
        for (int n = 1; n <= 2; ++n) {
          for (Polarization pol : kPols) worst = std::max(worst, std::abs(scaled_coefficient(s, n, pol, t)));
        }
        return worst;
      },
      1e-2, 1e-1);
}

CriterionResult criterion_design() {
  CriterionResult r{1, "six-layer order-2 design converges; reference design scaled |W| <= 1e-2", false, "", 0.0};
  const DesignRuns& runs = design_runs();
  const DesignResult& d = runs.outward;
  const bool design_ok = d.converged && d.final_residual() <= 1e-8 && d.iterations <= 200 && runs.outward_seconds <= 60.0;

  DesignProblem p = make_default_problem(6, 2);
  const double ref = max_scaled_coefficient(p, reference_mu(), reference_eps());
  p.ordering = TransferOrdering::reversed;
  const double ref_reversed = max_scaled_coefficient(p, reference_mu(), reference_eps());

  r.passed = design_ok && ref <= 1e-2;
  std::ostringstream os;
  os << "design: converged=" << (d.converged ? "yes" : "no") << " |b|=" << sci(d.final_residual())
     << " iters=" << d.iterations << " (" << d.stop_reason << ") " << sci(runs.outward_seconds) << "s"
     << "; reference max scaled |W|=" << sci(ref)
     << "; reversed-ordering diagnostic: reference " << sci(ref_reversed) << ", design |b|="
     << sci(runs.reversed.final_residual()) << " after " << runs.reversed.starts_used << " starts";
  r.detail = os.str();
  return r;
}

CriterionResult criterion_leading_power() {
  CriterionResult r{2, "leading power 2n+1 of |W_n(t)| on random structures", true, "", 0.0};
  double worst = 0.0;
  for (const LayeredStructure& s : random_structures(2024, 10)) {
    for (int n = 1; n <= 3; ++n) {
      for (Polarization pol : kPols) {
        const double slope =
            loglog_slope([&](double t) { return std::abs(scaled_coefficient(s, n, pol, t)); }, 1e-3, 1e-2);
        worst = std::max(worst, std::abs(slope - (2 * n + 1)));
      }
    }
  }
  r.passed = worst <= 0.05;
  r.detail = "max |slope - (2n+1)| = " + sci(worst);
  return r;
}

CriterionResult criterion_suppression() {
  CriterionResult r{3, "designed structure: max |W_n(t)| slope >= 2N+2 on [1e-2, 1e-1]", false, "", 0.0};
  const DesignRuns& runs = design_runs();
  const DesignProblem p = make_default_problem(6, 2);
  const double slope = suppression_slope(design_structure(p, runs.outward.mu, runs.outward.eps));
  DesignProblem q = p;
  q.ordering = TransferOrdering::reversed;
  const double slope_rev = suppression_slope(design_structure(q, runs.reversed.mu, runs.reversed.eps));
  r.passed = runs.outward.converged && slope >= 6.0;
  r.detail = "slope " + sci(slope) + (runs.outward.converged ? "" : " (design did not converge)") +
             "; reversed-ordering diagnostic slope " + sci(slope_rev);
  return r;
}

CriterionResult criterion_series_numeric() {
  CriterionResult r{4, "Laurent series vs direct W_n at t = 1e-3", true, "", 0.0};
  double worst = 0.0;
  for (const LayeredStructure& s : random_structures(77, 10)) {
    for (int n = 1; n <= 2; ++n) {
      for (Polarization pol : kPols) {
        const cplx series = series_eval(scaled_coefficient_series(s, n, pol, 2), 1e-3);
        worst = std::max(worst, rel_err(series, scaled_coefficient(s, n, pol, 1e-3)));
      }
    }
  }
  r.passed = worst <= 1e-6;
  r.detail = "max relative error " + sci(worst);
  return r;
}

CriterionResult criterion_bare_pec() {
  CriterionResult r{5, "vacuum layers reduce to the bare PEC sphere", true, "", 0.0};
  double worst = 0.0;
  const std::vector<LayeredStructure> cases = {LayeredStructure::vacuum(default_radii(1)),
                                               LayeredStructure::vacuum(default_radii(6)),
                                               LayeredStructure::vacuum({3.0, 2.5, 1.7, 0.8}, {1.5, 2.0})};
  for (const LayeredStructure& s : cases) {
    for (double omega : {0.5, 1.0, 2.0}) {
      const double k0 = omega * s.z(0);
      for (int n = 1; n <= 6; ++n) {
        const BesselEval b = sph_bessel(n, k0 * s.core_radius());
        const cplx pref = -kI * double(n * (n + 1)) / k0;
        worst = std::max(worst, rel_err(modal_coefficient(s, n, Polarization::TE, omega).numeric(), pref * (-b.j / b.h)));
        worst = std::max(worst, rel_err(modal_coefficient(s, n, Polarization::TM, omega).numeric(),
                                        pref * (-b.riccati_j / b.riccati_h)));
      }
    }
  }
  r.passed = worst <= 1e-12;
  r.detail = "max relative error " + sci(worst);
  return r;
}

CriterionResult criterion_unitarity() {
  CriterionResult r{6, "unitarity |1 + 2 a_0| = |1 + 2 b_0| = 1", true, "", 0.0};
  std::vector<LayeredStructure> cases = random_structures(99, 10);
  cases.push_back(reference_structure());
  cases.push_back(LayeredStructure::vacuum(default_radii(3)));
  double worst = 0.0;
  for (const LayeredStructure& s : cases) {
    for (double omega : {0.5, 1.0, 2.0}) {
      for (int n = 1; n <= 6; ++n) {
        for (Polarization pol : kPols) {
          worst = std::max(worst, std::abs(std::abs(1.0 + 2.0 * exterior_coefficient(s, n, pol, omega)) - 1.0));
        }
      }
    }
  }
  r.passed = worst <= 1e-10;
  r.detail = "max deviation " + sci(worst);
  return r;
}

CriterionResult criterion_special_functions() {
  CriterionResult r{7, "Wronskian and cross identity", true, "", 0.0};
  double worst = 0.0;
  for (int n = 0; n <= 10; ++n) {
    for (double t : {0.01, 0.1, 1.0, 5.0, 20.0}) {
      const BesselEval b = sph_bessel(n, t);
      const double wr = b.j * b.dy - b.dj * b.y;
      worst = std::max(worst, std::abs(wr * t * t - 1.0));
      const cplx cross = b.j * b.riccati_h - b.h * b.riccati_j;
      worst = std::max(worst, std::abs(cross * t - kI));
    }
  }
  r.passed = worst <= 1e-12;
  r.detail = "max relative error " + sci(worst);
  return r;
}

CriterionResult criterion_scaling() {
  CriterionResult r{8, "radii-rho / frequency-rho equivalence", true, "", 0.0};
  std::vector<LayeredStructure> cases = random_structures(5, 3);
  cases.push_back(reference_structure());
  const Direction k_hat(Vec3(0.2, -0.4, 0.9));
  const Vec3 c = k_hat.vector().cross(Vec3(1.0, 0.3, -0.2)).normalized();
  double worst_w = 0.0;
  double worst_a = 0.0;
  for (const LayeredStructure& s : cases) {
    for (double rho : {0.5, 0.1}) {
      const LayeredStructure small = s.scaled(rho);
      for (int n = 1; n <= 4; ++n) {
        for (Polarization pol : kPols) {
          worst_w = std::max(worst_w, rel_err(scaled_coefficient(small, n, pol, 1.0), scaled_coefficient(s, n, pol, rho)));
        }
      }
      for (const Vec3& x : {Vec3(0.3, 0.5, -0.8), Vec3(-0.7, 0.1, 0.2), Vec3(0.0, 0.0, 1.0)}) {
        const CVec3 a = scattering_amplitude(small, 1.0, c, k_hat, Direction(x), 8).amplitude;
        const CVec3 b = scattering_amplitude(s, rho, c, k_hat, Direction(x), 8).amplitude;
        const double scale = std::max(a.norm(), b.norm());
        if (scale > 0.0) worst_a = std::max(worst_a, (a - b).norm() / scale);
      }
    }
  }
  r.passed = worst_w <= 1e-12 && worst_a <= 1e-12;
  r.detail = "W " + sci(worst_w) + ", amplitude " + sci(worst_a);
  return r;
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

CriterionResult criterion_farfield() {
  CriterionResult r{9, "VSH orthonormality, amplitude tangency and rotation invariance", true, "", 0.0};
  const int n_max = 6;
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(2 * n_max + 2, x, w);
  const int n_phi = 4 * n_max + 4;
  std::vector<VshEval> basis;
  std::vector<double> weight;
  std::vector<std::vector<VshEval>> at_node;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (int j = 0; j < n_phi; ++j) {
      const Direction d = Direction::from_angles(std::acos(x[i]), 2.0 * std::numbers::pi * j / n_phi);
      std::vector<VshEval> row;
      for (int n = 1; n <= n_max; ++n) {
        for (int m = -n; m <= n; ++m) row.push_back(vsh(n, m, d));
      }
      at_node.push_back(std::move(row));
      weight.push_back(w[i] * 2.0 * std::numbers::pi / n_phi);
    }
  }
  const std::size_t count = at_node.front().size();
  double ortho = 0.0;
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = a; b < count; ++b) {
      cplx uu{}, vv{}, uv{};
      for (std::size_t k = 0; k < at_node.size(); ++k) {
        const VshEval& p = at_node[k][a];
        const VshEval& q = at_node[k][b];
        uu += weight[k] * q.U.dot(p.U);
        vv += weight[k] * q.V.dot(p.V);
        uv += weight[k] * q.V.dot(p.U);
      }
      const double delta = a == b ? 1.0 : 0.0;
      ortho = std::max({ortho, std::abs(uu - delta), std::abs(vv - delta), std::abs(uv)});
      if (a != b) {
        cplx vu{};
        for (std::size_t k = 0; k < at_node.size(); ++k) vu += weight[k] * at_node[k][a].V.dot(at_node[k][b].U);
        ortho = std::max(ortho, std::abs(vu));
      }
    }
  }

  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  double tangency = 0.0;
  double rotation = 0.0;
  std::vector<LayeredStructure> cases = random_structures(13, 3);
  cases.push_back(reference_structure());
  for (const LayeredStructure& s : cases) {
    for (int trial = 0; trial < 4; ++trial) {
      const Direction k_hat(Vec3(g(rng), g(rng), g(rng)));
      const Vec3 c = k_hat.vector().cross(Vec3(g(rng), g(rng), g(rng))).normalized();
      const Direction x_hat(Vec3(g(rng), g(rng), g(rng)));
      const FarFieldSample a = scattering_amplitude(s, 1.0, c, k_hat, x_hat, 10);
      tangency = std::max(tangency, std::abs(x_hat.vector().cast<cplx>().dot(a.amplitude)) / a.amplitude.norm());
      const Eigen::Matrix3d rot = random_rotation(rng);
      Vec3 rc = rot * c;
      const Direction rk(rot * k_hat.vector());
      rc -= rk.vector() * rk.vector().dot(rc);
      const FarFieldSample b = scattering_amplitude(s, 1.0, rc, rk, Direction(rot * x_hat.vector()), 10);
      rotation = std::max(rotation, std::abs(b.amplitude.norm() - a.amplitude.norm()) / a.amplitude.norm());
    }
  }
  r.passed = ortho <= 1e-10 && tangency <= 1e-10 && rotation <= 1e-10;
  r.detail = "orthonormality " + sci(ortho) + ", tangency " + sci(tangency) + ", rotation " + sci(rotation);
  return r;
}

CriterionResult criterion_cloak() {
  CriterionResult r{10, "blow-up map continuity, identity, inverse and SPD tensors", true, "", 0.0};
  const LayeredStructure s = reference_structure();
  double continuity = 0.0;
  double identity = 0.0;
  double round_trip = 0.0;
  double min_eig = 1e300;
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> radius(0.0, 3.0);
  for (double rho : {0.05, 0.1, 0.25}) {
    for (double edge : {rho, 2.0 * rho, 2.0}) {
      const double below = blow_up_profile(rho, std::nextafter(edge, 0.0)).f;
      const double above = blow_up_profile(rho, edge).f;
      continuity = std::max(continuity, std::abs(above - below));
    }
    for (int k = 0; k < 1000; ++k) {
      const Vec3 dir = Vec3(g(rng), g(rng), g(rng)).normalized();
      const Vec3 y = dir * radius(rng);
      round_trip = std::max(round_trip, (blow_up_map(rho, inverse_map(rho, y)) - y).norm());
      const Vec3 far = dir * (2.0 + 3.0 * radius(rng));
      identity = std::max(identity, (blow_up_map(rho, far) - far).norm());
    }
    for (const Vec3& y : cloak_sample_grid(s, rho, 15, 2.5)) {
      const MaterialTensorField f = push_forward(s, rho, y);
      for (const Eigen::Matrix3d* m : {&f.mu, &f.eps}) {
        min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(*m).eigenvalues().minCoeff());
      }
    }
  }
  r.passed = continuity <= 1e-14 && identity == 0.0 && round_trip <= 1e-13 && min_eig > 0.0;
  r.detail = "continuity " + sci(continuity) + ", identity " + sci(identity) + ", round trip " + sci(round_trip) +
             ", min eigenvalue " + sci(min_eig);
  return r;
}

}  // namespace

std::vector<double> reference_mu() { return {0.1000, 1.1113, 0.2977, 2.0436, 0.1000, 1.8260}; }
std::vector<double> reference_eps() { return {0.4356, 1.1461, 0.2899, 1.8199, 0.1000, 3.1233}; }

DesignProblem reference_problem() { return make_default_problem(6, 2); }

double loglog_slope(const std::function<double(double)>& f, double t_lo, double t_hi, int count) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int k = 0; k < count; ++k) {
    const double x = std::log(t_lo) + (std::log(t_hi) - std::log(t_lo)) * k / (count - 1);
    const double y = std::log(f(std::exp(x)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

double max_scaled_coefficient(const DesignProblem& problem, const std::vector<double>& mu, const std::vector<double>& eps) {
  const CoefficientTable t = lowfreq_coefficients(design_structure(problem, mu, eps), problem.order);
  const std::vector<double> scales = residual_scales(problem);
  double worst = 0.0;
  for (std::size_t k = 0; k < t.entries().size(); ++k) worst = std::max(worst, std::abs(t.entries()[k].value) / scales[k]);
  return worst;
}

std::vector<CriterionResult> run_all(const std::vector<int>& only) {
  using Fn = CriterionResult (*)();
  const Fn all[] = {criterion_design,  criterion_leading_power, criterion_suppression, criterion_series_numeric,
                    criterion_bare_pec, criterion_unitarity,     criterion_special_functions, criterion_scaling,
                    criterion_farfield, criterion_cloak};
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 10; ++id) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = all[id - 1]();
    } catch (const std::exception& e) {
      r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what(), 0.0};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char sec[32];
  std::snprintf(sec, sizeof sec, "%.2fs", r.seconds);
  return std::string(r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.title + " (" + r.detail +
         ") " + sec;
}

}  // namespace svanish::acceptance
