#include "svanish/designer.hpp"

#include <gtest/gtest.h>

#include <random>

#include "svanish/error.hpp"
#include "svanish/lowfreq.hpp"
#include "test_support.hpp"

namespace svanish {
namespace {

bool within_bounds(const DesignProblem& p, const std::vector<double>& v) {
  for (double x : v) {
    if (x < p.lower || x > p.upper) return false;
  }
  return true;
}

/// Six-layer order-2 design chained outermost first, shared across tests (a few seconds).
const DesignResult& chained_design() {
  static const DesignResult result = [] {
    DesignProblem p = make_default_problem(6, 2);
    p.ordering = TransferOrdering::reversed;
    p.restarts = 30;
    p.seed = 1;
    return design(p);
  }();
  return result;
}

TEST(DesignProblem, DefaultsAndValidation) {
  const DesignProblem p = make_default_problem(6, 2);
  EXPECT_EQ(p.residual_size(), 6);
  EXPECT_FALSE(p.overdetermined());
  EXPECT_EQ(p.mu, (std::vector<double>{3, 6, 3, 6, 3, 6}));
  EXPECT_EQ(p.eps, p.mu);
  EXPECT_EQ(p.radii, default_radii(6));
  EXPECT_EQ(p.lower, 0.1);
  EXPECT_EQ(p.upper, 10.0);
  EXPECT_EQ(p.max_iters, 200);
  EXPECT_EQ(p.residual_tol, 1e-10);
  EXPECT_EQ(p.step_damping, 1.0);
  EXPECT_NO_THROW(p.validate());
  EXPECT_TRUE(make_default_problem(1, 2).overdetermined());

  DesignProblem bad = p;
  bad.lower = 10.0;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = p;
  bad.mu[0] = 20.0;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = p;
  bad.step_damping = 0.0;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = p;
  bad.eps.pop_back();
  EXPECT_THROW(bad.validate(), DomainError);
}

TEST(Residual, VacuumGivesSignedUnitVector) {
  const DesignProblem p = make_default_problem(6, 2);
  const std::vector<double> ones(6, 1.0);
  const Eigen::VectorXd r = residual(p, ones, ones);
  ASSERT_EQ(r.size(), 6);
  // Bare-sphere signs: TE (-, +, -), TM (+, +, +).
  const double want[] = {-1, 1, -1, 1, 1, 1};
  for (int k = 0; k < 6; ++k) EXPECT_NEAR(r(k), want[k], 1e-12);
}

TEST(Residual, ScalesMatchBareCoefficients) {
  const DesignProblem p = make_default_problem(3, 2);
  const CoefficientTable bare = lowfreq_coefficients(LayeredStructure::vacuum(p.radii), 2);
  const std::vector<double> scales = residual_scales(p);
  ASSERT_EQ(scales.size(), bare.entries().size());
  for (std::size_t k = 0; k < scales.size(); ++k) EXPECT_NEAR(scales[k], std::abs(bare.entries()[k].value), 1e-14);
}

TEST(Jacobian, AgreesWithFivePointStencil) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.5, 5.0);
  const DesignProblem p = make_default_problem(3, 2);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<double> mu(3), eps(3);
    for (auto& v : mu) v = u(rng);
    for (auto& v : eps) v = u(rng);
    const Eigen::MatrixXd jac = jacobian(p, mu, eps);
    ASSERT_EQ(jac.rows(), 6);
    ASSERT_EQ(jac.cols(), 6);
    for (int col = 0; col < 6; ++col) {
      auto eval = [&](double delta) {
        std::vector<double> m = mu, e = eps;
        (col < 3 ? m[static_cast<std::size_t>(col)] : e[static_cast<std::size_t>(col - 3)]) += delta;
        return residual(p, m, e);
      };
      const double h = 1e-3;
      const Eigen::VectorXd five = (eval(-2 * h) - 8 * eval(-h) + 8 * eval(h) - eval(2 * h)) / (12 * h);
      EXPECT_LE((jac.col(col) - five).norm(), 1e-4 * std::max(1.0, five.norm())) << "trial " << trial << " col " << col;
    }
  }
}

TEST(Jacobian, ColumnsOfEqualLayersDiffer) {
  const DesignProblem p = make_default_problem(4, 2);
  const std::vector<double> same(4, 2.0);
  const Eigen::MatrixXd jac = jacobian(p, same, same);
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) EXPECT_GT((jac.col(a) - jac.col(b)).norm(), 1e-6);
  }
}

TEST(Jacobian, OneSidedAtBounds) {
  const DesignProblem p = make_default_problem(2, 1);
  const std::vector<double> mu{0.1, 10.0}, eps{1.0, 1.0};
  const Eigen::MatrixXd jac = jacobian(p, mu, eps);
  EXPECT_TRUE(jac.allFinite());
}

TEST(PseudoinverseStep, MinimumNormSolution) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd a(6, 12);
    for (int i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
    Eigen::VectorXd b(6);
    for (int i = 0; i < 6; ++i) b(i) = g(rng);
    const Eigen::VectorXd d = pseudoinverse_step(a, b);
    EXPECT_LE((a * d - b).norm(), 1e-10 * b.norm());
    // Reference minimum-norm solution A^T (A A^T)^-1 b.
    const Eigen::VectorXd ref = a.transpose() * (a * a.transpose()).ldlt().solve(b);
    EXPECT_LE((d - ref).norm(), 1e-10 * ref.norm());
  }
}

TEST(PseudoinverseStep, RankDeficientLeastSquares) {
  Eigen::MatrixXd a(3, 2);
  a << 1, 2, 2, 4, 3, 6;
  const Eigen::VectorXd b = Eigen::Vector3d(1, 0, 0);
  const Eigen::VectorXd d = pseudoinverse_step(a, b);
  // pinv of a rank-one matrix u v^T is v u^T / (|u|^2 |v|^2).
  const Eigen::Vector3d u(1, 2, 3);
  const Eigen::Vector2d v(1, 2);
  const Eigen::VectorXd ref = v * u.dot(b) / (u.squaredNorm() * v.squaredNorm());
  EXPECT_LE((d - ref).norm(), 1e-12);
}

TEST(Design, EarlyExitWhenToleranceAlreadyMet) {
  DesignProblem p = make_default_problem(2, 1);
  p.residual_tol = 1e3;
  const DesignResult r = design(p);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.mu, p.mu);
  ASSERT_EQ(r.residual_norm_history.size(), 1u);
}

TEST(Design, SingleLayerOrderOneConverges) {
  DesignProblem p = make_default_problem(1, 1);
  p.mu = {2.0};
  p.eps = {2.0};
  const DesignResult r = design(p);
  ASSERT_TRUE(r.converged) << r.stop_reason << " |b|=" << r.final_residual();
  EXPECT_LE(r.final_residual(), 1e-10);
  EXPECT_NEAR(r.mu[0], 1.2143, 1e-3);
  EXPECT_NEAR(r.eps[0], 0.7000, 1e-3);
  EXPECT_LE(std::abs(lowfreq_coefficients(design_structure(p, r.mu, r.eps), 1).at(1, 0, Polarization::TE)), 1e-9);
}

TEST(Design, IteratesStayInBoundsAndHistoryIsMonotone) {
  const DesignProblem p = make_default_problem(6, 2);
  const DesignResult r = design(p);
  EXPECT_TRUE(within_bounds(p, r.mu));
  EXPECT_TRUE(within_bounds(p, r.eps));
  EXPECT_FALSE(r.stop_reason.empty());
  ASSERT_FALSE(r.residual_norm_history.empty());
  for (std::size_t k = 0; k < r.residual_norm_history.size(); ++k) {
    EXPECT_TRUE(std::isfinite(r.residual_norm_history[k]));
    if (k > 0) {
      EXPECT_LE(r.residual_norm_history[k], r.residual_norm_history[k - 1]);
    }
  }
  EXPECT_EQ(r.converged, r.final_residual() <= p.residual_tol);
}

TEST(Design, Deterministic) {
  DesignProblem p = make_default_problem(3, 2);
  p.max_iters = 40;
  p.restarts = 2;
  p.seed = 42;
  const DesignResult a = design(p), b = design(p);
  EXPECT_EQ(a.residual_norm_history, b.residual_norm_history);
  EXPECT_EQ(a.mu, b.mu);
  EXPECT_EQ(a.eps, b.eps);
  EXPECT_EQ(a.starts_used, b.starts_used);
}

TEST(Design, ChainedOrderingReachesSVanishingPoint) {
  const DesignProblem p = make_default_problem(6, 2);
  const DesignResult& r = chained_design();
  ASSERT_TRUE(r.converged) << r.stop_reason << " |b|=" << r.final_residual();
  EXPECT_LE(r.final_residual(), 1e-8);
  EXPECT_TRUE(within_bounds(p, r.mu));
  EXPECT_TRUE(within_bounds(p, r.eps));
  EXPECT_LE(r.max_imaginary_ratio, 1e-8);
  // All six coefficients at most 1e-4 of the bare-sphere magnitudes.
  const std::vector<double> scales = residual_scales(p);
  ASSERT_EQ(r.table.entries().size(), scales.size());
  for (std::size_t k = 0; k < scales.size(); ++k) EXPECT_LE(std::abs(r.table.entries()[k].value), 1e-4 * scales[k]);
}

TEST(Design, ChainedOptimumIsLocallyMinimal) {
  DesignProblem p = make_default_problem(6, 2);
  p.ordering = TransferOrdering::reversed;
  const DesignResult& r = chained_design();
  ASSERT_TRUE(r.converged);
  const double base = residual(p, r.mu, r.eps).norm();
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd d(12);
    for (int i = 0; i < 12; ++i) d(i) = g(rng);
    d *= 1e-3 / d.norm();
    std::vector<double> mu = r.mu, eps = r.eps;
    for (int j = 0; j < 6; ++j) {
      mu[static_cast<std::size_t>(j)] = std::clamp(mu[static_cast<std::size_t>(j)] + d(j), p.lower, p.upper);
      eps[static_cast<std::size_t>(j)] = std::clamp(eps[static_cast<std::size_t>(j)] + d(6 + j), p.lower, p.upper);
    }
    EXPECT_GT(residual(p, mu, eps).norm(), base);
  }
}

TEST(Design, ChainedOrderingPublishedPointHasSmallResidual) {
  DesignProblem p = make_default_problem(6, 2);
  p.ordering = TransferOrdering::reversed;
  const std::vector<double> ones(6, 1.0);
  const double vacuum = residual(p, ones, ones).norm();
  EXPECT_LE(residual(p, testing::kReferenceMu, testing::kReferenceEps).norm(), 1e-3 * vacuum);
}

TEST(Design, ChainedDesignSuppressesCrossSectionScale) {
  // Low-frequency suppression of the scaled coefficients: slope of max |W_n(t)| at least 2N + 2.
  const DesignProblem p = make_default_problem(6, 2);
  const DesignResult& r = chained_design();
  ASSERT_TRUE(r.converged);
  LayeredStructure s = design_structure(p, r.mu, r.eps).with_ordering(TransferOrdering::reversed);
  const double slope = testing::loglog_slope(
      [&](double t) {
        double worst = 0.0;
        for (int n = 1; n <= 2; ++n) {
          for (Polarization pol : {Polarization::TE, Polarization::TM}) {
            worst = std::max(worst, std::abs(scaled_coefficient(s, n, pol, t)));
          }
        }
        return worst;
      },
      1e-2, 1e-1);
  EXPECT_GE(slope, 6.0);
}

TEST(Design, DesignStructureUsesProblemGeometry) {
  DesignProblem p = make_default_problem(2, 1);
  p.background = {1.5, 2.0};
  p.ordering = TransferOrdering::reversed;
  const LayeredStructure s = design_structure(p, {1.0, 2.0}, {3.0, 4.0});
  EXPECT_EQ(s.radii(), p.radii);
  EXPECT_EQ(s.background().mu, 1.5);
  EXPECT_EQ(s.ordering(), TransferOrdering::reversed);
  EXPECT_EQ(s.eps(), (std::vector<double>{3.0, 4.0}));
}

}  // namespace
}  // namespace svanish
