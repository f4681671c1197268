#include "svanish/farfield.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "svanish/error.hpp"
#include "test_support.hpp"

namespace svanish {
namespace {

using std::numbers::pi;
using testing::kI;
using testing::rel_err;

/// Bare PEC sphere of radius 1 in vacuum.
LayeredStructure pec_sphere() { return LayeredStructure({1.0}, {}, {}); }

/// Product rule exact for spherical polynomials of degree below 2 * count.
template <class F>
cplx sphere_integral(int count, F&& f) {
  std::vector<double> nodes, weights;
  gauss_legendre(count, nodes, weights);
  const int phis = 2 * count;
  cplx sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double theta = std::acos(nodes[i]);
    for (int k = 0; k < phis; ++k) {
      sum += weights[i] * (2 * pi / phis) * f(Direction::from_angles(theta, 2 * pi * k / phis));
    }
  }
  return sum;
}

/// a . conj(b)
cplx cdot(const CVec3& a, const CVec3& b) { return (a.array() * b.conjugate().array()).sum(); }

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  return q.normalized().toRotationMatrix();
}

TEST(Direction, NormalizesAndReportsAngles) {
  const Direction d(Vec3(0.0, 3.0, 4.0));
  EXPECT_NEAR(d.vector().norm(), 1.0, 1e-15);
  EXPECT_NEAR(d.theta(), std::atan2(3.0, 4.0), 1e-15);
  EXPECT_NEAR(d.phi(), pi / 2, 1e-15);
  const Direction e = Direction::from_angles(0.7, -2.0);
  EXPECT_NEAR(e.theta(), 0.7, 1e-14);
  EXPECT_NEAR(e.phi(), -2.0, 1e-14);
  EXPECT_NEAR(e.theta_hat().dot(e.vector()), 0.0, 1e-15);
  EXPECT_NEAR(e.phi_hat().dot(e.vector()), 0.0, 1e-15);
  EXPECT_NEAR(e.theta_hat().cross(e.phi_hat()).dot(e.vector()), 1.0, 1e-14);
  EXPECT_EQ(Direction(Vec3::UnitZ()).phi(), 0.0);
  EXPECT_THROW(Direction(Vec3::Zero()), DomainError);
  EXPECT_THROW(Direction(Vec3(NAN, 0, 1)), DomainError);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  std::vector<double> x, w;
  gauss_legendre(8, x, w);
  ASSERT_EQ(x.size(), 8u);
  for (int p = 0; p < 16; ++p) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * std::pow(x[i], p);
    const double want = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
    EXPECT_NEAR(sum, want, 1e-14) << "power " << p;
  }
}

TEST(Vsh, SphericalHarmonicMatchesStandardLibrary) {
  for (int n = 0; n <= 8; ++n) {
    for (int m = -n; m <= n; ++m) {
      for (double theta : {0.0, 0.3, 1.2, 2.5, pi}) {
        const double phi = 0.9;
        const auto am = static_cast<unsigned>(std::abs(m));
        const double legendre = std::sph_legendre(static_cast<unsigned>(n), am, theta);
        cplx want = legendre * std::exp(kI * double(std::abs(m)) * phi);
        if (m < 0) want = (am % 2 == 0 ? 1.0 : -1.0) * std::conj(want);
        const cplx got = spherical_harmonic(n, m, Direction::from_angles(theta, phi));
        EXPECT_LT(std::abs(got - want), 1e-13) << n << " " << m << " " << theta;
      }
    }
  }
}

TEST(Vsh, OrthonormalOnTheSphere) {
  const int n_max = 6;
  std::vector<std::pair<int, int>> idx;
  for (int n = 1; n <= n_max; ++n) {
    for (int m = -n; m <= n; ++m) idx.emplace_back(n, m);
  }
  for (const auto& [n1, m1] : idx) {
    for (const auto& [n2, m2] : idx) {
      const cplx uu = sphere_integral(n_max + 2, [&](const Direction& d) { return cdot(vsh(n1, m1, d).U, vsh(n2, m2, d).U); });
      const cplx vv = sphere_integral(n_max + 2, [&](const Direction& d) { return cdot(vsh(n1, m1, d).V, vsh(n2, m2, d).V); });
      const cplx uv = sphere_integral(n_max + 2, [&](const Direction& d) { return cdot(vsh(n1, m1, d).U, vsh(n2, m2, d).V); });
      const double delta = (n1 == n2 && m1 == m2) ? 1.0 : 0.0;
      EXPECT_LT(std::abs(uu - delta), 1e-10) << n1 << "," << m1 << " / " << n2 << "," << m2;
      EXPECT_LT(std::abs(vv - delta), 1e-10);
      EXPECT_LT(std::abs(uv), 1e-10);
    }
  }
}

TEST(Vsh, TangentAndRotatedByCrossProduct) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Direction d(Vec3(u(rng), u(rng), u(rng)));
    for (int n = 1; n <= 5; ++n) {
      for (int m = -n; m <= n; ++m) {
        const VshEval e = vsh(n, m, d);
        const CVec3 x = d.vector().cast<cplx>();
        EXPECT_LT(std::abs(e.U.dot(x)), 1e-13);
        EXPECT_LT(std::abs(e.V.dot(x)), 1e-13);
        EXPECT_LT((e.V - x.cross(e.U)).norm(), 1e-13);
      }
    }
  }
}

TEST(Vsh, PoleLimits) {
  const Direction north(Vec3::UnitZ());
  const double c = std::sqrt(3.0 / (8.0 * pi));
  const VshEval u11 = vsh(1, 1, north);
  const CVec3 want = -c * CVec3(1.0, kI, 0.0) / std::sqrt(2.0);
  EXPECT_LT((u11.U - want).norm(), 1e-14);
  EXPECT_LT(vsh(1, 0, north).U.norm(), 1e-15);
  // Continuity towards the pole.
  for (int n = 1; n <= 4; ++n) {
    for (int m = -n; m <= n; ++m) {
      const VshEval at = vsh(n, m, north);
      const VshEval near = vsh(n, m, Direction::from_angles(1e-9, 0.0));
      EXPECT_LT((at.U - near.U).norm(), 1e-7);
      EXPECT_TRUE(at.U.allFinite() && at.V.allFinite());
    }
  }
  const VshEval south = vsh(2, -1, Direction(-Vec3::UnitZ()));
  EXPECT_TRUE(south.U.allFinite());
  EXPECT_THROW(vsh(0, 0, north), DomainError);
  EXPECT_THROW(vsh(2, 3, north), DomainError);
}

TEST(PlaneWave, ReconstructedFromRegularMultipoles) {
  const WaveContext ctx{1.0, {}};
  const double k = ctx.k0();
  const int n_max = 12;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Direction k_hat(Vec3(u(rng), u(rng), u(rng)));
    Vec3 c = Vec3(u(rng), u(rng), u(rng));
    c -= c.dot(k_hat.vector()) * k_hat.vector();
    const MultipoleCoefficients coeffs = plane_wave_coefficients(c, k_hat, n_max, ctx);
    for (int probe = 0; probe < 5; ++probe) {
      const Vec3 x = 0.5 * Vec3(u(rng), u(rng), u(rng)).normalized();
      CVec3 sum = CVec3::Zero();
      for (int p = 1; p <= n_max; ++p) {
        for (int q = -p; q <= p; ++q) {
          sum += coeffs.a(p, q) * regular_multipole_te(p, q, k, x);
          sum += coeffs.b(p, q) * regular_multipole_tm(p, q, k, ctx.omega, ctx.background.eps, x);
        }
      }
      const CVec3 want = std::exp(kI * k * k_hat.vector().dot(x)) * c.cast<cplx>();
      EXPECT_LT((sum - want).norm(), 1e-8 * c.norm());
    }
  }
}

TEST(PlaneWave, AxialIncidenceOnlyExcitesUnitAzimuthalOrder) {
  const MultipoleCoefficients coeffs = plane_wave_coefficients(Vec3::UnitX(), Direction(Vec3::UnitZ()), 6, WaveContext{});
  for (int p = 1; p <= 6; ++p) {
    for (int q = -p; q <= p; ++q) {
      if (std::abs(q) == 1) {
        EXPECT_GT(std::abs(coeffs.a(p, q)), 1e-3);
      } else {
        EXPECT_EQ(std::abs(coeffs.a(p, q)), 0.0);
        EXPECT_EQ(std::abs(coeffs.b(p, q)), 0.0);
      }
    }
  }
}

TEST(PlaneWave, RejectsInvalidPolarization) {
  EXPECT_THROW(plane_wave_coefficients(Vec3::UnitZ(), Direction(Vec3::UnitZ()), 3, WaveContext{}), DomainError);
  EXPECT_THROW(plane_wave_coefficients(Vec3::Zero(), Direction(Vec3::UnitZ()), 3, WaveContext{}), DomainError);
}

TEST(ScatteringAmplitude, ForwardAmplitudeOfPecSphere) {
  const FarFieldSample s = scattering_amplitude(pec_sphere(), 1.0, Vec3::UnitX(), Direction(Vec3::UnitZ()), Direction(Vec3::UnitZ()));
  EXPECT_NEAR(s.amplitude.x().real(), 0.4035, 1e-4);
  EXPECT_NEAR(s.amplitude.x().imag(), 0.50897, 1e-5);
  EXPECT_LT(std::abs(s.amplitude.y()), 1e-13);
  EXPECT_LT(std::abs(s.amplitude.z()), 1e-13);
  EXPECT_LE(s.tail_estimate, 1e-12);
}

TEST(ScatteringAmplitude, TangentialAndRotationCovariant) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const LayeredStructure s = testing::random_structures(8, 3)[1];
  for (int trial = 0; trial < 10; ++trial) {
    const Direction k_hat(Vec3(u(rng), u(rng), u(rng)));
    Vec3 c(u(rng), u(rng), u(rng));
    c -= c.dot(k_hat.vector()) * k_hat.vector();
    const Direction x_hat(Vec3(u(rng), u(rng), u(rng)));
    const CVec3 a = scattering_amplitude(s, 0.8, c, k_hat, x_hat, 12).amplitude;
    EXPECT_LT(std::abs(a.dot(x_hat.vector().cast<cplx>())), 1e-12 * a.norm());
    const Eigen::Matrix3d rot = random_rotation(rng);
    const CVec3 b = scattering_amplitude(s, 0.8, rot * c, Direction(rot * k_hat.vector()), Direction(rot * x_hat.vector()), 12).amplitude;
    EXPECT_LT((b - rot.cast<cplx>() * a).norm(), 1e-10 * a.norm());
  }
}

TEST(ScatteringAmplitude, GridCarriesRequestedAngles) {
  const std::vector<double> thetas{0.0, 1.0}, phis{0.0, 2.0};
  const auto grid = scattering_amplitude_grid(pec_sphere(), 1.0, Vec3::UnitX(), Direction(Vec3::UnitZ()), thetas, phis);
  ASSERT_EQ(grid.size(), 4u);
  EXPECT_EQ(grid[1].theta, 0.0);
  EXPECT_EQ(grid[1].phi, 2.0);
  EXPECT_EQ(grid[2].theta, 1.0);
  EXPECT_LT((grid[0].amplitude - grid[1].amplitude).norm(), 1e-14);
}

TEST(CrossSection, PecSphereMatchesMieSeries) {
  // Mie series for a perfectly conducting sphere at ka = 1, evaluated to 22 digits.
  const double mie = 6.395856195323304192542;
  const CrossSection cs = scattering_cross_section(pec_sphere(), 1.0, Vec3::UnitX(), Direction(Vec3::UnitZ()));
  EXPECT_LT(std::abs(cs.modal - mie) / mie, 1e-12);
  EXPECT_LT(std::abs(cs.quadrature - mie) / mie, 1e-10);
}

TEST(CrossSection, OpticalTheoremAndInvariance) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const LayeredStructure& s : testing::random_structures(61, 3)) {
    const double omega = 0.7;
    const double k0 = omega;
    const Direction k_hat(Vec3(u(rng), u(rng), u(rng)));
    Vec3 c(u(rng), u(rng), u(rng));
    c -= c.dot(k_hat.vector()) * k_hat.vector();
    c.normalize();
    const CrossSection cs = scattering_cross_section(s, omega, c, k_hat);
    EXPECT_LT(std::abs(cs.quadrature - cs.modal) / cs.modal, 1e-10);
    const CVec3 fwd = scattering_amplitude(s, omega, c, k_hat, k_hat, cs.n_max).amplitude;
    const double extinction = 4 * pi / (k0 * k0) * (c.cast<cplx>().dot(fwd)).imag();
    EXPECT_LT(std::abs(extinction - cs.modal) / cs.modal, 1e-10);
    // Spherical symmetry: independent of incidence and polarization.
    const CrossSection axial = scattering_cross_section(s, omega, Vec3::UnitY(), Direction(Vec3::UnitZ()));
    EXPECT_LT(std::abs(axial.modal - cs.modal) / cs.modal, 1e-12);
  }
}

TEST(CrossSection, ScalesWithRadiusSquared) {
  const LayeredStructure s = testing::random_structures(71, 2)[1];
  const double rho = 0.3, omega = 1.5;
  const double small = scattering_cross_section(s.scaled(rho), omega, Vec3::UnitX(), Direction(Vec3::UnitZ())).modal;
  const double unit = scattering_cross_section(s, rho * omega, Vec3::UnitX(), Direction(Vec3::UnitZ())).modal;
  EXPECT_LT(std::abs(small - rho * rho * unit) / small, 1e-10);
}

TEST(CrossSection, DefaultOrderGrowsWithFrequency) {
  const LayeredStructure s = pec_sphere();
  const int low = default_nmax(s, 0.1), mid = default_nmax(s, 1.0), high = default_nmax(s, 5.0);
  EXPECT_GE(low, 1);
  EXPECT_LE(low, mid);
  EXPECT_LT(mid, high);
  EXPECT_LE(high, 32);
  const CrossSection a = scattering_cross_section(s, 1.0, Vec3::UnitX(), Direction(Vec3::UnitZ()));
  const CrossSection b = scattering_cross_section(s, 1.0, Vec3::UnitX(), Direction(Vec3::UnitZ()), 30);
  EXPECT_EQ(a.n_max, mid);
  EXPECT_LT(std::abs(a.modal - b.modal) / b.modal, 1e-12);
}

TEST(CrossSection, ChainedReferenceDesignIsNearlyInvisible) {
  const double omega = 0.05;
  const double bare = scattering_cross_section(LayeredStructure::vacuum(default_radii(6)), omega, Vec3::UnitX(), Direction(Vec3::UnitZ())).modal;
  const double cloaked = scattering_cross_section(testing::reference_structure(TransferOrdering::reversed), omega, Vec3::UnitX(), Direction(Vec3::UnitZ())).modal;
  EXPECT_LE(cloaked, 1e-4 * bare);
}

}  // namespace
}  // namespace svanish
