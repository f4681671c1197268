#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <vector>

#include "svanish/multilayer.hpp"

namespace svanish {

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

/// Unit vector on the sphere.
class Direction {
 public:
  /// Normalizes v; throws DomainError for a zero or non-finite vector.
  explicit Direction(const Vec3& v);
  static Direction from_angles(double theta, double phi);

  const Vec3& vector() const noexcept { return v_; }
  double theta() const;
  /// atan2(y, x); 0 on the polar axis.
  double phi() const;
  /// Local frame (theta_hat, phi_hat) at this direction, using phi() on the axis.
  Vec3 theta_hat() const;
  Vec3 phi_hat() const;

 private:
  Vec3 v_;
};

/// Y_n^m, U_{n,m} = grad_S Y_n^m / sqrt(n(n+1)) and V_{n,m} = x_hat x U_{n,m}, orthonormal
/// spherical harmonics with the Condon-Shortley phase.
struct VshEval {
  int n = 1;
  int m = 0;
  cplx Y{};
  CVec3 U = CVec3::Zero();
  CVec3 V = CVec3::Zero();
};

/// Requires n >= 1 and |m| <= n (DomainError). Finite on the poles.
VshEval vsh(int n, int m, const Direction& x);

/// Y_n^m alone; n >= 0.
cplx spherical_harmonic(int n, int m, const Direction& x);

/// Frequency and background medium used to scale the TM multipoles.
struct WaveContext {
  double omega = 1.0;
  Background background{};

  double k0() const;
};

/// Coefficients (a_{p,q}, b_{p,q}) of an incident field sum_{p,q} a E~TE_{p,q} + b E~TM_{p,q},
/// stored for 1 <= p <= n_max, -p <= q <= p.
class MultipoleCoefficients {
 public:
  explicit MultipoleCoefficients(int n_max);

  int n_max() const noexcept { return n_max_; }
  cplx& a(int p, int q) { return a_[index(p, q)]; }
  cplx& b(int p, int q) { return b_[index(p, q)]; }
  cplx a(int p, int q) const { return a_[index(p, q)]; }
  cplx b(int p, int q) const { return b_[index(p, q)]; }

 private:
  std::size_t index(int p, int q) const;
  int n_max_;
  std::vector<cplx> a_;
  std::vector<cplx> b_;
};

/// Regular TE multipole E~TE_{n,m}(x) = -sqrt(n(n+1)) j_n(k|x|) V_{n,m}(x_hat).
CVec3 regular_multipole_te(int n, int m, double k, const Vec3& x);
/// Regular TM multipole E~TM_{n,m} = (i / (omega eps)) curl E~TE_{n,m}.
CVec3 regular_multipole_tm(int n, int m, double k, double omega, double eps, const Vec3& x);

/// Expansion of the plane wave e^{i k_0 k_hat . x} c in regular multipoles:
/// a = -(4 pi i^p / sqrt(p(p+1))) conj(V_{p,q}(k_hat)) . c,
/// b = -(omega eps_0 / k_0) (4 pi i^p / sqrt(p(p+1))) conj(U_{p,q}(k_hat)) . c.
/// Requires c != 0 and |c . k_hat| <= 1e-12 |c| (DomainError).
MultipoleCoefficients plane_wave_coefficients(const Vec3& c, const Direction& k_hat, int n_max, const WaveContext& ctx);

/// Amplitude of the field scattered by the structure when the incident field has the given
/// multipole coefficients, in the normalization E_s ~ e^{i k_0 |x|} / (k_0 |x|) A(x_hat).
CVec3 scattered_amplitude(const LayeredStructure& s, const WaveContext& ctx, const MultipoleCoefficients& incident,
                          const Direction& x_hat);

struct FarFieldSample {
  Vec3 c = Vec3::Zero();
  Direction k_hat{Vec3::UnitZ()};
  Direction x_hat{Vec3::UnitZ()};
  CVec3 amplitude = CVec3::Zero();
  int n_max = 1;
  /// Estimated relative size of the omitted orders n > n_max.
  double tail_estimate = 0.0;
  /// Angles as requested; on the axis they carry the azimuth that x_hat itself loses.
  double theta = 0.0;
  double phi = 0.0;
};

/// Smallest n_max whose geometric tail estimate of the modal powers is below 1e-12 of the partial
/// sum, capped at 32.
int default_nmax(const LayeredStructure& s, double omega);

/// Plane-wave scattering amplitude A(x_hat). n_max = 0 selects default_nmax.
FarFieldSample scattering_amplitude(const LayeredStructure& s, double omega, const Vec3& c, const Direction& k_hat,
                                    const Direction& x_hat, int n_max = 0);

/// Amplitudes on a (theta, phi) product grid, theta-major.
std::vector<FarFieldSample> scattering_amplitude_grid(const LayeredStructure& s, double omega, const Vec3& c,
                                                      const Direction& k_hat, const std::vector<double>& thetas,
                                                      const std::vector<double>& phis, int n_max = 0);

struct CrossSection {
  double quadrature = 0.0;  ///< (1/k_0^2) integral over the sphere of |A|^2
  double modal = 0.0;       ///< (2 pi |c|^2 / k_0^2) sum_n (2n+1)(|a_0|^2 + |b_0|^2)
  int n_max = 1;
};

/// Both evaluations of the scattering cross section. n_max = 0 selects default_nmax.
CrossSection scattering_cross_section(const LayeredStructure& s, double omega, const Vec3& c, const Direction& k_hat,
                                      int n_max = 0);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace svanish
