#include "svanish/farfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "svanish/error.hpp"
#include "svanish/specfun.hpp"

namespace svanish {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;
constexpr int kMaxAutoOrder = 32;
constexpr double kTailTolerance = 1e-12;

// Normalized associated Legendre value P_n^m(cos theta) (m >= 0), its theta derivative and
// P_n^m / sin theta (only meaningful for m >= 1), all evaluated without dividing by sin theta.
struct LegendreEval {
  double p = 0.0;
  double dp = 0.0;
  double q = 0.0;
};

// Runs the degree recurrence for fixed m up to degree n; returns (P_n, P_{n-1}) of the given seed.
std::pair<double, double> degree_recurrence(int n, int m, double x, double seed) {
  if (n < m) return {0.0, 0.0};
  double prev = 0.0;
  double cur = seed;
  double a_prev = 1.0;
  for (int l = m + 1; l <= n; ++l) {
    const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
    const double next = a * x * cur - (l == m + 1 ? 0.0 : a / a_prev * prev);
    prev = cur;
    cur = next;
    a_prev = a;
  }
  return {cur, prev};
}

// Normalized P_m^m(cos theta) divided by sin^m theta.
double sectoral_coefficient(int m) {
  double c = 1.0 / std::sqrt(4.0 * kPi);
  for (int k = 1; k <= m; ++k) c *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k));
  return c;
}

LegendreEval legendre(int n, int m, double theta) {
  const double x = std::cos(theta);
  const double s = std::sin(theta);
  LegendreEval out;
  if (m == 0) {
    out.p = degree_recurrence(n, 0, x, sectoral_coefficient(0)).first;
    const double p1 = n >= 1 ? degree_recurrence(n, 1, x, sectoral_coefficient(1) * s).first : 0.0;
    out.dp = std::sqrt(double(n) * (n + 1)) * p1;
    return out;
  }
  const double c = sectoral_coefficient(m);
  const double pow_m1 = std::pow(s, m - 1);
  out.p = degree_recurrence(n, m, x, c * pow_m1 * s).first;
  const auto [qn, qn1] = degree_recurrence(n, m, x, c * pow_m1);
  out.q = qn;
  const double lower = n > m ? std::sqrt((2.0 * n + 1.0) / (2.0 * n - 1.0) * double(n - m) * double(n + m)) * qn1 : 0.0;
  out.dp = n * x * qn - lower;
  return out;
}

void check_indices(int n, int m) {
  if (n < 1) throw DomainError("vector spherical harmonics need n >= 1");
  if (std::abs(m) > n) throw DomainError("|m| must not exceed n");
}

double sign_power(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

cplx i_power(int p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return 1.0;
    case 1: return kI;
    case 2: return -1.0;
    default: return -kI;
  }
}

// Exterior coefficients a_0 (TE) and b_0 (TM) for orders 1..count.
struct ModalSet {
  std::vector<cplx> te;
  std::vector<cplx> tm;
};

ModalSet modal_set(const LayeredStructure& s, double omega, int count) {
  ModalSet out;
  for (int n = 1; n <= count; ++n) {
    out.te.push_back(exterior_coefficient(s, n, Polarization::TE, omega));
    out.tm.push_back(exterior_coefficient(s, n, Polarization::TM, omega));
  }
  return out;
}

double modal_term(const ModalSet& set, int n) {
  const auto k = static_cast<std::size_t>(n - 1);
  return std::sqrt(2.0 * n + 1.0) * (std::abs(set.te[k]) + std::abs(set.tm[k]));
}

// Relative geometric tail after order n, from the last two available modal terms.
double tail_after(const ModalSet& set, int n) {
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) sum += modal_term(set, k);
  if (sum == 0.0) return 0.0;
  const int available = static_cast<int>(set.te.size());
  const int hi = std::min(n + 1, available);
  if (hi < 2) return 0.0;
  const double last = modal_term(set, hi - 1);
  const double next = modal_term(set, hi);
  const double ratio = last > 0.0 ? next / last : 0.0;
  const double first = hi == n + 1 ? next : next * ratio;
  if (ratio >= 1.0) return first / sum * kMaxAutoOrder;
  return first / (1.0 - ratio) / sum;
}

// Modal set sized for an expansion to order n plus one look-ahead order when available.
ModalSet modal_set_for(const LayeredStructure& s, double omega, int n) {
  return modal_set(s, omega, std::min(n + 1, kDefaultBesselNMax));
}

void check_polarization(const Vec3& c, const Direction& k_hat) {
  const double norm = c.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("polarization vector must be nonzero and finite");
  if (std::abs(c.dot(k_hat.vector())) > 1e-12 * norm) {
    throw DomainError("polarization vector must be orthogonal to the incidence direction");
  }
}

int resolve_nmax(const LayeredStructure& s, double omega, int n_max) {
  if (n_max < 0 || n_max > kDefaultBesselNMax) throw DomainError("n_max must lie in 0..32");
  return n_max == 0 ? default_nmax(s, omega) : n_max;
}

CVec3 amplitude_from(const ModalSet& set, const WaveContext& ctx, const MultipoleCoefficients& inc,
                     const Direction& x_hat) {
  const double impedance = ctx.k0() / (ctx.omega * ctx.background.eps);
  CVec3 sum = CVec3::Zero();
  for (int n = 1; n <= inc.n_max(); ++n) {
    const cplx a0 = set.te[static_cast<std::size_t>(n - 1)];
    const cplx b0 = set.tm[static_cast<std::size_t>(n - 1)];
    const cplx pref = -std::sqrt(double(n) * (n + 1)) * i_power(-(n + 1));
    for (int m = -n; m <= n; ++m) {
      const VshEval h = vsh(n, m, x_hat);
      sum += pref * (inc.a(n, m) * a0 * h.V + impedance * inc.b(n, m) * b0 * h.U);
    }
  }
  return sum;
}

}  // namespace

Direction::Direction(const Vec3& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("direction must be a nonzero finite vector");
  v_ = v / norm;
}

Direction Direction::from_angles(double theta, double phi) {
  return Direction(Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)));
}

double Direction::theta() const { return std::atan2(std::hypot(v_.x(), v_.y()), v_.z()); }

double Direction::phi() const {
  if (std::hypot(v_.x(), v_.y()) == 0.0) return 0.0;
  return std::atan2(v_.y(), v_.x());
}

Vec3 Direction::theta_hat() const {
  const double t = theta();
  const double p = phi();
  return {std::cos(t) * std::cos(p), std::cos(t) * std::sin(p), -std::sin(t)};
}

Vec3 Direction::phi_hat() const {
  const double p = phi();
  return {-std::sin(p), std::cos(p), 0.0};
}

cplx spherical_harmonic(int n, int m, const Direction& x) {
  if (n < 0 || std::abs(m) > n) throw DomainError("spherical harmonic needs n >= 0 and |m| <= n");
  const int am = std::abs(m);
  const cplx y = legendre(n, am, x.theta()).p * std::exp(kI * double(am) * x.phi());
  return m >= 0 ? y : sign_power(am) * std::conj(y);
}

VshEval vsh(int n, int m, const Direction& x) {
  check_indices(n, m);
  const int am = std::abs(m);
  const LegendreEval le = legendre(n, am, x.theta());
  const cplx phase = std::exp(kI * double(am) * x.phi());
  const double norm = 1.0 / std::sqrt(double(n) * (n + 1));
  const cplx u_theta = norm * le.dp * phase;
  const cplx u_phi = am == 0 ? cplx{} : norm * kI * double(am) * le.q * phase;
  const Vec3 th = x.theta_hat();
  const Vec3 ph = x.phi_hat();

  VshEval out;
  out.n = n;
  out.m = m;
  out.Y = le.p * phase;
  out.U = u_theta * th.cast<cplx>() + u_phi * ph.cast<cplx>();
  out.V = x.vector().cast<cplx>().cross(out.U);
  if (m < 0) {
    const double sgn = sign_power(am);
    out.Y = sgn * std::conj(out.Y);
    out.U = sgn * out.U.conjugate();
    out.V = sgn * out.V.conjugate();
  }
  return out;
}

double WaveContext::k0() const { return omega * std::sqrt(background.mu * background.eps); }

MultipoleCoefficients::MultipoleCoefficients(int n_max) : n_max_(n_max) {
  if (n_max < 1) throw DomainError("n_max must be >= 1");
  const auto size = static_cast<std::size_t>(n_max * (n_max + 2));
  a_.assign(size, cplx{});
  b_.assign(size, cplx{});
}

std::size_t MultipoleCoefficients::index(int p, int q) const {
  if (p < 1 || p > n_max_ || std::abs(q) > p) throw DomainError("multipole index out of range");
  return static_cast<std::size_t>(p * p - 1 + q + p);
}

CVec3 regular_multipole_te(int n, int m, double k, const Vec3& x) {
  const double r = x.norm();
  if (!(r > 0.0)) throw DomainError("multipole evaluation point must be away from the origin");
  const BesselEval b = sph_bessel(n, k * r);
  return -std::sqrt(double(n) * (n + 1)) * b.j * vsh(n, m, Direction(x)).V;
}

CVec3 regular_multipole_tm(int n, int m, double k, double omega, double eps, const Vec3& x) {
  const double r = x.norm();
  if (!(r > 0.0)) throw DomainError("multipole evaluation point must be away from the origin");
  const Direction d(x);
  const BesselEval b = sph_bessel(n, k * r);
  const VshEval h = vsh(n, m, d);
  const double nn = double(n) * (n + 1);
  const CVec3 curl = (nn * b.j / r) * h.Y * d.vector().cast<cplx>() + (std::sqrt(nn) * b.riccati_j.real() / r) * h.U;
  return kI / (omega * eps) * curl;
}

MultipoleCoefficients plane_wave_coefficients(const Vec3& c, const Direction& k_hat, int n_max, const WaveContext& ctx) {
  check_polarization(c, k_hat);
  MultipoleCoefficients out(n_max);
  const CVec3 cc = c.cast<cplx>();
  const double tm_scale = ctx.omega * ctx.background.eps / ctx.k0();
  for (int p = 1; p <= n_max; ++p) {
    const cplx pref = 4.0 * kPi * i_power(p) / std::sqrt(double(p) * (p + 1));
    for (int q = -p; q <= p; ++q) {
      const VshEval h = vsh(p, q, k_hat);
      out.a(p, q) = -pref * h.V.dot(cc);
      out.b(p, q) = -tm_scale * pref * h.U.dot(cc);
    }
  }
  return out;
}

CVec3 scattered_amplitude(const LayeredStructure& s, const WaveContext& ctx, const MultipoleCoefficients& incident,
                          const Direction& x_hat) {
  return amplitude_from(modal_set(s, ctx.omega, incident.n_max()), ctx, incident, x_hat);
}

int default_nmax(const LayeredStructure& s, double omega) {
  const ModalSet set = modal_set(s, omega, kMaxAutoOrder);
  for (int n = 1; n < kMaxAutoOrder; ++n) {
    if (tail_after(set, n) <= kTailTolerance) return n;
  }
  return kMaxAutoOrder;
}

std::vector<FarFieldSample> scattering_amplitude_grid(const LayeredStructure& s, double omega, const Vec3& c,
                                                      const Direction& k_hat, const std::vector<double>& thetas,
                                                      const std::vector<double>& phis, int n_max) {
  const int order = resolve_nmax(s, omega, n_max);
  const WaveContext ctx{omega, s.background()};
  const MultipoleCoefficients inc = plane_wave_coefficients(c, k_hat, order, ctx);
  const ModalSet set = modal_set_for(s, omega, order);
  const double tail = tail_after(set, order);
  std::vector<FarFieldSample> out;
  out.reserve(thetas.size() * phis.size());
  for (double th : thetas) {
    for (double ph : phis) {
      const Direction x_hat = Direction::from_angles(th, ph);
      out.push_back({c, k_hat, x_hat, amplitude_from(set, ctx, inc, x_hat), order, tail, th, ph});
    }
  }
  return out;
}

FarFieldSample scattering_amplitude(const LayeredStructure& s, double omega, const Vec3& c, const Direction& k_hat,
                                    const Direction& x_hat, int n_max) {
  const int order = resolve_nmax(s, omega, n_max);
  const WaveContext ctx{omega, s.background()};
  const ModalSet set = modal_set_for(s, omega, order);
  const CVec3 a = amplitude_from(set, ctx, plane_wave_coefficients(c, k_hat, order, ctx), x_hat);
  return {c, k_hat, x_hat, a, order, tail_after(set, order), x_hat.theta(), x_hat.phi()};
}

CrossSection scattering_cross_section(const LayeredStructure& s, double omega, const Vec3& c, const Direction& k_hat,
                                      int n_max) {
  const int order = resolve_nmax(s, omega, n_max);
  const WaveContext ctx{omega, s.background()};
  const double k0 = ctx.k0();
  const ModalSet set = modal_set(s, omega, order);
  const MultipoleCoefficients inc = plane_wave_coefficients(c, k_hat, order, ctx);

  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(order + 2, x, w);
  const int n_phi = 4 * order + 4;
  double integral = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double theta = std::acos(x[i]);
    for (int j = 0; j < n_phi; ++j) {
      const Direction d = Direction::from_angles(theta, 2.0 * kPi * j / n_phi);
      integral += w[i] * (2.0 * kPi / n_phi) * amplitude_from(set, ctx, inc, d).squaredNorm();
    }
  }

  double modal = 0.0;
  for (int n = 1; n <= order; ++n) {
    const auto k = static_cast<std::size_t>(n - 1);
    modal += (2.0 * n + 1.0) * (std::norm(set.te[k]) + std::norm(set.tm[k]));
  }
  modal *= 2.0 * kPi * c.squaredNorm() / (k0 * k0);
  return {integral / (k0 * k0), modal, order};
}

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  if (count < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
  nodes.assign(static_cast<std::size_t>(count), 0.0);
  weights.assign(static_cast<std::size_t>(count), 0.0);
  for (int i = 0; i < (count + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int l = 2; l <= count; ++l) {
        const double p2 = ((2.0 * l - 1.0) * z * p1 - (l - 1.0) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(count - 1 - i);
    nodes[lo] = -z;
    nodes[hi] = z;
    weights[lo] = weights[hi] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

}  // namespace svanish
