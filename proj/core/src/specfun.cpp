#include "svanish/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "svanish/error.hpp"

namespace svanish {

namespace {

constexpr double kRescaleAbove = 1e250;

void check_argument(int n, double t) {
  if (n < 0) throw DomainError("spherical Bessel order must be non-negative");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("spherical Bessel argument must be positive and finite");
}

}  // namespace

void sph_bessel_j_array(int n, double t, double* out) {
  check_argument(n, t);
  const double s = std::sin(t);
  const double c = std::cos(t);
  const double j0 = s / t;
  if (n == 0) {
    out[0] = j0;
    return;
  }
  const double j1 = s / (t * t) - c / t;

  if (t >= n) {
    out[0] = j0;
    out[1] = j1;
    for (int k = 1; k < n; ++k) out[k + 1] = (2 * k + 1) / t * out[k] - out[k - 1];
    return;
  }

  // Miller: downward from a start order well above both n and t, then normalize.
  const int start = static_cast<int>(std::max<double>(n, t) + 32.0 + std::sqrt(40.0 * (n + 1)));
  double above = 0.0;
  double cur = 1e-300;
  for (int k = start; k > n; --k) {
    const double below = (2 * k + 1) / t * cur - above;
    above = cur;
    cur = below;
    if (std::abs(cur) > kRescaleAbove) {
      cur /= kRescaleAbove;
      above /= kRescaleAbove;
    }
  }
  out[n] = cur;
  double next = above;
  for (int k = n; k > 0; --k) {
    const double below = (2 * k + 1) / t * out[k] - next;
    next = out[k];
    out[k - 1] = below;
    if (std::abs(below) > kRescaleAbove) {
      for (int m = k - 1; m <= n; ++m) out[m] /= kRescaleAbove;
      next /= kRescaleAbove;
    }
  }
  // Near zeros of sin t the j_0 anchor loses digits; switch to j_1.
  const double scale = (t >= 1.0 && std::abs(j0) < std::abs(j1)) ? j1 / out[1] : j0 / out[0];
  for (int k = 0; k <= n; ++k) out[k] *= scale;
}

void sph_bessel_y_array(int n, double t, double* out) {
  check_argument(n, t);
  const double s = std::sin(t);
  const double c = std::cos(t);
  out[0] = -c / t;
  if (n == 0) return;
  out[1] = -c / (t * t) - s / t;
  for (int k = 1; k < n; ++k) {
    out[k + 1] = (2 * k + 1) / t * out[k] - out[k - 1];
    if (!std::isfinite(out[k + 1])) {
      throw CapacityError("y_" + std::to_string(k + 1) + " overflows at t = " + std::to_string(t));
    }
  }
}

BesselEval sph_bessel(int n, double t, int n_max) {
  check_argument(n, t);
  if (n > n_max) throw CapacityError("spherical Bessel order " + std::to_string(n) + " exceeds n_max");
  std::vector<double> jv(static_cast<std::size_t>(n) + 1);
  std::vector<double> yv(static_cast<std::size_t>(n) + 1);
  sph_bessel_j_array(n, t, jv.data());
  sph_bessel_y_array(n, t, yv.data());

  // f_n' = f_{n-1} - (n+1)/t f_n with j_{-1} = cos t / t and y_{-1} = sin t / t.
  const double jm1 = n > 0 ? jv[n - 1] : std::cos(t) / t;
  const double ym1 = n > 0 ? yv[n - 1] : std::sin(t) / t;

  BesselEval e;
  e.order = n;
  e.argument = t;
  e.j = jv[n];
  e.y = yv[n];
  e.dj = jm1 - (n + 1) / t * e.j;
  e.dy = ym1 - (n + 1) / t * e.y;
  e.h = {e.j, e.y};
  e.dh = {e.dj, e.dy};
  e.riccati_j = e.j + t * e.dj;
  e.riccati_h = e.h + t * e.dh;
  return e;
}

uint128 double_factorial(int n) {
  if (n < -1) throw DomainError("double factorial defined for n >= -1");
  if (n > 40) throw CapacityError("double factorial above 40!! is not representable exactly");
  uint128 r = 1;
  for (int k = n; k > 1; k -= 2) r *= static_cast<unsigned>(k);
  return r;
}

double double_factorial_d(int n) {
  if (n < -1) throw DomainError("double factorial defined for n >= -1");
  if (n <= 40) return static_cast<double>(double_factorial(n));
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

LaurentSeries bessel_series(int n, BesselKind kind, int terms) {
  if (n < 0) throw DomainError("bessel_series: negative order");
  if (terms < 1) throw DomainError("bessel_series: need at least one term");
  std::vector<cplx> c(static_cast<std::size_t>(2 * terms - 1));
  int lead = 0;
  if (kind == BesselKind::first) {
    lead = n;
    double v = 1.0 / double_factorial_d(2 * n + 1);
    for (int l = 0; l < terms; ++l) {
      if (l > 0) v *= -1.0 / (2.0 * l * (2 * n + 2 * l + 1));
      c[static_cast<std::size_t>(2 * l)] = v;
    }
  } else {
    lead = -n - 1;
    double v = -double_factorial_d(2 * n - 1);
    for (int l = 0; l < terms; ++l) {
      if (l > 0) v *= -1.0 / (2.0 * l * (2 * l - 2 * n - 1));
      c[static_cast<std::size_t>(2 * l)] = v;
    }
  }
  return LaurentSeries(lead, std::move(c), lead + 2 * terms - 1);
}

LaurentSeries riccati_series(int n, BesselKind kind, int terms) {
  // f + t f' maps c t^p to (p + 1) c t^p.
  return bessel_series(n, kind, terms).transformed([](int p, cplx c) { return c * double(p + 1); });
}

}  // namespace svanish
