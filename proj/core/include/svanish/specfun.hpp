#pragma once

#include <complex>
#include <cstdint>

#include "svanish/lseries.hpp"

namespace svanish {

/// Default largest order accepted by `sph_bessel`.
inline constexpr int kDefaultBesselNMax = 32;

/// Spherical Bessel data at one real argument t > 0.
///
/// `riccati_j` = j_n + t j_n' and `riccati_h` = h_n + t h_n', where
/// h_n = j_n + i y_n is the spherical Hankel function of the first kind.
struct BesselEval {
  int order = 0;
  double argument = 0.0;
  double j = 0.0;
  double y = 0.0;
  double dj = 0.0;
  double dy = 0.0;
  cplx h{};
  cplx dh{};
  cplx riccati_j{};
  cplx riccati_h{};
};

/// Evaluates j_n, y_n, h_n, their first derivatives and Riccati combinations.
/// Throws DomainError for t <= 0 and CapacityError for n > n_max.
BesselEval sph_bessel(int n, double t, int n_max = kDefaultBesselNMax);

/// Values j_0..j_n at t (Miller recurrence below the turning point).
void sph_bessel_j_array(int n, double t, double* out);
/// Values y_0..y_n at t (upward recurrence).
void sph_bessel_y_array(int n, double t, double* out);

/// Unsigned 128-bit integer; 40!! needs 81 bits.
__extension__ typedef unsigned __int128 uint128;

/// n!! with (-1)!! = 0!! = 1. Exact for n <= 40; CapacityError beyond and
/// DomainError for n < -1.
uint128 double_factorial(int n);
/// n!! as a double (same domain).
double double_factorial_d(int n);

enum class BesselKind { first, second };

/// Small-argument series of j_n (lead n) or y_n (lead -n-1) with K terms in t^2.
/// `valid_to` records the largest exponent covered by the truncation.
LaurentSeries bessel_series(int n, BesselKind kind, int terms);

/// Series of the Riccati combination f + t f' for f = j_n or y_n.
LaurentSeries riccati_series(int n, BesselKind kind, int terms);

}  // namespace svanish
