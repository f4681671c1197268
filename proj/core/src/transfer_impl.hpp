#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <type_traits>

#include "svanish/multilayer.hpp"

namespace svanish::detail {

/// j, h, J, H of one medium at one radius, as numbers or as series in t.
template <class T>
struct BesselQuad {
  T j, h, J, H;
};

template <class T>
using Row = std::array<T, 2>;

template <class T>
struct Mat2 {
  T a00, a01, a10, a11;
};

template <class T>
Mat2<T> interface(const BesselQuad<T>& b, Polarization pol, double material) {
  const cplx inv = 1.0 / material;
  if (pol == Polarization::TE) return {b.j, b.h, b.J * inv, b.H * inv};
  return {b.J * inv, b.H * inv, b.j, b.h};
}

template <class T>
Row<T> row_times(const Row<T>& r, const Mat2<T>& m) {
  return {r[0] * m.a00 + r[1] * m.a10, r[0] * m.a01 + r[1] * m.a11};
}

/// adj(inner) * outer. Built before touching the row so that matched media give exact zeros off the
/// diagonal; applying adj and outer to the row one after the other leaves rounding of size
/// eps |row[1]| |j j'| that swamps the tiny regular component at high order.
template <class T>
Mat2<T> adjugate_times(const Mat2<T>& in, const Mat2<T>& out) {
  return {in.a11 * out.a00 - in.a01 * out.a10, in.a11 * out.a01 - in.a01 * out.a11,
          in.a00 * out.a10 - in.a10 * out.a00, in.a00 * out.a11 - in.a10 * out.a01};
}

inline void renormalize(Row<cplx>& r) {
  const double big = std::max(std::abs(r[0]), std::abs(r[1]));
  if (big > 1e100 || (big < 1e-100 && big > 0.0)) {
    r[0] /= big;
    r[1] /= big;
  }
}

/// PEC row at r_{L+1} composed through every interface in the structure's ordering.
/// `eval(medium, r)` returns the Bessel quadruple of `medium` at radius r.
template <class T, class Eval>
Row<T> compose_transfer(const LayeredStructure& s, Polarization pol, Eval&& eval) {
  const int L = s.layers();
  const auto& radii = s.radii();
  const BesselQuad<T> core = eval(L, radii[static_cast<std::size_t>(L)]);
  Row<T> row = pol == Polarization::TE ? Row<T>{core.j, core.h} : Row<T>{core.J, core.H};
  const bool outward = s.ordering() == TransferOrdering::outward;
  for (int k = 0; k < L; ++k) {
    const int j = outward ? L - k : k + 1;
    const double r = radii[static_cast<std::size_t>(j - 1)];
    const Mat2<T> inner = interface(eval(j, r), pol, s.material(j, pol));
    const Mat2<T> outer = interface(eval(j - 1, r), pol, s.material(j - 1, pol));
    row = row_times(row, adjugate_times(inner, outer));
    if constexpr (std::is_same_v<T, cplx>) renormalize(row);
  }
  return row;
}

}  // namespace svanish::detail
