#pragma once

#include <optional>
#include <vector>

#include "svanish/lseries.hpp"
#include "svanish/multilayer.hpp"

namespace svanish {

/// Transfer row composed over Laurent series in t. After the built-in shift,
/// p1 starts at t^n and p2 at t^(-n-1).
struct SeriesTransferRow {
  LaurentSeries p1;
  LaurentSeries p2;
};

/// Composes the series transfer row with enough terms that p1/p2 is valid
/// through t^(2N+1) plus a two-order guard. Requires 1 <= n <= N.
SeriesTransferRow series_transfer_product(const LayeredStructure& s, int n, Polarization pol, int order);

/// Low-frequency series of t W_n(t) = -(i n(n+1)/sqrt(eps_0 mu_0)) a_0(t), lead 2n+1.
LaurentSeries scaled_coefficient_series(const LayeredStructure& s, int n, Polarization pol, int order);

struct CoefficientEntry {
  int n = 1;
  int l = 0;
  Polarization polarization = Polarization::TE;
  cplx value{};
};

/// W_{n,l} for 1 <= n <= N, 0 <= l <= N - n and both polarizations, ordered
/// TE before TM, then n ascending, then l ascending.
class CoefficientTable {
 public:
  CoefficientTable(int order, std::vector<CoefficientEntry> entries, LayeredStructure structure);

  int order() const noexcept { return order_; }
  const std::vector<CoefficientEntry>& entries() const noexcept { return entries_; }
  const LayeredStructure& structure() const noexcept { return structure_; }

  /// Throws DomainError for an index outside the table.
  cplx at(int n, int l, Polarization pol) const;
  std::optional<cplx> find(int n, int l, Polarization pol) const;

 private:
  int order_;
  std::vector<CoefficientEntry> entries_;
  LayeredStructure structure_;
};

/// Number of (n, l) pairs per polarization: N(N+1)/2.
int coefficients_per_polarization(int order);

CoefficientTable lowfreq_coefficients(const LayeredStructure& s, int order);

}  // namespace svanish
