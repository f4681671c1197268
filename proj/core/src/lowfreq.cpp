#include "svanish/lowfreq.hpp"

#include <cmath>
#include <string>

#include "svanish/error.hpp"
#include "svanish/specfun.hpp"
#include "transfer_impl.hpp"

namespace svanish {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr int kGuardOrders = 2;

void check_indices(int n, int order) {
  if (order < 1) throw DomainError("order N must be >= 1");
  if (n < 1 || n > order) throw DomainError("multipole order must satisfy 1 <= n <= N");
}

// Relative depth the ratio p1/p2 must carry for W_{n,N-n} plus the guard.
int required_depth(int n, int order) { return 2 * (order - n) + kGuardOrders; }

// Drops stored coefficients below the expected lead after checking they are rounding residue.
LaurentSeries align_lead(const LaurentSeries& s, int lead, const char* name) {
  if (s.empty() || s.lead() >= lead) return s;
  double scale = 0.0;
  for (const auto& c : s.coeffs()) scale = std::max(scale, std::abs(c));
  for (int p = s.lead(); p < lead; ++p) {
    if (std::abs(s.coefficient(p)) > 1e-10 * scale) {
      throw InternalError(std::string(name) + " has a nonzero coefficient below its structural lead");
    }
  }
  std::vector<cplx> tail;
  for (int p = lead; p <= s.valid_to() && p < s.lead() + static_cast<int>(s.coeffs().size()); ++p) {
    tail.push_back(s.coefficient(p));
  }
  return LaurentSeries(lead, std::move(tail), s.valid_to());
}

}  // namespace

SeriesTransferRow series_transfer_product(const LayeredStructure& s, int n, Polarization pol, int order) {
  check_indices(n, order);
  // Every product of a j-type and an h-type factor keeps the relative depth 2K - 1 of its factors,
  // so K = D/2 + 1 terms per factor give depth D + 1 >= D.
  const int depth = required_depth(n, order);
  const int terms = depth / 2 + 1;

  const LaurentSeries j = bessel_series(n, BesselKind::first, terms);
  const LaurentSeries y = bessel_series(n, BesselKind::second, terms);
  const LaurentSeries rj = riccati_series(n, BesselKind::first, terms);
  const LaurentSeries ry = riccati_series(n, BesselKind::second, terms);
  const LaurentSeries h = j + y * kI;
  const LaurentSeries rh = rj + ry * kI;

  auto eval = [&](int medium, double r) {
    const double scale = s.z(medium) * r;
    return detail::BesselQuad<LaurentSeries>{j.scaled_argument(scale), h.scaled_argument(scale),
                                             rj.scaled_argument(scale), rh.scaled_argument(scale)};
  };
  const auto row = detail::compose_transfer<LaurentSeries>(s, pol, eval);
  const int L = s.layers();
  SeriesTransferRow out{align_lead(row[0].shifted(L), n, "p1"), align_lead(row[1].shifted(L), -n - 1, "p2")};
  // Validity is measured from the structural leads; exact cancellation of leading terms does not shorten it.
  const int reach = std::min(out.p1.valid_to() - n, out.p2.valid_to() + n + 1);
  if (reach < depth) {
    throw InternalError("series transfer product shorter than required (depth " + std::to_string(reach) + " < " +
                        std::to_string(depth) + ")");
  }
  return out;
}

LaurentSeries scaled_coefficient_series(const LayeredStructure& s, int n, Polarization pol, int order) {
  const SeriesTransferRow row = series_transfer_product(s, n, pol, order);
  const LaurentSeries a0 = -(row.p1 / row.p2);
  LaurentSeries w = a0 * (-kI * double(n * (n + 1)) / s.z(0));
  if (w.valid_to() < 2 * order + 1) {
    throw InternalError("coefficient series valid only through t^" + std::to_string(w.valid_to()));
  }
  return w;
}

CoefficientTable::CoefficientTable(int order, std::vector<CoefficientEntry> entries, LayeredStructure structure)
    : order_(order), entries_(std::move(entries)), structure_(std::move(structure)) {}

cplx CoefficientTable::at(int n, int l, Polarization pol) const {
  if (auto v = find(n, l, pol)) return *v;
  throw DomainError("coefficient (" + std::to_string(n) + ", " + std::to_string(l) + ", " + to_string(pol) +
                    ") is not in the table");
}

std::optional<cplx> CoefficientTable::find(int n, int l, Polarization pol) const {
  for (const auto& e : entries_) {
    if (e.n == n && e.l == l && e.polarization == pol) return e.value;
  }
  return std::nullopt;
}

int coefficients_per_polarization(int order) { return order * (order + 1) / 2; }

CoefficientTable lowfreq_coefficients(const LayeredStructure& s, int order) {
  if (order < 1) throw DomainError("order N must be >= 1");
  std::vector<CoefficientEntry> entries;
  entries.reserve(static_cast<std::size_t>(2 * coefficients_per_polarization(order)));
  for (Polarization pol : {Polarization::TE, Polarization::TM}) {
    for (int n = 1; n <= order; ++n) {
      const LaurentSeries w = scaled_coefficient_series(s, n, pol, order);
      for (int l = 0; l <= order - n; ++l) {
        const cplx v = w.coefficient(2 * n + 1 + 2 * l);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
          throw SolverError("non-finite low-frequency coefficient");
        }
        entries.push_back({n, l, pol, v});
      }
    }
  }
  return CoefficientTable(order, std::move(entries), s);
}

}  // namespace svanish
