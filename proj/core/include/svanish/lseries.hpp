#pragma once

#include <complex>
#include <span>
#include <vector>

namespace svanish {

using cplx = std::complex<double>;

/// Truncated Laurent series  sum_k c_k t^(lead + k)  in the frequency variable t.
///
/// Every series carries `valid_to`, the largest exponent whose coefficient is
/// exact up to rounding. Coefficients past `valid_to` are never stored, and
/// arithmetic propagates validity so that truncation error can never leak into a
/// reported coefficient. A series with no stored coefficients is the zero series
/// known to order `valid_to` (then `lead == valid_to + 1`).
class LaurentSeries {
 public:
  /// Validity used for series that are exact (finite polynomials, constants).
  static constexpr int kExact = 1 << 28;
  /// Relative depth of the quotient of two exact series.
  static constexpr int kExactQuotientDepth = 63;

  /// The exact zero series.
  LaurentSeries();

  /// Coefficients beyond `valid_to` are discarded.
  LaurentSeries(int lead, std::vector<cplx> coeffs, int valid_to = kExact);

  static LaurentSeries zero(int valid_to = kExact);
  static LaurentSeries constant(cplx value, int valid_to = kExact);
  static LaurentSeries monomial(cplx value, int power, int valid_to = kExact);

  int lead() const noexcept { return lead_; }
  int valid_to() const noexcept { return valid_to_; }
  /// valid_to - lead; the number of trustworthy orders past the leading one.
  int depth() const noexcept { return valid_to_ - lead_; }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  bool empty() const noexcept { return coeffs_.empty(); }
  bool is_exact() const noexcept { return valid_to_ >= kExact / 2; }

  /// Coefficient of t^power. Zero below `lead` or past the stored range;
  /// DomainError past `valid_to`.
  cplx coefficient(int power) const;

  /// Strips leading coefficients with |c| <= rel_tol * max|c| and adjusts `lead`.
  LaurentSeries normalized(double rel_tol = 0.0) const;
  /// Multiplies by t^k.
  LaurentSeries shifted(int k) const;
  /// Lowers validity to `valid_to` (never raises it).
  LaurentSeries truncated(int valid_to) const;
  /// f(t) -> f(scale * t): the coefficient of t^p picks up scale^p.
  LaurentSeries scaled_argument(double scale) const;
  /// Maps every coefficient through `fn(power, c)`.
  template <class Fn>
  LaurentSeries transformed(Fn&& fn) const {
    std::vector<cplx> out(coeffs_.size());
    for (std::size_t k = 0; k < coeffs_.size(); ++k) out[k] = fn(lead_ + static_cast<int>(k), coeffs_[k]);
    return LaurentSeries(lead_, std::move(out), valid_to_);
  }

  LaurentSeries operator-() const;
  LaurentSeries& operator*=(cplx s);
  LaurentSeries& operator/=(cplx s);

 private:
  int lead_;
  std::vector<cplx> coeffs_;
  int valid_to_;
};

LaurentSeries series_add(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries series_sub(const LaurentSeries& a, const LaurentSeries& b);
/// Cauchy product. valid_to = min(a.valid_to + b.lead, b.valid_to + a.lead).
LaurentSeries series_mul(const LaurentSeries& a, const LaurentSeries& b);
/// Formal long division. Throws SingularError when the leading denominator
/// coefficient is below `rel_tol` times the largest stored denominator coefficient.
LaurentSeries series_div(const LaurentSeries& num, const LaurentSeries& den, double rel_tol = 1e-13);
/// Sum of the stored coefficients at t > 0.
cplx series_eval(const LaurentSeries& a, double t);

inline LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return series_add(a, b); }
inline LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return series_sub(a, b); }
inline LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) { return series_mul(a, b); }
inline LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b) { return series_div(a, b); }

inline LaurentSeries operator*(LaurentSeries a, cplx s) { return a *= s; }
inline LaurentSeries operator*(cplx s, LaurentSeries a) { return a *= s; }
inline LaurentSeries operator/(LaurentSeries a, cplx s) { return a /= s; }

}  // namespace svanish
