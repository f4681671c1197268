#include "svanish/lseries.hpp"

#include <algorithm>
#include <cmath>

#include "svanish/error.hpp"

namespace svanish {

namespace {

// Drops exact leading zeros; an all-zero series becomes the zero series of the same validity.
LaurentSeries strip_exact_zeros(int lead, std::vector<cplx> c, int valid_to) {
  std::size_t k = 0;
  while (k < c.size() && c[k] == cplx{}) ++k;
  if (k == c.size()) return LaurentSeries::zero(valid_to);
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(k));
  return LaurentSeries(lead + static_cast<int>(k), std::move(c), valid_to);
}

}  // namespace

LaurentSeries::LaurentSeries() : lead_(kExact + 1), valid_to_(kExact) {}

LaurentSeries::LaurentSeries(int lead, std::vector<cplx> coeffs, int valid_to)
    : lead_(lead), coeffs_(std::move(coeffs)), valid_to_(valid_to) {
  if (valid_to_ < lead_ - 1) throw DomainError("LaurentSeries: valid_to below lead - 1");
  const auto keep = static_cast<std::size_t>(valid_to_ - lead_ + 1);
  if (coeffs_.size() > keep) coeffs_.resize(keep);
  if (coeffs_.empty()) lead_ = valid_to_ + 1;
}

LaurentSeries LaurentSeries::zero(int valid_to) { return LaurentSeries(valid_to + 1, {}, valid_to); }

LaurentSeries LaurentSeries::constant(cplx value, int valid_to) { return monomial(value, 0, valid_to); }

LaurentSeries LaurentSeries::monomial(cplx value, int power, int valid_to) {
  if (valid_to < power) return zero(valid_to);
  return LaurentSeries(power, {value}, valid_to);
}

cplx LaurentSeries::coefficient(int power) const {
  if (power > valid_to_) throw DomainError("LaurentSeries: coefficient requested past valid_to");
  if (power < lead_) return {};
  const auto k = static_cast<std::size_t>(power - lead_);
  return k < coeffs_.size() ? coeffs_[k] : cplx{};
}

LaurentSeries LaurentSeries::normalized(double rel_tol) const {
  double scale = 0.0;
  for (const auto& c : coeffs_) scale = std::max(scale, std::abs(c));
  const double cut = rel_tol * scale;
  std::size_t k = 0;
  while (k < coeffs_.size() && std::abs(coeffs_[k]) <= cut) ++k;
  if (k == coeffs_.size()) return zero(valid_to_);
  return LaurentSeries(lead_ + static_cast<int>(k),
                       std::vector<cplx>(coeffs_.begin() + static_cast<std::ptrdiff_t>(k), coeffs_.end()),
                       valid_to_);
}

LaurentSeries LaurentSeries::shifted(int k) const { return LaurentSeries(lead_ + k, coeffs_, valid_to_ + k); }

LaurentSeries LaurentSeries::truncated(int valid_to) const {
  const int v = std::min(valid_to, valid_to_);
  if (v < lead_) return zero(v);
  return LaurentSeries(lead_, coeffs_, v);
}

LaurentSeries LaurentSeries::scaled_argument(double scale) const {
  return transformed([scale](int p, cplx c) { return c * std::pow(scale, p); });
}

LaurentSeries LaurentSeries::operator-() const {
  LaurentSeries r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

LaurentSeries& LaurentSeries::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

LaurentSeries& LaurentSeries::operator/=(cplx s) {
  for (auto& c : coeffs_) c /= s;
  return *this;
}

LaurentSeries series_add(const LaurentSeries& a, const LaurentSeries& b) {
  const int valid = std::min(a.valid_to(), b.valid_to());
  const int lead = std::min(a.lead(), b.lead());
  if (lead > valid) return LaurentSeries::zero(valid);
  const auto ca = a.coeffs();
  const auto cb = b.coeffs();
  const int hi = std::min(valid, std::max(a.lead() + static_cast<int>(ca.size()), b.lead() + static_cast<int>(cb.size())) - 1);
  if (hi < lead) return LaurentSeries::zero(valid);
  std::vector<cplx> out(static_cast<std::size_t>(hi - lead + 1));
  for (std::size_t k = 0; k < ca.size(); ++k) {
    const int p = a.lead() + static_cast<int>(k);
    if (p > hi) break;
    out[static_cast<std::size_t>(p - lead)] += ca[k];
  }
  for (std::size_t k = 0; k < cb.size(); ++k) {
    const int p = b.lead() + static_cast<int>(k);
    if (p > hi) break;
    out[static_cast<std::size_t>(p - lead)] += cb[k];
  }
  return strip_exact_zeros(lead, std::move(out), valid);
}

LaurentSeries series_sub(const LaurentSeries& a, const LaurentSeries& b) { return series_add(a, -b); }

LaurentSeries series_mul(const LaurentSeries& a, const LaurentSeries& b) {
  const int valid = std::min(a.valid_to() + b.lead(), b.valid_to() + a.lead());
  if (a.empty() || b.empty()) return LaurentSeries::zero(valid);
  const int lead = a.lead() + b.lead();
  const auto ca = a.coeffs();
  const auto cb = b.coeffs();
  const std::size_t full = ca.size() + cb.size() - 1;
  const std::size_t keep = valid < lead ? 0 : std::min<std::size_t>(full, static_cast<std::size_t>(valid - lead + 1));
  if (keep == 0) return LaurentSeries::zero(valid);
  std::vector<cplx> out(keep);
  for (std::size_t i = 0; i < ca.size() && i < keep; ++i) {
    for (std::size_t j = 0; j < cb.size() && i + j < keep; ++j) out[i + j] += ca[i] * cb[j];
  }
  return LaurentSeries(lead, std::move(out), valid);
}

LaurentSeries series_div(const LaurentSeries& num, const LaurentSeries& den, double rel_tol) {
  if (den.empty()) throw SingularError("series_div: zero denominator", 0.0);
  const auto cd = den.coeffs();
  double scale = 0.0;
  for (const auto& c : cd) scale = std::max(scale, std::abs(c));
  const double d0 = std::abs(cd[0]);
  if (!(d0 > rel_tol * scale)) throw SingularError("series_div: leading denominator coefficient below tolerance", d0);

  int depth = std::min(num.depth(), den.depth());
  if (num.is_exact() && den.is_exact()) depth = LaurentSeries::kExactQuotientDepth;
  const int lead = num.lead() - den.lead();
  const int valid = lead + depth;
  if (num.empty() || depth < 0) return LaurentSeries::zero(valid);

  const auto cn = num.coeffs();
  std::vector<cplx> q(static_cast<std::size_t>(depth + 1));
  for (std::size_t k = 0; k < q.size(); ++k) {
    cplx acc = k < cn.size() ? cn[k] : cplx{};
    for (std::size_t j = 1; j <= k && j < cd.size(); ++j) acc -= cd[j] * q[k - j];
    q[k] = acc / cd[0];
  }
  if (num.is_exact() && den.is_exact()) {
    // Finite quotients end in zeros; trim them so exact results stay compact.
    while (!q.empty() && q.back() == cplx{}) q.pop_back();
  }
  return LaurentSeries(lead, std::move(q), valid);
}

cplx series_eval(const LaurentSeries& a, double t) {
  if (!(t > 0.0)) throw DomainError("series_eval: t must be positive");
  const auto c = a.coeffs();
  cplx acc{};
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + c[k];
  return acc * std::pow(t, a.lead());
}

}  // namespace svanish
