#include "svanish/multilayer.hpp"

#include <Eigen/LU>
#include <cmath>
#include <sstream>

#include "svanish/error.hpp"
#include "svanish/specfun.hpp"
#include "transfer_impl.hpp"

namespace svanish {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_order(int n) {
  if (n < 1) throw DomainError("multipole order must be >= 1");
}

void check_omega(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("omega must be positive and finite");
}

detail::BesselQuad<cplx> numeric_quad(int n, double x) {
  const BesselEval b = sph_bessel(n, x);
  return {cplx(b.j), b.h, b.riccati_j, b.riccati_h};
}

}  // namespace

const char* to_string(Polarization pol) noexcept { return pol == Polarization::TE ? "TE" : "TM"; }

const char* to_string(TransferOrdering ordering) noexcept {
  return ordering == TransferOrdering::outward ? "outward" : "reversed";
}

LayeredStructure::LayeredStructure(std::vector<double> radii, std::vector<double> mu, std::vector<double> eps,
                                   Background background)
    : radii_(std::move(radii)), mu_(std::move(mu)), eps_(std::move(eps)), background_(background) {
  if (mu_.size() != eps_.size()) throw DomainError("mu and eps must have the same length");
  if (radii_.size() != mu_.size() + 1) throw DomainError("radii must have exactly one more entry than mu/eps");
  for (std::size_t k = 0; k < radii_.size(); ++k) {
    if (!(radii_[k] > 0.0) || !std::isfinite(radii_[k])) throw DomainError("radii must be positive and finite");
    if (k > 0 && !(radii_[k] < radii_[k - 1])) throw DomainError("radii must be strictly decreasing");
  }
  for (std::size_t k = 0; k < mu_.size(); ++k) {
    if (!(mu_[k] > 0.0) || !std::isfinite(mu_[k])) throw DomainError("mu must be positive and finite");
    if (!(eps_[k] > 0.0) || !std::isfinite(eps_[k])) throw DomainError("eps must be positive and finite");
  }
  if (!(background_.mu > 0.0) || !(background_.eps > 0.0)) throw DomainError("background parameters must be positive");
  if (radii_.front() != 2.0 || radii_.back() != 1.0) {
    std::ostringstream os;
    os << "radii span [" << radii_.back() << ", " << radii_.front() << "] instead of [1, 2]";
    notes_.push_back(os.str());
  }
}

LayeredStructure LayeredStructure::vacuum(std::vector<double> radii, Background background) {
  const std::size_t L = radii.empty() ? 0 : radii.size() - 1;
  return LayeredStructure(std::move(radii), std::vector<double>(L, background.mu), std::vector<double>(L, background.eps),
                          background);
}

double LayeredStructure::mu_of(int medium) const {
  if (medium == 0) return background_.mu;
  if (medium < 0 || medium > layers()) throw DomainError("medium index out of range");
  return mu_[static_cast<std::size_t>(medium - 1)];
}

double LayeredStructure::eps_of(int medium) const {
  if (medium == 0) return background_.eps;
  if (medium < 0 || medium > layers()) throw DomainError("medium index out of range");
  return eps_[static_cast<std::size_t>(medium - 1)];
}

double LayeredStructure::material(int medium, Polarization pol) const {
  return pol == Polarization::TE ? mu_of(medium) : eps_of(medium);
}

double LayeredStructure::z(int medium) const { return std::sqrt(mu_of(medium) * eps_of(medium)); }

int LayeredStructure::medium_at(double r) const {
  if (r >= radii_.front()) return 0;
  for (int j = 1; j <= layers(); ++j) {
    if (r >= radii_[static_cast<std::size_t>(j)]) return j;
  }
  return -1;
}

LayeredStructure LayeredStructure::scaled(double rho) const {
  if (!(rho > 0.0)) throw DomainError("scale factor must be positive");
  std::vector<double> r = radii_;
  for (auto& v : r) v *= rho;
  return LayeredStructure(std::move(r), mu_, eps_, background_).with_ordering(ordering_);
}

LayeredStructure LayeredStructure::with_parameters(std::vector<double> mu, std::vector<double> eps) const {
  return LayeredStructure(radii_, std::move(mu), std::move(eps), background_).with_ordering(ordering_);
}

LayeredStructure LayeredStructure::with_ordering(TransferOrdering ordering) const {
  LayeredStructure out = *this;
  out.ordering_ = ordering;
  return out;
}

std::vector<double> default_radii(int layers) {
  if (layers < 1) throw DomainError("default_radii needs at least one layer");
  std::vector<double> r(static_cast<std::size_t>(layers) + 1);
  for (int j = 0; j <= layers; ++j) r[static_cast<std::size_t>(j)] = 2.0 - static_cast<double>(j) / layers;
  r.back() = 1.0;
  return r;
}

Eigen::Matrix2cd interface_matrix(int n, Polarization pol, double k, double material, double r) {
  check_order(n);
  if (!(k > 0.0) || !(material > 0.0) || !(r > 0.0)) throw DomainError("interface_matrix arguments must be positive");
  const auto m = detail::interface(numeric_quad(n, k * r), pol, material);
  Eigen::Matrix2cd out;
  out << m.a00, m.a01, m.a10, m.a11;
  return out;
}

TransferRow transfer_product(const LayeredStructure& s, int n, Polarization pol, double omega) {
  check_order(n);
  check_omega(omega);
  const auto row = detail::compose_transfer<cplx>(
      s, pol, [&](int medium, double r) { return numeric_quad(n, s.wavenumber(medium, omega) * r); });
  return {row[0], row[1]};
}

cplx exterior_coefficient(const LayeredStructure& s, int n, Polarization pol, double omega) {
  const TransferRow p = transfer_product(s, n, pol, omega);
  const double mag = std::abs(p.p2);
  if (!(mag > 0.0) || !std::isfinite(mag) || !std::isfinite(std::abs(p.p1))) {
    throw SolverError("transfer product p2 vanished or is not finite");
  }
  return -p.p1 / p.p2;
}

ModalCoefficient modal_coefficient(const LayeredStructure& s, int n, Polarization pol, double omega) {
  const double k0 = omega * s.z(0);
  const cplx a0 = exterior_coefficient(s, n, pol, omega);
  return {n, pol, -kI * double(n * (n + 1)) / k0 * a0};
}

cplx scaled_coefficient(const LayeredStructure& s, int n, Polarization pol, double omega) {
  const cplx a0 = exterior_coefficient(s, n, pol, omega);
  return -kI * double(n * (n + 1)) / s.z(0) * a0;
}

LayerFieldCoefficients layer_fields(const LayeredStructure& s, int n, Polarization pol, double omega) {
  if (s.ordering() != TransferOrdering::outward) throw DomainError("layer_fields needs the outward transfer ordering");
  const int L = s.layers();
  const auto& radii = s.radii();
  LayerFieldCoefficients out;
  out.polarization = pol;
  out.regular.assign(static_cast<std::size_t>(L) + 1, cplx{});
  out.outgoing.assign(static_cast<std::size_t>(L) + 1, cplx{});
  out.regular[0] = 1.0;
  out.outgoing[0] = exterior_coefficient(s, n, pol, omega);

  auto matrix = [&](int medium, double r) {
    return interface_matrix(n, pol, s.wavenumber(medium, omega), s.material(medium, pol), r);
  };

  double worst = 0.0;
  for (int j = 1; j <= L; ++j) {
    const double r = radii[static_cast<std::size_t>(j - 1)];
    const Eigen::Matrix2cd outer = matrix(j - 1, r);
    const Eigen::Matrix2cd inner = matrix(j, r);
    const Eigen::Vector2cd prev(out.regular[static_cast<std::size_t>(j - 1)], out.outgoing[static_cast<std::size_t>(j - 1)]);
    const Eigen::Vector2cd rhs = outer * prev;
    if (!(std::abs(inner.determinant()) > 0.0)) throw SingularError("singular interface matrix", 0.0);
    const Eigen::Vector2cd next = inner.partialPivLu().solve(rhs);
    out.regular[static_cast<std::size_t>(j)] = next(0);
    out.outgoing[static_cast<std::size_t>(j)] = next(1);
    const double scale = std::max(rhs.norm(), 1e-300);
    worst = std::max(worst, (inner * next - rhs).norm() / scale);
  }

  const BesselEval b = sph_bessel(n, s.wavenumber(L, omega) * radii.back());
  const cplx f = pol == Polarization::TE ? cplx(b.j) : b.riccati_j;
  const cplx g = pol == Polarization::TE ? b.h : b.riccati_h;
  const cplx ta = out.regular.back();
  const cplx a = out.outgoing.back();
  const double scale = std::max(std::abs(ta * f) + std::abs(a * g), 1e-300);
  worst = std::max(worst, std::abs(ta * f + a * g) / scale);
  out.interface_residual = worst;
  return out;
}

}  // namespace svanish
