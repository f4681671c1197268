#include "svanish/cloakmap.hpp"

#include <algorithm>
#include <cmath>

#include "svanish/error.hpp"

namespace svanish {

namespace {

constexpr double kInterfaceTolerance = 1e-12;
constexpr double kNudge = 1e-9;

void check_rho(double rho) {
  if (!(rho > 0.0 && rho < 0.5)) throw DomainError("rho must lie in (0, 1/2)");
}

void check_geometry(const LayeredStructure& s) {
  if (s.core_radius() != 1.0 || s.radii().front() > 2.0) {
    throw DomainError("cloak construction needs a structure with core radius 1 inside |x| <= 2");
  }
}

// Inverse of the radial profile.
double inverse_profile(double rho, double s) {
  if (s >= 2.0) return s;
  if (s >= 1.5) return 4.0 * (1.0 - rho) * s - 2.0 * (3.0 - 4.0 * rho);
  if (s >= 1.0) return 2.0 * rho * (s - 0.5);
  return rho * s;
}

}  // namespace

RadialValue blow_up_profile(double rho, double r) {
  check_rho(rho);
  if (!(r >= 0.0)) throw DomainError("radius must be non-negative");
  if (r >= 2.0) return {r, 1.0};
  if (r >= 2.0 * rho) {
    const double slope = 1.0 / (4.0 * (1.0 - rho));
    return {(3.0 - 4.0 * rho) / (2.0 * (1.0 - rho)) + r * slope, slope};
  }
  if (r >= rho) return {0.5 + r / (2.0 * rho), 1.0 / (2.0 * rho)};
  return {r / rho, 1.0 / rho};
}

Eigen::Vector3d blow_up_map(double rho, const Eigen::Vector3d& x) {
  const double r = x.norm();
  const RadialValue v = blow_up_profile(rho, r);
  if (r == 0.0) return x;
  if (r >= 2.0) return x;
  return x * (v.f / r);
}

Eigen::Vector3d inverse_map(double rho, const Eigen::Vector3d& y) {
  check_rho(rho);
  const double s = y.norm();
  if (s == 0.0 || s >= 2.0) return y;
  return y * (inverse_profile(rho, s) / s);
}

Eigen::Matrix3d blow_up_jacobian(double rho, const Eigen::Vector3d& x) {
  const double r = x.norm();
  const RadialValue v = blow_up_profile(rho, r);
  if (r == 0.0) return Eigen::Matrix3d::Identity() / rho;
  const Eigen::Vector3d u = x / r;
  const Eigen::Matrix3d radial = u * u.transpose();
  return v.df * radial + (v.f / r) * (Eigen::Matrix3d::Identity() - radial);
}

std::vector<double> cloak_interfaces(const LayeredStructure& s, double rho) {
  check_rho(rho);
  check_geometry(s);
  std::vector<double> out{1.0, 1.5, 2.0};
  for (double r : s.radii()) out.push_back(blow_up_profile(rho, rho * r).f);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) <= 1e-14 * b; }),
            out.end());
  return out;
}

MaterialTensorField push_forward(const LayeredStructure& s, double rho, const Eigen::Vector3d& y) {
  const double radius = y.norm();
  if (!(radius > 1.0)) throw DomainError("push_forward is defined only outside the unit ball");
  for (double iface : cloak_interfaces(s, rho)) {
    if (std::abs(radius - iface) <= kInterfaceTolerance * iface) {
      throw BoundaryError("sample point lies on the interface sphere |y| = " + std::to_string(iface));
    }
  }

  MaterialTensorField out;
  out.y = y;
  const Background bg = s.background();
  if (radius >= 2.0) {
    out.mu = bg.mu * Eigen::Matrix3d::Identity();
    out.eps = bg.eps * Eigen::Matrix3d::Identity();
    return out;
  }

  const Eigen::Vector3d x = inverse_map(rho, y);
  const int medium = s.medium_at(x.norm() / rho);
  if (medium < 0) throw InternalError("preimage fell inside the conducting core");
  const Eigen::Matrix3d df = blow_up_jacobian(rho, x);
  const Eigen::Matrix3d shape = df * df.transpose() / df.determinant();
  out.mu = s.mu_of(medium) * shape;
  out.eps = s.eps_of(medium) * shape;
  return out;
}

Eigen::Vector3d nudge_off_interfaces(const LayeredStructure& s, double rho, const Eigen::Vector3d& y) {
  const double radius = y.norm();
  if (radius == 0.0) return y;
  for (double iface : cloak_interfaces(s, rho)) {
    if (std::abs(radius - iface) <= kNudge * iface) return y * ((iface * (1.0 + kNudge)) / radius);
  }
  return y;
}

std::vector<Eigen::Vector3d> cloak_sample_grid(const LayeredStructure& s, double rho, int per_axis, double half_width) {
  if (per_axis < 2) throw DomainError("grid needs at least two nodes per axis");
  if (!(half_width > 0.0)) throw DomainError("grid half width must be positive");
  std::vector<Eigen::Vector3d> out;
  const double h = 2.0 * half_width / (per_axis - 1);
  for (int i = 0; i < per_axis; ++i) {
    for (int j = 0; j < per_axis; ++j) {
      for (int k = 0; k < per_axis; ++k) {
        const Eigen::Vector3d y(-half_width + i * h, -half_width + j * h, -half_width + k * h);
        if (y.norm() <= 1.0 + kNudge) continue;
        out.push_back(nudge_off_interfaces(s, rho, y));
      }
    }
  }
  return out;
}

}  // namespace svanish
