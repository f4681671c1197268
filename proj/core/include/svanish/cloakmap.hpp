#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <vector>

#include "svanish/multilayer.hpp"

namespace svanish {

/// Radial profile f of the blow-up map F_rho(x) = f(|x|) x / |x| and its derivative.
struct RadialValue {
  double f = 0.0;
  double df = 0.0;
};

/// Piecewise-affine profile: identity for r >= 2, r / rho for r <= rho, with two affine pieces
/// taking [rho, 2 rho] onto [1, 3/2] and [2 rho, 2] onto [3/2, 2]. Requires 0 < rho < 1/2.
RadialValue blow_up_profile(double rho, double r);

/// F_rho(x). DomainError unless 0 < rho < 1/2.
Eigen::Vector3d blow_up_map(double rho, const Eigen::Vector3d& x);

/// Exact inverse of F_rho.
Eigen::Vector3d inverse_map(double rho, const Eigen::Vector3d& y);

/// DF at x: f'(r) x_hat x_hat^T + (f(r) / r)(I - x_hat x_hat^T); the identity at the origin is replaced by I / rho.
Eigen::Matrix3d blow_up_jacobian(double rho, const Eigen::Vector3d& x);

struct MaterialTensorField {
  Eigen::Vector3d y = Eigen::Vector3d::Zero();
  Eigen::Matrix3d mu = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d eps = Eigen::Matrix3d::Identity();
};

/// Radii |y| across which the pushed-forward medium jumps: 1 (PEC wall), the images of the layer
/// interfaces, 3/2 and 2. Ascending.
std::vector<double> cloak_interfaces(const LayeredStructure& s, double rho);

/// (F_rho)_* of the structure shrunk by rho, evaluated at y:
/// DF m DF^T / det DF with m the scalar parameter found at |F_rho^{-1}(y)| / rho.
/// DomainError for |y| <= 1; BoundaryError within 1e-12 |y| of an interface sphere.
MaterialTensorField push_forward(const LayeredStructure& s, double rho, const Eigen::Vector3d& y);

/// Moves y radially by 1e-9 |y| outward when it lies within that distance of an interface sphere.
Eigen::Vector3d nudge_off_interfaces(const LayeredStructure& s, double rho, const Eigen::Vector3d& y);

/// Points of a cubic grid with `per_axis` nodes on [-half_width, half_width]^3 that lie outside
/// the unit ball, nudged off interfaces.
std::vector<Eigen::Vector3d> cloak_sample_grid(const LayeredStructure& s, double rho, int per_axis, double half_width);

}  // namespace svanish
