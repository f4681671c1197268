#pragma once

#include <Eigen/Core>
#include <string>
#include <variant>
#include <vector>

#include "svanish/lseries.hpp"

namespace svanish {

enum class Polarization { TE, TM };

const char* to_string(Polarization pol) noexcept;

/// Permeability and permittivity of the unbounded exterior medium.
struct Background {
  double mu = 1.0;
  double eps = 1.0;
};

/// Order in which interface transfers are chained onto the PEC row.
/// `outward` is the physical order (core to background). `reversed` chains the same interface
/// factors from the outermost interface first; it keeps |1 + 2 a_0| = 1 but is not a solution of
/// the transmission problem and exists only to compare against designs computed that way.
enum class TransferOrdering { outward, reversed };

const char* to_string(TransferOrdering ordering) noexcept;

/// Concentric spherical layers around a perfectly conducting core.
///
/// Layer j (1-based) fills r_{j+1} < |x| < r_j with (mu_j, eps_j); medium 0 is the
/// background outside r_1 and the PEC core fills |x| < r_{L+1}. L = 0 is a bare
/// PEC sphere of radius r_1.
class LayeredStructure {
 public:
  LayeredStructure(std::vector<double> radii, std::vector<double> mu, std::vector<double> eps, Background background = {});

  /// Layers filled with the background medium; the scatterer is then a PEC sphere of radius r_{L+1}.
  static LayeredStructure vacuum(std::vector<double> radii, Background background = {});

  int layers() const noexcept { return static_cast<int>(mu_.size()); }
  const std::vector<double>& radii() const noexcept { return radii_; }
  const std::vector<double>& mu() const noexcept { return mu_; }
  const std::vector<double>& eps() const noexcept { return eps_; }
  const Background& background() const noexcept { return background_; }
  TransferOrdering ordering() const noexcept { return ordering_; }
  double core_radius() const noexcept { return radii_.back(); }

  /// Permeability / permittivity of medium j (0 = background, 1..L = layers).
  double mu_of(int medium) const;
  double eps_of(int medium) const;
  /// mu for TE, eps for TM.
  double material(int medium, Polarization pol) const;
  /// Refractive factor z_j = sqrt(eps_j mu_j); the wave number is k_j = omega z_j.
  double z(int medium) const;
  double wavenumber(int medium, double omega) const { return omega * z(medium); }

  /// Medium index containing radius r: 0 outside r_1, j inside layer j, -1 inside the core.
  /// Radii exactly on an interface resolve to the outer medium.
  int medium_at(double r) const;

  /// Same materials with every radius multiplied by rho.
  LayeredStructure scaled(double rho) const;
  /// Same radii and background with new layer parameters.
  LayeredStructure with_parameters(std::vector<double> mu, std::vector<double> eps) const;
  /// Same structure evaluated with another transfer ordering.
  LayeredStructure with_ordering(TransferOrdering ordering) const;

  /// Non-fatal observations made during construction (e.g. radii off the 2 -> 1 convention).
  const std::vector<std::string>& notes() const noexcept { return notes_; }

 private:
  std::vector<double> radii_;
  std::vector<double> mu_;
  std::vector<double> eps_;
  Background background_;
  TransferOrdering ordering_ = TransferOrdering::outward;
  std::vector<std::string> notes_;
};

/// Equally spaced radii r_j = 2 - (j - 1)/L, j = 1..L+1.
std::vector<double> default_radii(int layers);

/// TE: [[j, h], [J/mu, H/mu]];  TM: [[J/eps, H/eps], [j, h]]  at argument k r.
Eigen::Matrix2cd interface_matrix(int n, Polarization pol, double k, double material, double r);

/// Top row (p1, p2) of the transfer product; the exterior coefficients obey p1 + p2 a_0 = 0.
/// p1 and p2 carry an arbitrary common nonzero factor.
struct TransferRow {
  cplx p1;
  cplx p2;
};

TransferRow transfer_product(const LayeredStructure& s, int n, Polarization pol, double omega);

/// Outgoing coefficient a_0 (TE) or b_0 (TM) for a unit incident multipole: -p1/p2.
cplx exterior_coefficient(const LayeredStructure& s, int n, Polarization pol, double omega);

/// One scattering coefficient, either at a fixed frequency or as a low-frequency series.
struct ModalCoefficient {
  int n = 1;
  Polarization polarization = Polarization::TE;
  std::variant<cplx, LaurentSeries> value;

  cplx numeric() const { return std::get<cplx>(value); }
  const LaurentSeries& series() const { return std::get<LaurentSeries>(value); }
};

/// W_n = -(i n(n+1)/k_0) a_0 with k_0 = omega sqrt(eps_0 mu_0).
ModalCoefficient modal_coefficient(const LayeredStructure& s, int n, Polarization pol, double omega);

/// t W_n(t) = -(i n(n+1)/sqrt(eps_0 mu_0)) a_0(t). Depends on the structure only through the
/// dimensionless products k_j r_j, so it is invariant under (radii * rho, omega) <-> (radii, rho * omega),
/// and it is the quantity whose small-t expansion starts at t^(2n+1).
cplx scaled_coefficient(const LayeredStructure& s, int n, Polarization pol, double omega);

/// Field coefficients (regular, outgoing) in media 0..L.
struct LayerFieldCoefficients {
  Polarization polarization = Polarization::TE;
  std::vector<cplx> regular;   ///< tilde a_j / tilde b_j; regular[0] = 1
  std::vector<cplx> outgoing;  ///< a_j / b_j
  double interface_residual = 0.0;  ///< largest relative mismatch over interfaces and the PEC wall
};

/// Requires the outward ordering (DomainError otherwise).
LayerFieldCoefficients layer_fields(const LayeredStructure& s, int n, Polarization pol, double omega);

}  // namespace svanish
