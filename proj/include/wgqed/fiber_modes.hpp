#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "wgqed/common.hpp"

namespace wgqed {

/// Step-index cylindrical nanofiber in vacuum. Radius in units of the
/// transition wavelength.
struct FiberSpec {
  double radius = 0.22;
  double refractive_index = 1.45;

  void validate() const;
};

/// Cylindrical components of the guided field at a point outside or inside
/// the fiber, for the forward-propagating, counterclockwise (l = +1) mode.
struct FieldProfile {
  cplx e_r;
  cplx e_phi;
  cplx e_z;
};

/// Solved HE11 mode. The profile carries the usual nanofiber amplitude convention
/// with unit prefactor; `norm` is the cross-section integral of n^2 |e|^2 in
/// that convention, so e / sqrt(norm) is the power-normalized profile.
class FiberMode {
 public:
  FiberMode(FiberSpec spec, double wavenumber, double beta);

  const FiberSpec& spec() const { return spec_; }
  double beta_f() const { return beta_; }
  double lambda_f() const { return 2.0 * std::numbers::pi / beta_; }
  double effective_index() const { return beta_ / k_; }
  /// d beta_f / d omega (c = 1), i.e. the group index. Set by solve_he11.
  double beta_f_prime() const { return group_index_; }
  double norm() const { return norm_; }

  FieldProfile profile(double r) const;

  /// Cartesian field (x radial at phi_az = 0, z along the axis) of the mode
  /// propagating in `direction` = +1/-1 with rotation index `rotation` = +1/-1.
  Vec3c field(double r, double phi_az, int direction, int rotation) const;

 private:
  friend FiberMode solve_he11(const FiberSpec&);
  FiberSpec spec_;
  double k_;
  double beta_;
  double h_;
  double q_;
  double s_;
  double group_index_ = 0.0;
  double norm_ = 0.0;
};

/// HE11 characteristic function at propagation constant beta (k < beta < k n_f).
/// Roots are the guided HE_1m modes; the largest root is HE11.
double he11_characteristic(const FiberSpec& spec, double wavenumber, double beta);

inline constexpr int kDispersionScanPoints = 2000;

/// Bracket on a uniform scan over (k, k n_f) and bisect to 1e-12 relative.
FiberMode solve_he11(const FiberSpec& spec);

/// (beta / k, characteristic value) pairs over the open guidance window.
std::vector<std::pair<double, double>> dispersion_scan(const FiberSpec& spec,
                                                       int points = kDispersionScanPoints);

enum class CalibrationMode { BetaCalibrated, FirstPrinciples };

struct CouplingCalibration {
  CalibrationMode mode = CalibrationMode::BetaCalibrated;
  double beta_target = 0.15;
  std::optional<double> chirality_target;

  void validate() const;
};

/// Single-atom decay rates into the forward (R) and backward (L) guided
/// modes, in units of gamma.
struct GuidedRates {
  double right = 0.0;
  double left = 0.0;

  double total() const { return right + left; }
  double beta_factor() const { return total() / (total() + units::gamma); }
  double chirality() const { return (right - left) / total(); }
};

/// Rates for an atom at radial distance r (>= fiber radius) and azimuth phi_az.
GuidedRates single_atom_guided_rates(const FiberMode& mode, const Vec3c& dipole, double r,
                                     double phi_az, const CouplingCalibration& calibration = {});

}  // namespace wgqed
