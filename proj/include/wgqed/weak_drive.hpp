#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wgqed/common.hpp"
#include "wgqed/couplings.hpp"
#include "wgqed/emission.hpp"
#include "wgqed/geometry.hpp"
#include "wgqed/spectral.hpp"

namespace wgqed {

/// First-order-in-Omega stationary coherences c_i = <s_i>, solving
///   sum_j (Delta delta_ij - M_ij) c_j = Omega conj(u_i),  M = V - (i/2) G^T.
/// Throws SingularSystem when the matrix is numerically singular.
CVec steady_amplitudes(const CouplingKernels& kernels, const AtomChain& chain, const DriveParams& drive);

/// Emission rates with <s_j^+ s_i> = conj(c_j) c_i.
EmissionRates weak_emission(const CouplingKernels& kernels, const CVec& amplitudes);

struct LineScan {
  std::vector<double> detunings;
  std::vector<EmissionRates> rates;
  std::optional<double> splitting;

  std::vector<double> right() const;
};

/// 2001 points over +-max(10 gamma, 1.5 max|v_n|).
std::vector<double> default_detuning_grid(const CollectiveSpectrum& spectrum, int points = 2001);

/// Gamma_R(Delta) (and L, u) over the grid; drive.detuning is ignored.
LineScan emission_line(const CouplingKernels& kernels, const AtomChain& chain, const DriveParams& drive,
                       std::span<const double> detunings);

/// Distance between the two highest local maxima, each refined by a
/// three-point parabola. Empty for single-peaked lines.
std::optional<double> line_splitting(std::span<const double> detunings, std::span<const double> rates);

}  // namespace wgqed
