#pragma once

#include <vector>

#include "wgqed/common.hpp"

namespace wgqed {

/// (1, 0, -i)/sqrt(2): circular dipole in the plane spanned by the radial
/// direction and the fiber axis.
Vec3c circular_dipole();

/// Atoms on lattice sites z = spacing * site along the fiber axis. Missing
/// integers in `sites` are voids.
struct AtomChain {
  double spacing = 0.8;
  std::vector<int> sites;
  double surface_distance = 0.1;
  Vec3c dipole = circular_dipole();

  static AtomChain regular(int atoms, double spacing, double surface_distance = 0.1);

  std::size_t size() const { return sites.size(); }
  std::vector<double> positions() const;
  /// Same chain with every site index moved by `offset`.
  AtomChain shifted(int offset) const;
  void validate() const;
};

struct DriveParams {
  double rabi = 0.01;
  double detuning = 0.0;
  double laser_angle = 1.37;

  void validate() const;
};

/// u_j = exp(i k z_j cos(laser_angle)) over occupied sites.
CVec drive_phases(const AtomChain& chain, const DriveParams& drive);

}  // namespace wgqed
