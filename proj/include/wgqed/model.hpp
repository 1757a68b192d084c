#pragma once

#include "wgqed/couplings.hpp"
#include "wgqed/fiber_modes.hpp"
#include "wgqed/geometry.hpp"

namespace wgqed {

/// Solved fiber mode plus the single-atom guided rates for atoms at one
/// radial position and dipole; every chain built from it shares these.
struct Model {
  FiberMode mode;
  GuidedRates rates;
  double surface_distance;
  Vec3c dipole;

  CouplingKernels kernels(const AtomChain& chain) const;
  AtomChain chain(std::vector<int> sites, double spacing) const;
  AtomChain regular_chain(int atoms, double spacing) const;
};

/// Atoms sit at r = radius + surface_distance, phi_az = 0.
Model make_model(const FiberSpec& fiber, const CouplingCalibration& calibration, double surface_distance,
                 const Vec3c& dipole = circular_dipole());

}  // namespace wgqed
