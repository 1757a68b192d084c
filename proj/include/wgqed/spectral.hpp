#pragma once

#include <vector>

#include "wgqed/common.hpp"
#include "wgqed/couplings.hpp"
#include "wgqed/fiber_modes.hpp"
#include "wgqed/geometry.hpp"

namespace wgqed {

/// Eigendecompositions of G and V. Rows of D (resp. C) are the eigenmodes:
/// D G D^+ = diag(gamma), C V C^+ = diag(v).
struct CollectiveSpectrum {
  RVec gamma;  // descending
  CMat D;
  RVec v;  // ascending
  CMat C;
};

/// Degenerate eigenvalues are ordered by descending overlap with
/// `reference` when given. Each mode's largest-magnitude component is real
/// and positive.
CollectiveSpectrum decay_spectrum(const CouplingKernels& kernels, const CVec* reference = nullptr);

/// Laser-imprinted single-excitation spin wave, exp(i k z_j cos(angle)) / sqrt(N).
CVec spin_wave(const AtomChain& chain, const DriveParams& drive);

/// sum_n gamma_n |(D psi)_n|^2; cross-checked against psi^+ G psi.
double effective_decay_rate(const CollectiveSpectrum& spectrum, const CVec& psi);

/// a / lambda = m / (cos(angle) + lambda / lambda_f) for m = 1..max_order,
/// kept when inside (lo, hi].
std::vector<double> matching_lattice_constants(const FiberMode& mode, double laser_angle,
                                               int max_order = 3, double lo = 0.1, double hi = 2.0);

}  // namespace wgqed
