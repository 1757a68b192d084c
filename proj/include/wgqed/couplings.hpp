#pragma once

#include <utility>

#include "wgqed/common.hpp"
#include "wgqed/fiber_modes.hpp"
#include "wgqed/geometry.hpp"

namespace wgqed {

/// Coherent (V) and dissipative (G) coupling matrices of the chain, split into
/// forward-guided (R), backward-guided (L) and unguided (u) channels.
///
/// Conventions, matching the master equation
///   drho/dt = -i[H, rho] + sum_ij G_ij (s_i rho s_j^+ - 1/2 {s_j^+ s_i, rho}),
///   H_int = sum_{i != j} V_ij s_i^+ s_j:
/// G_R[i,j] = G_R1 exp(i beta_f (z_j - z_i)), so the R jump operator is
/// sum_j sqrt(G_R1) exp(-i beta_f z_j) s_j.
struct CouplingKernels {
  CMat V_R, V_L, V_u;
  CMat G_R, G_L, G_u;

  Eigen::Index size() const { return G_u.rows(); }
  CMat V() const { return V_R + V_L + V_u; }
  CMat G() const { return G_R + G_L + G_u; }
  /// Single-excitation propagator: dc_i/dt = -i sum_j M_ij c_j with
  /// M = V - (i/2) G^T. M_ij is the amplitude with which atom j drives atom i.
  CMat effective() const;
  /// Total single-atom decay rate G[0,0].
  double total_single_atom_rate() const;
};

struct GuidedKernels {
  CMat V_R, G_R, V_L, G_L;
};

/// Closed-form single-mode 1D guided kernels (rotating-wave, Markovian).
GuidedKernels build_guided_kernels(const AtomChain& chain, double beta_f, const GuidedRates& rates);

/// Free-space dipole-dipole kernel between atoms on the fiber axis
/// direction; returns (V_u, G_u) with G_u[i,i] = gamma.
std::pair<CMat, CMat> build_unguided_kernel(const AtomChain& chain, const Vec3c& dipole);

/// Sum of the channel kernels; throws on Hermiticity or PSD violations.
CouplingKernels assemble(const AtomChain& chain, const FiberMode& mode, const GuidedRates& rates);

void validate(const CouplingKernels& kernels);

}  // namespace wgqed
