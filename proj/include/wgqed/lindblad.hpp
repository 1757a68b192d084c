#pragma once

#include <cstdint>
#include <vector>

#include "wgqed/common.hpp"
#include "wgqed/couplings.hpp"
#include "wgqed/emission.hpp"
#include "wgqed/geometry.hpp"

namespace wgqed {

inline constexpr int kRegisterCap = 12;
inline constexpr int kDefaultAtomLimit = 7;

/// N two-level atoms. Basis state b has atom j excited iff bit j of b is set.
class Register {
 public:
  explicit Register(int atoms);

  int atoms() const { return atoms_; }
  Eigen::Index dim() const { return dim_; }
  /// s_j = |g_j><e_j| embedded in the full space.
  const SpMat& lowering(int j) const { return lowering_[static_cast<std::size_t>(j)]; }

 private:
  int atoms_;
  Eigen::Index dim_;
  std::vector<SpMat> lowering_;
};

/// Generator acting on column-major vectorized density operators,
/// vec(rho)[a + dim * b] = rho(a, b).
struct Liouvillian {
  SpMat matrix;
  SpMat h_eff;  // H - (i/2) sum_ij G_ij s_j^+ s_i
  int atoms = 0;
  DriveParams drive;
  std::uint64_t kernel_hash = 0;

  Eigen::Index dim() const { return Eigen::Index{1} << atoms; }
};

std::uint64_t hash_kernels(const CouplingKernels& kernels);

/// H = sum_j [Omega (u_j s_j + h.c.) - Delta s_j^+ s_j] + sum_{i!=j} V_ij s_i^+ s_j.
SpMat build_hamiltonian(const CouplingKernels& kernels, const AtomChain& chain, const DriveParams& drive,
                        const Register& reg);

Liouvillian build_liouvillian(const CouplingKernels& kernels, const AtomChain& chain, const DriveParams& drive,
                              int atom_cap = kRegisterCap);

/// Auto uses SparseLU up to kDirectAtomLimit atoms and Krylov above.
enum class SteadyMethod { Auto, SparseLU, Krylov, ShiftInvert, Dense };

/// Largest register solved by sparse LU under SteadyMethod::Auto; LU fill-in
/// grows too fast beyond it.
inline constexpr int kDirectAtomLimit = 4;

/// Trace-one Hermitian stationary density operator.
///  SparseLU: one row of L replaced by the trace functional.
///  Krylov: GMRES on L, preconditioned by the exact inverse of the no-jump
///    part rho -> -i(H_eff rho - rho H_eff^+) (Schur-based Sylvester solve);
///    run from two start states to detect a degenerate null space.
///  ShiftInvert: inverse iteration near 0 from two start states.
///  Dense: full eigendecomposition, oracle for small N.
/// Direct methods fall back to the others when the residual check fails.
/// `seed` picks the second start state of the degeneracy checks.
CMat steady_density(const Liouvillian& L, SteadyMethod method = SteadyMethod::Auto,
                    std::uint64_t seed = 0x5eed);

/// ||L vec(rho)||_2
double steady_residual(const Liouvillian& L, const CMat& rho);

struct SteadyState {
  CMat rho;
  EmissionRates rates;
  double residual = 0.0;
};

SteadyState steady_state(const Liouvillian& L, const CouplingKernels& kernels,
                         SteadyMethod method = SteadyMethod::Auto, std::uint64_t seed = 0x5eed);

/// corr(i, j) = <s_j^+ s_i>
CMat correlations(const CMat& rho, int atoms);

EmissionRates emission_observables(const CMat& rho, const CouplingKernels& kernels);

/// 2x2 reduced state of one atom (index 0 = ground, 1 = excited).
Eigen::Matrix2cd reduced_density(const CMat& rho, int atoms, int atom);

double trace_distance(const CMat& a, const CMat& b);

}  // namespace wgqed
