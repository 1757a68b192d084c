#include "wgqed/lindblad.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

namespace wgqed {

namespace {

using Triplet = Eigen::Triplet<cplx>;
using Index = Eigen::Index;

Index bit(int j) { return Index{1} << j; }

CMat as_matrix(const CVec& v, Index dim) { return Eigen::Map<const CMat>(v.data(), dim, dim); }

CVec as_vector(const CMat& m) { return Eigen::Map<const CVec>(m.data(), m.size()); }

CMat finalize(CMat rho) {
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return rho / rho.trace();
}

CMat random_density(Index dim, std::uint64_t seed) {
  // small deterministic LCG; only used to pick a second start vector
  CMat a(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) {
      seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
      const double re = static_cast<double>(seed >> 11) / 9007199254740992.0 - 0.5;
      seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
      const double im = static_cast<double>(seed >> 11) / 9007199254740992.0 - 0.5;
      a(i, j) = cplx(re, im);
    }
  }
  CMat rho = a * a.adjoint();
  return rho / rho.trace();
}

CMat shift_invert(const Liouvillian& L, CMat start) {
  const Index d2 = L.matrix.rows();
  const Index dim = L.dim();
  SpMat shifted = L.matrix;
  SpMat identity(d2, d2);
  identity.setIdentity();
  shifted -= cplx(1e-6, 0.0) * identity;
  Eigen::SparseLU<SpMat> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success) throw NonConvergence("shift-invert factorization failed");
  CVec x = as_vector(start);
  for (int it = 0; it < 200; ++it) {
    x = lu.solve(x);
    CMat rho = finalize(as_matrix(x, dim));
    if (steady_residual(L, rho) < 1e-11) return rho;
    x = as_vector(rho);
  }
  throw NonConvergence("shift-invert iteration did not reach the steady-state residual");
}

CMat dense_steady(const Liouvillian& L) {
  const CMat dense(L.matrix);
  Eigen::ComplexEigenSolver<CMat> eig(dense);
  if (eig.info() != Eigen::Success) throw NonConvergence("dense eigendecomposition failed");
  Index best = 0;
  int null_count = 0;
  for (Index i = 0; i < eig.eigenvalues().size(); ++i) {
    if (std::abs(eig.eigenvalues()[i]) < 1e-8) ++null_count;
    if (std::abs(eig.eigenvalues()[i]) < std::abs(eig.eigenvalues()[best])) best = i;
  }
  if (null_count > 1) {
    throw DegenerateSteadyState("Liouvillian null space has dimension " + std::to_string(null_count));
  }
  return finalize(as_matrix(eig.eigenvectors().col(best), L.dim()));
}

CMat bordered_lu(const Liouvillian& L, bool& ok) {
  const Index d2 = L.matrix.rows();
  const Index dim = L.dim();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(L.matrix.nonZeros() + dim));
  for (Index c = 0; c < L.matrix.outerSize(); ++c) {
    for (SpMat::InnerIterator it(L.matrix, c); it; ++it) {
      if (it.row() != 0) trip.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (Index a = 0; a < dim; ++a) trip.emplace_back(0, a + dim * a, cplx(1.0, 0.0));
  SpMat bordered(d2, d2);
  bordered.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<SpMat> lu;
  lu.compute(bordered);
  ok = lu.info() == Eigen::Success;
  if (!ok) return {};
  CVec rhs = CVec::Zero(d2);
  rhs[0] = 1.0;
  const CVec x = lu.solve(rhs);
  ok = lu.info() == Eigen::Success && x.allFinite();
  if (!ok) return {};
  return finalize(as_matrix(x, dim));
}

// Exact inverse of X -> -i(H X - X H^+) - shift X, the no-jump part of the
// generator. With H = Q T Q^+ (Schur) the equation becomes a triangular
// Sylvester problem solved column by column.
class NoJumpPreconditioner {
 public:
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

  NoJumpPreconditioner() = default;
  template <class M>
  NoJumpPreconditioner& analyzePattern(const M&) { return *this; }
  template <class M>
  NoJumpPreconditioner& factorize(const M&) { return *this; }
  template <class M>
  NoJumpPreconditioner& compute(const M&) { return *this; }
  Eigen::ComputationInfo info() { return Eigen::Success; }

  void setup(const CMat& h, double shift) {
    Eigen::ComplexSchur<CMat> schur(h);
    Q_ = schur.matrixU();
    T_ = schur.matrixT();
    shift_ = shift;
  }

  template <class Rhs>
  CVec solve(const Rhs& b) const {
    const Index n = T_.rows();
    const CMat z = Q_.adjoint() * Eigen::Map<const CMat>(CVec(b).data(), n, n) * Q_;
    CMat y(n, n);
    for (Index c = n - 1; c >= 0; --c) {
      CVec rhs = kI * z.col(c);
      for (Index k = c + 1; k < n; ++k) rhs += std::conj(T_(c, k)) * y.col(k);
      CMat shifted = T_;
      shifted.diagonal().array() -= cplx(0.0, shift_) + std::conj(T_(c, c));
      y.col(c) = shifted.triangularView<Eigen::Upper>().solve(rhs);
    }
    const CMat x = Q_ * y * Q_.adjoint();
    return Eigen::Map<const CVec>(x.data(), x.size());
  }

 private:
  CMat Q_, T_;
  double shift_ = 0.0;
};

CMat krylov_from(const Liouvillian& L, const CMat& start) {
  const Index dim = L.dim();
  Eigen::GMRES<SpMat, NoJumpPreconditioner> gmres;
  gmres.set_restart(120);
  gmres.setMaxIterations(3000);
  gmres.setTolerance(1e-14);
  gmres.compute(L.matrix);
  gmres.preconditioner().setup(CMat(L.h_eff), 1e-3);
  const CVec r0 = -(L.matrix * as_vector(start));
  const CVec delta = gmres.solve(r0);
  if (!delta.allFinite()) throw NonConvergence("GMRES produced non-finite values");
  return finalize(start + as_matrix(delta, dim));
}

CMat krylov_steady(const Liouvillian& L, std::uint64_t seed) {
  const Index dim = L.dim();
  const CMat first = krylov_from(L, CMat::Identity(dim, dim) / static_cast<double>(dim));
  if (steady_residual(L, first) > 1e-9) throw NonConvergence("GMRES did not reach the steady-state residual");
  const CMat second = krylov_from(L, random_density(dim, seed));
  if (trace_distance(first, second) > 1e-6) {
    throw DegenerateSteadyState("steady state depends on the initial state; null space is degenerate");
  }
  return first;
}

}  // namespace

Register::Register(int atoms) : atoms_(atoms) {
  if (atoms < 1 || atoms > kRegisterCap) {
    throw DimensionCap("register size " + std::to_string(atoms) + " outside [1, " +
                       std::to_string(kRegisterCap) + "]");
  }
  dim_ = bit(atoms);
  lowering_.reserve(static_cast<std::size_t>(atoms));
  for (int j = 0; j < atoms; ++j) {
    std::vector<Triplet> trip;
    for (Index a = 0; a < dim_; ++a) {
      if (a & bit(j)) trip.emplace_back(a ^ bit(j), a, cplx(1.0, 0.0));
    }
    SpMat s(dim_, dim_);
    s.setFromTriplets(trip.begin(), trip.end());
    lowering_.push_back(std::move(s));
  }
}

std::uint64_t hash_kernels(const CouplingKernels& k) {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&](const CMat& m) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
    for (std::size_t i = 0; i < static_cast<std::size_t>(m.size()) * sizeof(cplx); ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  for (const CMat* m : {&k.V_R, &k.V_L, &k.V_u, &k.G_R, &k.G_L, &k.G_u}) feed(*m);
  return h;
}

SpMat build_hamiltonian(const CouplingKernels& kernels, const AtomChain& chain, const DriveParams& drive,
                        const Register& reg) {
  const int n = reg.atoms();
  const Index dim = reg.dim();
  const CVec u = drive_phases(chain, drive);
  const CMat V = kernels.V();
  std::vector<Triplet> trip;
  for (Index a = 0; a < dim; ++a) {
    if (drive.detuning != 0.0) trip.emplace_back(a, a, -drive.detuning * std::popcount(static_cast<std::uint64_t>(a)));
    for (int j = 0; j < n; ++j) {
      if (!(a & bit(j))) continue;
      trip.emplace_back(a ^ bit(j), a, drive.rabi * u[j]);
      trip.emplace_back(a, a ^ bit(j), drive.rabi * std::conj(u[j]));
      for (int i = 0; i < n; ++i) {
        if (i == j || (a & bit(i))) continue;
        trip.emplace_back((a ^ bit(j)) | bit(i), a, V(i, j));
      }
    }
  }
  SpMat H(dim, dim);
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

Liouvillian build_liouvillian(const CouplingKernels& kernels, const AtomChain& chain, const DriveParams& drive,
                              int atom_cap) {
  const int n = static_cast<int>(kernels.size());
  if (n > std::min(atom_cap, kRegisterCap)) {
    throw DimensionCap("N = " + std::to_string(n) + " exceeds the Liouvillian atom cap " +
                       std::to_string(std::min(atom_cap, kRegisterCap)));
  }
  if (static_cast<int>(chain.size()) != n) throw DimensionMismatch("chain and kernels differ in size");
  drive.validate();
  const Register reg(n);
  const Index dim = reg.dim();
  const CMat G = kernels.G();

  // anti-Hermitian part sum_ij G_ij s_j^+ s_i
  std::vector<Triplet> trip;
  for (Index a = 0; a < dim; ++a) {
    for (int i = 0; i < n; ++i) {
      if (!(a & bit(i))) continue;
      const Index lowered = a ^ bit(i);
      for (int j = 0; j < n; ++j) {
        if (j != i && (lowered & bit(j))) continue;
        trip.emplace_back(lowered | bit(j), a, G(i, j));
      }
    }
  }
  SpMat decay(dim, dim);
  decay.setFromTriplets(trip.begin(), trip.end());
  const SpMat H_eff = build_hamiltonian(kernels, chain, drive, reg) - cplx(0.0, 0.5) * decay;

  trip.clear();
  trip.reserve(static_cast<std::size_t>(2 * dim * H_eff.nonZeros() + n * n * dim * dim / 4));
  for (Index c = 0; c < H_eff.outerSize(); ++c) {
    for (SpMat::InnerIterator it(H_eff, c); it; ++it) {
      const Index r = it.row();
      const cplx h = it.value();
      for (Index b = 0; b < dim; ++b) {
        trip.emplace_back(r + dim * b, c + dim * b, -kI * h);            // -i H_eff rho
        trip.emplace_back(b + dim * r, b + dim * c, kI * std::conj(h));  // +i rho H_eff^+
      }
    }
  }
  // sum_ij G_ij s_i rho s_j^+
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx g = G(i, j);
      if (g == cplx(0.0, 0.0)) continue;
      for (Index ca = 0; ca < dim; ++ca) {
        if (!(ca & bit(i))) continue;
        for (Index cb = 0; cb < dim; ++cb) {
          if (!(cb & bit(j))) continue;
          trip.emplace_back((ca ^ bit(i)) + dim * (cb ^ bit(j)), ca + dim * cb, g);
        }
      }
    }
  }
  Liouvillian L;
  L.matrix.resize(dim * dim, dim * dim);
  L.matrix.setFromTriplets(trip.begin(), trip.end());
  L.matrix.makeCompressed();
  L.h_eff = H_eff;
  L.atoms = n;
  L.drive = drive;
  L.kernel_hash = hash_kernels(kernels);
  return L;
}

double steady_residual(const Liouvillian& L, const CMat& rho) { return (L.matrix * as_vector(rho)).norm(); }

CMat steady_density(const Liouvillian& L, SteadyMethod method, std::uint64_t seed) {
  const Index dim = L.dim();
  if (method == SteadyMethod::Auto) {
    method = L.atoms <= kDirectAtomLimit ? SteadyMethod::SparseLU : SteadyMethod::Krylov;
  }
  if (method == SteadyMethod::Dense) return dense_steady(L);
  if (method == SteadyMethod::Krylov) {
    try {
      return krylov_steady(L, seed);
    } catch (const NonConvergence&) {
      if (L.atoms > kDirectAtomLimit) throw;
    }
  }
  if (method == SteadyMethod::SparseLU) {
    bool ok = false;
    CMat rho = bordered_lu(L, ok);
    if (ok && steady_residual(L, rho) < 1e-9) return rho;
    if (L.atoms > kDirectAtomLimit) return krylov_steady(L, seed);
  }
  CMat first = shift_invert(L, CMat::Identity(dim, dim) / static_cast<double>(dim));
  const CMat second = shift_invert(L, random_density(dim, seed));
  if (trace_distance(first, second) > 1e-6) {
    throw DegenerateSteadyState("steady state depends on the initial state; null space is degenerate");
  }
  return first;
}

SteadyState steady_state(const Liouvillian& L, const CouplingKernels& kernels, SteadyMethod method,
                         std::uint64_t seed) {
  SteadyState ss;
  ss.rho = steady_density(L, method, seed);
  ss.residual = steady_residual(L, ss.rho);
  ss.rates = emission_observables(ss.rho, kernels);
  return ss;
}

CMat correlations(const CMat& rho, int atoms) {
  const Index dim = rho.rows();
  CMat corr = CMat::Zero(atoms, atoms);
  for (int i = 0; i < atoms; ++i) {
    for (int j = 0; j < atoms; ++j) {
      cplx sum = 0.0;
      for (Index a = 0; a < dim; ++a) {
        if (!(a & bit(i))) continue;
        const Index lowered = a ^ bit(i);
        if (j != i && (lowered & bit(j))) continue;
        sum += rho(a, lowered | bit(j));
      }
      corr(i, j) = sum;
    }
  }
  return corr;
}

EmissionRates emission_observables(const CMat& rho, const CouplingKernels& kernels) {
  return emission_from_correlations(kernels, correlations(rho, static_cast<int>(kernels.size())));
}

Eigen::Matrix2cd reduced_density(const CMat& rho, int atoms, int atom) {
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  const Index dim = bit(atoms);
  for (Index a = 0; a < dim; ++a) {
    for (Index b = 0; b < dim; ++b) {
      if ((a & ~bit(atom)) != (b & ~bit(atom))) continue;
      out((a >> atom) & 1, (b >> atom) & 1) += rho(a, b);
    }
  }
  return out;
}

double trace_distance(const CMat& a, const CMat& b) {
  const CMat diff = 0.5 * (a - b + (a - b).adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> eig(diff, Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

}  // namespace wgqed
