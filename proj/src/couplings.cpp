#include "wgqed/couplings.hpp"

#include <cmath>
#include <string>

namespace wgqed {

namespace {

double sgn(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

void check_hermitian(const CMat& m, const char* name) {
  const double err = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (err > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    throw HermiticityViolation(std::string(name) + " is not Hermitian (max deviation " +
                               std::to_string(err) + ")");
  }
}

void check_psd(const CMat& m, const char* name) {
  Eigen::SelfAdjointEigenSolver<CMat> eig(m, Eigen::EigenvaluesOnly);
  const double worst = eig.eigenvalues().minCoeff();
  if (worst < -1e-10) {
    throw PSDViolation(std::string(name) + " is not positive semidefinite (smallest eigenvalue " +
                       std::to_string(worst) + ")");
  }
}

}  // namespace

CMat CouplingKernels::effective() const { return V() - 0.5 * kI * G().transpose(); }

double CouplingKernels::total_single_atom_rate() const {
  return (G_R(0, 0) + G_L(0, 0) + G_u(0, 0)).real();
}

GuidedKernels build_guided_kernels(const AtomChain& chain, double beta_f, const GuidedRates& rates) {
  const auto z = chain.positions();
  const auto n = static_cast<Eigen::Index>(z.size());
  GuidedKernels k{CMat::Zero(n, n), CMat::Zero(n, n), CMat::Zero(n, n), CMat::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double dz = z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
      const cplx fwd = std::polar(1.0, beta_f * dz);  // exp(i beta (z_i - z_j))
      k.G_R(i, j) = rates.right * std::conj(fwd);
      k.G_L(i, j) = rates.left * fwd;
      k.V_R(i, j) = -0.5 * kI * rates.right * sgn(dz) * fwd;
      k.V_L(i, j) = -0.5 * kI * rates.left * sgn(-dz) * std::conj(fwd);
    }
  }
  return k;
}

std::pair<CMat, CMat> build_unguided_kernel(const AtomChain& chain, const Vec3c& dipole) {
  const auto z = chain.positions();
  const auto n = static_cast<Eigen::Index>(z.size());
  const double axial = std::norm(dipole[2]);
  CMat V = CMat::Zero(n, n);
  CMat G = CMat::Identity(n, n) * units::gamma;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double xi = units::k0 * std::abs(z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)]);
      if (xi == 0.0) {
        throw CoincidentAtoms("atoms " + std::to_string(i) + " and " + std::to_string(j) +
                              " share a position");
      }
      const cplx bracket = (1.0 - axial) / xi + (1.0 - 3.0 * axial) * (kI / (xi * xi) - 1.0 / (xi * xi * xi));
      const cplx kernel = -0.75 * units::gamma * std::polar(1.0, xi) * bracket;
      V(i, j) = kernel.real();
      G(i, j) = -2.0 * kernel.imag();
    }
  }
  return {V, G};
}

CouplingKernels assemble(const AtomChain& chain, const FiberMode& mode, const GuidedRates& rates) {
  chain.validate();
  if (rates.right < 0.0 || rates.left < 0.0) throw InvalidArgument("guided rates must be non-negative");
  const GuidedKernels guided = build_guided_kernels(chain, mode.beta_f(), rates);
  auto [V_u, G_u] = build_unguided_kernel(chain, chain.dipole);
  CouplingKernels k{guided.V_R, guided.V_L, std::move(V_u), guided.G_R, guided.G_L, std::move(G_u)};
  validate(k);
  return k;
}

void validate(const CouplingKernels& k) {
  const Eigen::Index n = k.size();
  for (const CMat* m : {&k.V_R, &k.V_L, &k.V_u, &k.G_R, &k.G_L, &k.G_u}) {
    if (m->rows() != n || m->cols() != n) throw DimensionMismatch("coupling kernels differ in size");
  }
  check_hermitian(k.V_R, "V_R");
  check_hermitian(k.V_L, "V_L");
  check_hermitian(k.V_u, "V_u");
  check_hermitian(k.G_R, "G_R");
  check_hermitian(k.G_L, "G_L");
  check_hermitian(k.G_u, "G_u");
  check_psd(k.G_R, "G_R");
  check_psd(k.G_L, "G_L");
  check_psd(k.G_u, "G_u");
}

}  // namespace wgqed
