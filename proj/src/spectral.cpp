#include "wgqed/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wgqed {

namespace {

constexpr double kDegenerate = 1e-10;

// Eigenvectors as rows, phase-fixed, ordered by `descending` eigenvalue.
void ordered_modes(const CMat& m, const CVec* reference, bool descending, RVec& values, CMat& rows) {
  Eigen::SelfAdjointEigenSolver<CMat> eig(m);
  const RVec& raw = eig.eigenvalues();
  const CMat& vecs = eig.eigenvectors();
  const Eigen::Index n = m.rows();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  auto overlap = [&](Eigen::Index i) {
    return reference ? std::abs(reference->dot(vecs.col(i))) : 0.0;
  };
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (std::abs(raw[a] - raw[b]) > kDegenerate) return descending ? raw[a] > raw[b] : raw[a] < raw[b];
    return overlap(a) > overlap(b);
  });

  values.resize(n);
  rows.resize(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Eigen::Index c = order[static_cast<std::size_t>(r)];
    CVec vec = vecs.col(c);
    Eigen::Index peak = 0;
    vec.cwiseAbs().maxCoeff(&peak);
    vec *= std::abs(vec[peak]) / vec[peak];
    values[r] = raw[c];
    rows.row(r) = vec.adjoint();
  }
}

}  // namespace

CollectiveSpectrum decay_spectrum(const CouplingKernels& kernels, const CVec* reference) {
  CollectiveSpectrum out;
  ordered_modes(kernels.G(), reference, true, out.gamma, out.D);
  ordered_modes(kernels.V(), reference, false, out.v, out.C);
  return out;
}

CVec spin_wave(const AtomChain& chain, const DriveParams& drive) {
  return drive_phases(chain, drive) / std::sqrt(static_cast<double>(chain.size()));
}

double effective_decay_rate(const CollectiveSpectrum& spectrum, const CVec& psi) {
  if (psi.size() != spectrum.gamma.size()) {
    throw DimensionMismatch("spin wave and spectrum differ in dimension");
  }
  const CVec proj = spectrum.D * psi;
  return (spectrum.gamma.array() * proj.cwiseAbs2().array()).sum();
}

std::vector<double> matching_lattice_constants(const FiberMode& mode, double laser_angle, int max_order,
                                               double lo, double hi) {
  const double denom = std::cos(laser_angle) + units::wavelength / mode.lambda_f();
  std::vector<double> out;
  if (denom <= 0.0) return out;
  for (int m = 1; m <= max_order; ++m) {
    const double a = m * units::wavelength / denom;
    if (a > lo && a <= hi) out.push_back(a);
  }
  return out;
}

}  // namespace wgqed
