#pragma once

#include "wgqed/common.hpp"
#include "wgqed/couplings.hpp"

namespace wgqed {

/// Photon emission rates into the forward/backward guided and unguided
/// channels, in units of gamma.
struct EmissionRates {
  double right = 0.0;
  double left = 0.0;
  double unguided = 0.0;

  double guided() const { return right + left; }
  double beta() const { return guided() / (guided() + unguided); }
  double chirality() const { return (right - left) / guided(); }
};

/// Gamma_X = sum_ij G^X_ij <s_j^+ s_i> given the correlation matrix
/// corr(i, j) = <s_j^+ s_i>. This is the trace of the X jump term of the
/// master equation, i.e. <J_X^+ J_X>.
inline EmissionRates emission_from_correlations(const CouplingKernels& k, const CMat& corr) {
  auto rate = [&](const CMat& g) { return g.cwiseProduct(corr).sum().real(); };
  return {rate(k.G_R), rate(k.G_L), rate(k.G_u)};
}

}  // namespace wgqed
