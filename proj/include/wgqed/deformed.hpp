#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wgqed/common.hpp"
#include "wgqed/couplings.hpp"
#include "wgqed/geometry.hpp"
#include "wgqed/lindblad.hpp"

namespace wgqed {

/// Amplitudes a_j of the forward-guided jump operator J_R = sum_j a_j s_j,
/// a_j = sqrt(G_R[j,j]) exp(-i beta_f z_j). Consistent with the G_R phase
/// convention: G_R[i,j] = conj(a_j) a_i.
CVec right_jump_amplitudes(const CouplingKernels& kernels, const AtomChain& chain, double beta_f);

SpMat jump_operator(const CVec& amplitudes, const Register& reg);

/// Tilted generator for homodyne counting of the quadrature at angle alpha:
///   L_s rho = L rho - (s/2)(e^{-i alpha} J rho + e^{i alpha} rho J^+) + (s^2/8) rho.
class DeformedGenerator {
 public:
  DeformedGenerator(const Liouvillian& L, const SpMat& jump);

  const SpMat& base() const { return base_; }
  const SpMat& jump() const { return jump_; }
  Eigen::Index dim() const { return jump_.rows(); }

  /// Returns the base matrix unchanged at s == 0.
  SpMat matrix(double alpha, double s) const;

 private:
  SpMat base_;
  SpMat jump_;
  SpMat left_;   // I (x) J
  SpMat right_;  // conj(J) (x) I
};

struct ScgfCurve {
  double alpha = 0.0;
  std::vector<double> s;
  std::vector<double> theta;
  std::vector<bool> converged;
  std::vector<double> residual;
  // eigenvectors at the two ends of the grid, used to extend the walk
  CVec left_vector, right_vector;

  bool all_converged() const;
};

struct ScgfOptions {
  double tolerance = 1e-11;
  int max_iterations = 60;
};

/// theta(s) = leading (largest real part) eigenvalue of the tilted generator,
/// walking outward from s = 0 with warm-started shifted inverse iteration.
/// `rho_ss` seeds the s = 0 point. The grid must contain 0.
ScgfCurve scgf(const DeformedGenerator& gen, double alpha, std::span<const double> s_grid, const CMat& rho_ss,
               const ScgfOptions& options = {});

/// Append points spaced `step` beyond the current ends until |s| reaches
/// `s_max`, continuing from the stored end vectors.
void extend_scgf(const DeformedGenerator& gen, ScgfCurve& curve, double s_max, double step,
                 const ScgfOptions& options = {});

/// Cold start: dense eigendecomposition, largest real part. Small dims only.
double scgf_dense(const DeformedGenerator& gen, double alpha, double s);

/// <J>, so the first cumulant of the alpha quadrature is Re(e^{-i alpha} <J>).
cplx jump_expectation(const CMat& rho, const SpMat& jump);

}  // namespace wgqed
