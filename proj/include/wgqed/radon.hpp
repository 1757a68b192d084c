#pragma once

#include <functional>
#include <span>
#include <vector>

#include "wgqed/deformed.hpp"
#include "wgqed/rate_function.hpp"

namespace wgqed {

enum class FilterWindow { RamLak, Hann };

struct TomographyGrids {
  int angles = 64;
  double s_max = 12.0;
  int s_points = 121;
  int x_points = 257;
  int wigner_points = 257;
  double time = 1.0;
  /// x-grid edges sit where exp(-phi_rate) has dropped to exp(-edge_rate).
  double edge_rate = 23.0;  // ~1e-10
  /// s is widened until phi_rate at the resolved x edges reaches this.
  double s_edge_rate = 18.5;  // ~1e-8
  double s_limit = 120.0;
  FilterWindow window = FilterWindow::Hann;
  double cutoff = 0.8;  // fraction of the Nyquist frequency

  void validate() const;
};

/// Quadrature marginals over angles alpha_k = k pi / K on a common x grid.
struct Sinogram {
  std::vector<double> alpha;
  std::vector<double> x;
  std::vector<Marginal> marginals;
  std::vector<ScgfCurve> curves;  // empty for analytic input
  /// least-squares fit mean(alpha) = x0 cos(alpha) + p0 sin(alpha)
  double x0 = 0.0, p0 = 0.0;
  /// max over alpha of |mean - fit| / standard deviation
  double consistency = 0.0;
  double worst_convexity_violation = 0.0;

  RMat density() const;  // angles x points
};

Sinogram sinogram(const DeformedGenerator& gen, const CMat& rho_ss, const TomographyGrids& grids, int threads = 1);

/// Marginals from a known projection density; used to test the inversion.
Sinogram analytic_sinogram(const std::function<double(double alpha, double x)>& density, int angles,
                           std::span<const double> x_grid);

/// Projections of a Gaussian Wigner function with mean (x0, p0) and
/// covariance cov.
Sinogram gaussian_sinogram(double x0, double p0, const Eigen::Matrix2d& cov, int angles,
                           std::span<const double> x_grid);

struct WignerResult {
  std::vector<double> x;  // shared axis for x and p
  RMat W;                 // W(i, j) = W(x_i, p_j)
  double raw_integral = 0.0;
  double negativity = 0.0;
  bool boundary_mass = false;
  double boundary_ratio = 0.0;

  double spacing() const { return x[1] - x[0]; }
};

/// Filtered backprojection onto a square grid spanning the sinogram's x
/// range; normalized to unit integral, negativity filled in.
WignerResult invert_radon(const Sinogram& sino, const TomographyGrids& grids);

/// Discrete ramp kernel h(n dx) with the chosen window, cutoff in cycles per
/// unit length.
double ramp_kernel(double t, double cutoff, FilterWindow window);

/// Line integrals of W along each angle, sampled on x_grid.
RMat forward_project(const WignerResult& w, std::span<const double> alpha, std::span<const double> x_grid);

/// Integral of |W| - W (2D trapezoid). Sets the boundary flag when |W| on
/// the grid edge exceeds 1e-6 of the peak.
double negativity(WignerResult& w);

double trapezoid2d(const std::vector<double>& x, const RMat& f);

}  // namespace wgqed
