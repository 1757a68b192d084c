#pragma once

#include <span>
#include <vector>

#include "wgqed/deformed.hpp"

namespace wgqed {

/// Lower convex hull of sampled (s, theta) points with the Legendre-Fenchel
/// transform phi_rate(x) = max_s [-theta(s) - x s].
class LegendreTransform {
 public:
  /// Throws NonConvexInput when a discrete second difference of theta falls
  /// below -tolerance. Non-converged points are dropped.
  explicit LegendreTransform(const ScgfCurve& curve, double tolerance = 1e-8);

  double operator()(double x) const;
  /// Slopes of the first and last hull segments; x outside
  /// [-slope_hi, -slope_lo] is outside the resolved range.
  double x_min() const;
  double x_max() const;
  /// Most negative second difference seen before the hull was taken.
  double worst_violation() const { return worst_violation_; }
  const std::vector<double>& hull_s() const { return s_; }

 private:
  std::vector<double> s_, theta_;
  double worst_violation_ = 0.0;
};

/// Probability density of the time-integrated quadrature per unit time, on
/// a fixed grid, normalized by the trapezoid rule.
struct Marginal {
  double alpha = 0.0;
  std::vector<double> x;
  std::vector<double> density;

  double mean() const;
  double variance() const;
  double excess_kurtosis() const;
  double integral() const;
};

/// Pi(x) proportional to exp(-time * phi_rate(x)).
Marginal rate_function(const ScgfCurve& curve, std::span<const double> x_grid, double time = 1.0);

/// Same, for an already built transform.
Marginal marginal_from(const LegendreTransform& phi, double alpha, std::span<const double> x_grid,
                       double time = 1.0);

double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace wgqed
