#include "wgqed/rate_function.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace wgqed {

LegendreTransform::LegendreTransform(const ScgfCurve& curve, double tolerance) {
  std::vector<double> s, t;
  for (std::size_t i = 0; i < curve.s.size(); ++i) {
    if (curve.converged.empty() || curve.converged[i]) {
      s.push_back(curve.s[i]);
      t.push_back(curve.theta[i]);
    }
  }
  if (s.size() < 3) throw InvalidArgument("need at least three converged theta samples");

  std::size_t worst = 0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    // slope change times the local spacing; the plain second difference on a
    // uniform grid, still meaningful once dropped points leave holes
    const double hl = s[i] - s[i - 1], hr = s[i + 1] - s[i];
    const double d2 = ((t[i + 1] - t[i]) / hr - (t[i] - t[i - 1]) / hl) * 0.5 * (hl + hr);
    if (d2 < worst_violation_) {
      worst_violation_ = d2;
      worst = i;
    }
  }
  if (worst_violation_ < -tolerance) {
    throw NonConvexInput(fmt::format("theta(s) not convex: second difference {:.3e} at s = {:.6g}", worst_violation_,
                                     s[worst]));
  }

  // monotone chain, lower hull
  for (std::size_t i = 0; i < s.size(); ++i) {
    while (s_.size() >= 2) {
      const std::size_t m = s_.size();
      const double cross = (s_[m - 1] - s_[m - 2]) * (t[i] - theta_[m - 2]) -
                           (theta_[m - 1] - theta_[m - 2]) * (s[i] - s_[m - 2]);
      if (cross > 0.0) break;
      s_.pop_back();
      theta_.pop_back();
    }
    s_.push_back(s[i]);
    theta_.push_back(t[i]);
  }
}

double LegendreTransform::x_min() const {
  const std::size_t m = s_.size();
  return -(theta_[m - 1] - theta_[m - 2]) / (s_[m - 1] - s_[m - 2]);
}

double LegendreTransform::x_max() const { return -(theta_[1] - theta_[0]) / (s_[1] - s_[0]); }

double LegendreTransform::operator()(double x) const {
  std::size_t k = 0;
  double best = -theta_[0] - x * s_[0];
  for (std::size_t i = 1; i < s_.size(); ++i) {
    const double g = -theta_[i] - x * s_[i];
    if (g > best) {
      best = g;
      k = i;
    }
  }
  if (k == 0 || k + 1 == s_.size()) return best;
  // parabola through the maximizing hull vertex and its neighbours
  const double x0 = s_[k - 1], x1 = s_[k], x2 = s_[k + 1];
  const double g0 = -theta_[k - 1] - x * x0, g1 = best, g2 = -theta_[k + 1] - x * x2;
  const double d0 = (g1 - g0) / (x1 - x0);
  const double d1 = (g2 - g1) / (x2 - x1);
  const double c = (d1 - d0) / (x2 - x0);
  if (!(c < 0.0)) return best;
  const double sm = 0.5 * (x0 + x1) - d0 / (2.0 * c);
  if (sm < x0 || sm > x2) return best;
  return std::max(best, g0 + d0 * (sm - x0) + c * (sm - x0) * (sm - x1));
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  double sum = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return sum;
}

namespace {

double moment(const Marginal& m, auto&& f) {
  std::vector<double> y(m.x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = f(m.x[i]) * m.density[i];
  return trapezoid(m.x, y);
}

}  // namespace

double Marginal::integral() const { return trapezoid(x, density); }

double Marginal::mean() const {
  return moment(*this, [](double v) { return v; }) / integral();
}

double Marginal::variance() const {
  const double mu = mean();
  return moment(*this, [mu](double v) { return (v - mu) * (v - mu); }) / integral();
}

double Marginal::excess_kurtosis() const {
  const double mu = mean();
  const double var = variance();
  const double m4 = moment(*this, [mu](double v) { return std::pow(v - mu, 4); }) / integral();
  return m4 / (var * var) - 3.0;
}

Marginal marginal_from(const LegendreTransform& phi, double alpha, std::span<const double> x_grid, double time) {
  if (x_grid.size() < 2) throw InvalidArgument("x grid needs at least two points");
  Marginal m;
  m.alpha = alpha;
  m.x.assign(x_grid.begin(), x_grid.end());
  std::vector<double> rate(m.x.size());
  double lowest = INFINITY;
  for (std::size_t i = 0; i < m.x.size(); ++i) {
    rate[i] = phi(m.x[i]);
    lowest = std::min(lowest, rate[i]);
  }
  m.density.resize(m.x.size());
  for (std::size_t i = 0; i < m.x.size(); ++i) m.density[i] = std::exp(-time * (rate[i] - lowest));
  const double norm = trapezoid(m.x, m.density);
  for (double& d : m.density) d /= norm;
  return m;
}

Marginal rate_function(const ScgfCurve& curve, std::span<const double> x_grid, double time) {
  return marginal_from(LegendreTransform(curve), curve.alpha, x_grid, time);
}

}  // namespace wgqed
