#include "wgqed/radon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "wgqed/parallel.hpp"

namespace wgqed {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  v.back() = hi;
  return v;
}

std::vector<double> uniform_angles(int k) {
  std::vector<double> a(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) a[static_cast<std::size_t>(i)] = kPi * i / k;
  return a;
}

// integral_0^c nu cos(w nu) d nu
double ramp_integral(double w, double c) {
  if (std::abs(w * c) < 1e-4) return c * c / 2.0 - w * w * std::pow(c, 4) / 8.0;
  return c * std::sin(w * c) / w + (std::cos(w * c) - 1.0) / (w * w);
}

double interp(const std::vector<double>& x, const std::vector<double>& y, double t) {
  const double dx = x[1] - x[0];
  const double f = (t - x.front()) / dx;
  if (f < 0.0 || f > static_cast<double>(x.size() - 1)) return 0.0;
  const std::size_t i = std::min(static_cast<std::size_t>(f), x.size() - 2);
  const double w = f - static_cast<double>(i);
  return (1.0 - w) * y[i] + w * y[i + 1];
}

// x where phi(x) = level, searching from the centre toward `edge`
double level_crossing(const LegendreTransform& phi, double centre, double edge, double level) {
  double a = centre, b = edge;
  if (phi(b) < level) return b;
  for (int it = 0; it < 200 && std::abs(b - a) > 1e-12 * (1.0 + std::abs(b)); ++it) {
    const double m = 0.5 * (a + b);
    (phi(m) < level ? a : b) = m;
  }
  return 0.5 * (a + b);
}

void fit_consistency(Sinogram& sino) {
  // normal equations for mean(alpha) = x0 cos + p0 sin
  Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  std::vector<double> means, sds;
  for (const auto& m : sino.marginals) {
    const Eigen::Vector2d r(std::cos(m.alpha), std::sin(m.alpha));
    const double mu = m.mean();
    A += r * r.transpose();
    b += mu * r;
    means.push_back(mu);
    sds.push_back(std::sqrt(m.variance()));
  }
  const Eigen::Vector2d sol = A.ldlt().solve(b);
  sino.x0 = sol[0];
  sino.p0 = sol[1];
  sino.consistency = 0.0;
  for (std::size_t k = 0; k < means.size(); ++k) {
    const double a = sino.marginals[k].alpha;
    const double resid = means[k] - (sino.x0 * std::cos(a) + sino.p0 * std::sin(a));
    sino.consistency = std::max(sino.consistency, std::abs(resid) / sds[k]);
  }
}

}  // namespace

void TomographyGrids::validate() const {
  if (angles < 1 || s_points < 3 || x_points < 3 || wigner_points < 3) throw InvalidArgument("grid sizes too small");
  if (s_points % 2 == 0) throw InvalidArgument("s grid needs an odd number of points so that it contains 0");
  if (!(s_max > 0.0) || !(time > 0.0)) throw InvalidArgument("s_max and integration time must be positive");
  if (!(cutoff > 0.0 && cutoff <= 1.0)) throw InvalidArgument("filter cutoff must be in (0, 1] of Nyquist");
}

RMat Sinogram::density() const {
  RMat out(static_cast<Eigen::Index>(marginals.size()), static_cast<Eigen::Index>(x.size()));
  for (std::size_t k = 0; k < marginals.size(); ++k) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = marginals[k].density[i];
    }
  }
  return out;
}

Sinogram sinogram(const DeformedGenerator& gen, const CMat& rho_ss, const TomographyGrids& grids, int threads) {
  grids.validate();
  Sinogram sino;
  sino.alpha = uniform_angles(grids.angles);
  const auto s_grid = linspace(-grids.s_max, grids.s_max, grids.s_points);
  const double step = s_grid[1] - s_grid[0];
  sino.curves.resize(sino.alpha.size());
  std::vector<double> lo(sino.alpha.size()), hi(sino.alpha.size()), worst(sino.alpha.size());

  parallel_for(sino.alpha.size(), threads, [&](std::size_t k) {
    ScgfCurve curve = scgf(gen, sino.alpha[k], s_grid, rho_ss);
    double s_max = grids.s_max;
    while (true) {
      const LegendreTransform phi(curve);
      if (std::min(phi(phi.x_min()), phi(phi.x_max())) >= grids.s_edge_rate) break;
      if (s_max >= grids.s_limit) {
        throw NonConvergence(fmt::format("alpha = {:.6g}: rate function still below {} at |s| = {}", sino.alpha[k],
                                         grids.s_edge_rate, s_max));
      }
      s_max = std::min(grids.s_limit, s_max + 10.0 * step);
      extend_scgf(gen, curve, s_max, step);
    }
    const LegendreTransform phi(curve);
    // centre: slope of theta at s = 0
    const auto iz = static_cast<std::size_t>(std::find(curve.s.begin(), curve.s.end(), 0.0) - curve.s.begin());
    const double centre = -(curve.theta[iz + 1] - curve.theta[iz - 1]) / (curve.s[iz + 1] - curve.s[iz - 1]);
    lo[k] = level_crossing(phi, centre, phi.x_min(), grids.edge_rate);
    hi[k] = level_crossing(phi, centre, phi.x_max(), grids.edge_rate);
    worst[k] = phi.worst_violation();
    sino.curves[k] = std::move(curve);
  });

  double X = 0.0;
  for (std::size_t k = 0; k < lo.size(); ++k) X = std::max({X, std::abs(lo[k]), std::abs(hi[k])});
  sino.worst_convexity_violation = *std::min_element(worst.begin(), worst.end());
  sino.x = linspace(-X, X, grids.x_points);
  sino.marginals.resize(sino.alpha.size());
  parallel_for(sino.alpha.size(), threads, [&](std::size_t k) {
    sino.marginals[k] = marginal_from(LegendreTransform(sino.curves[k]), sino.alpha[k], sino.x, grids.time);
  });
  fit_consistency(sino);
  return sino;
}

Sinogram analytic_sinogram(const std::function<double(double, double)>& density, int angles,
                           std::span<const double> x_grid) {
  Sinogram sino;
  sino.alpha = uniform_angles(angles);
  sino.x.assign(x_grid.begin(), x_grid.end());
  for (double a : sino.alpha) {
    Marginal m;
    m.alpha = a;
    m.x = sino.x;
    for (double x : sino.x) m.density.push_back(density(a, x));
    sino.marginals.push_back(std::move(m));
  }
  fit_consistency(sino);
  return sino;
}

Sinogram gaussian_sinogram(double x0, double p0, const Eigen::Matrix2d& cov, int angles,
                           std::span<const double> x_grid) {
  return analytic_sinogram(
      [&](double a, double x) {
        const Eigen::Vector2d n(std::cos(a), std::sin(a));
        const double mu = x0 * n[0] + p0 * n[1];
        const double var = n.dot(cov * n);
        return std::exp(-(x - mu) * (x - mu) / (2.0 * var)) / std::sqrt(2.0 * kPi * var);
      },
      angles, x_grid);
}

double ramp_kernel(double t, double cutoff, FilterWindow window) {
  const double w = 2.0 * kPi * t;
  if (window == FilterWindow::RamLak) return 2.0 * ramp_integral(w, cutoff);
  const double shift = kPi / cutoff;
  return ramp_integral(w, cutoff) + 0.5 * (ramp_integral(w + shift, cutoff) + ramp_integral(w - shift, cutoff));
}

double trapezoid2d(const std::vector<double>& x, const RMat& f) {
  const Eigen::Index n = f.rows();
  const double dx = x[1] - x[0];
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      sum += wi * wj * f(i, j);
    }
  }
  return sum * dx * dx;
}

WignerResult invert_radon(const Sinogram& sino, const TomographyGrids& grids) {
  grids.validate();
  const std::size_t K = sino.marginals.size();
  if (K < 16) throw InsufficientAngles(fmt::format("filtered backprojection needs >= 16 angles, got {}", K));
  for (std::size_t k = 0; k < K; ++k) {
    if (std::abs(sino.alpha[k] - kPi * static_cast<double>(k) / static_cast<double>(K)) > 1e-9) {
      throw InvalidArgument("angles must be uniform over [0, pi)");
    }
  }
  const std::size_t n = sino.x.size();
  const double dx = sino.x[1] - sino.x[0];
  const double cutoff = grids.cutoff / (2.0 * dx);
  // The filtered projections have 1/t^2 tails; backprojecting onto the
  // corners of the square grid needs them out to sqrt(2) times the extent.
  const double reach = std::sqrt(2.0) * std::max(std::abs(sino.x.front()), std::abs(sino.x.back()));
  const std::size_t pad = static_cast<std::size_t>(std::ceil((reach - sino.x.back()) / dx)) + 1;
  const std::size_t np = n + 2 * pad;
  std::vector<double> t_axis(np);
  for (std::size_t i = 0; i < np; ++i) t_axis[i] = sino.x.front() + (static_cast<double>(i) - static_cast<double>(pad)) * dx;

  std::vector<double> kernel(n + np - 1);
  for (std::size_t m = 0; m < kernel.size(); ++m) {
    const double t = (static_cast<double>(m) - static_cast<double>(n - 1 + pad)) * dx;
    kernel[m] = ramp_kernel(t, cutoff, grids.window);
  }
  std::vector<std::vector<double>> filtered(K, std::vector<double>(np));
  for (std::size_t k = 0; k < K; ++k) {
    const auto& p = sino.marginals[k].density;
    for (std::size_t i = 0; i < np; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += kernel[i + n - 1 - j] * p[j];
      filtered[k][i] = dx * acc;
    }
  }

  WignerResult out;
  const int points = grids.wigner_points;
  out.x = linspace(sino.x.front(), sino.x.back(), points);
  out.W = RMat::Zero(points, points);
  for (std::size_t k = 0; k < K; ++k) {
    const double c = std::cos(sino.alpha[k]), s = std::sin(sino.alpha[k]);
    for (int i = 0; i < points; ++i) {
      for (int j = 0; j < points; ++j) out.W(i, j) += interp(t_axis, filtered[k], out.x[i] * c + out.x[j] * s);
    }
  }
  out.W *= kPi / static_cast<double>(K);
  out.raw_integral = trapezoid2d(out.x, out.W);
  out.W /= out.raw_integral;
  negativity(out);
  return out;
}

RMat forward_project(const WignerResult& w, std::span<const double> alpha, std::span<const double> x_grid) {
  const double dx = w.spacing();
  const double x0 = w.x.front();
  const auto n = static_cast<Eigen::Index>(w.x.size());
  auto sample = [&](double x, double p) {
    const double fx = (x - x0) / dx, fp = (p - x0) / dx;
    if (fx < 0.0 || fp < 0.0 || fx > n - 1 || fp > n - 1) return 0.0;
    const auto i = std::min<Eigen::Index>(static_cast<Eigen::Index>(fx), n - 2);
    const auto j = std::min<Eigen::Index>(static_cast<Eigen::Index>(fp), n - 2);
    const double u = fx - i, v = fp - j;
    return (1 - u) * (1 - v) * w.W(i, j) + u * (1 - v) * w.W(i + 1, j) + (1 - u) * v * w.W(i, j + 1) +
           u * v * w.W(i + 1, j + 1);
  };
  const double reach = std::sqrt(2.0) * std::max(std::abs(w.x.front()), std::abs(w.x.back()));
  const int m = static_cast<int>(std::ceil(reach / dx));
  RMat out(static_cast<Eigen::Index>(alpha.size()), static_cast<Eigen::Index>(x_grid.size()));
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    const double c = std::cos(alpha[k]), s = std::sin(alpha[k]);
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
      const double t = x_grid[i];
      double acc = 0.0;
      for (int q = -m; q <= m; ++q) {
        const double u = q * dx;
        acc += sample(t * c - u * s, t * s + u * c);
      }
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = acc * dx;
    }
  }
  return out;
}

double negativity(WignerResult& w) {
  const RMat neg = w.W.cwiseAbs() - w.W;
  w.negativity = trapezoid2d(w.x, neg);
  const Eigen::Index n = w.W.rows();
  double edge = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    edge = std::max({edge, std::abs(w.W(i, 0)), std::abs(w.W(i, n - 1)), std::abs(w.W(0, i)), std::abs(w.W(n - 1, i))});
  }
  const double peak = w.W.cwiseAbs().maxCoeff();
  w.boundary_ratio = peak > 0.0 ? edge / peak : 0.0;
  w.boundary_mass = w.boundary_ratio > 1e-6;
  return w.negativity;
}

}  // namespace wgqed
