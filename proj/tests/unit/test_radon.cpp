#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "wgqed/radon.hpp"

using namespace wgqed;

namespace {

constexpr double kVar = 0.25;  // vacuum quadrature variance

double gauss(double x, double var) { return std::exp(-x * x / (2 * var)) / std::sqrt(2 * std::numbers::pi * var); }

// Fock state |1>: W = (r^2 / var - 1) exp(-r^2 / (2 var)) / (2 pi var)
double fock1_wigner(double x, double p) {
  const double r2 = x * x + p * p;
  return (r2 / kVar - 1) * std::exp(-r2 / (2 * kVar)) / (2 * std::numbers::pi * kVar);
}

double rel_l2(const RMat& a, const RMat& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_SUITE("radon") {

TEST_CASE("Gaussian round trip") {
  const auto x = testing::linspace(-3.4, 3.4, 257);
  const Sinogram sino = gaussian_sinogram(0.0, 0.0, Eigen::Matrix2d::Identity() * kVar, 64, x);
  const WignerResult w = invert_radon(sino, {});
  RMat exact(w.x.size(), w.x.size());
  for (std::size_t i = 0; i < w.x.size(); ++i)
    for (std::size_t j = 0; j < w.x.size(); ++j) exact(i, j) = gauss(w.x[i], kVar) * gauss(w.x[j], kVar);
  CHECK(rel_l2(w.W, exact) < 0.02);
  CHECK(w.raw_integral == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(w.negativity < 1e-3);
  // 64 angles undersample the grid corners; streaks sit well below this
  CHECK(w.boundary_ratio < 1e-4);
  CHECK(sino.consistency < 1e-10);
}

TEST_CASE("displaced squeezed Gaussian peak sits within one cell") {
  const auto x = testing::linspace(-4, 4, 257);
  Eigen::Matrix2d cov;
  cov << 0.12, 0.05, 0.05, 0.5;
  const Sinogram sino = gaussian_sinogram(1.1, -0.7, cov, 64, x);
  // means from trapezoid sums on the finite grid
  CHECK(sino.x0 == doctest::Approx(1.1).epsilon(1e-4));
  CHECK(sino.p0 == doctest::Approx(-0.7).epsilon(1e-4));
  const WignerResult w = invert_radon(sino, {});
  Eigen::Index i, j;
  w.W.maxCoeff(&i, &j);
  CHECK(std::abs(w.x[i] - 1.1) <= w.spacing());
  CHECK(std::abs(w.x[j] + 0.7) <= w.spacing());
}

TEST_CASE("Fock state negativity") {
  const auto x = testing::linspace(-3.6, 3.6, 257);
  const Sinogram sino = analytic_sinogram([](double, double t) { return t * t / kVar * gauss(t, kVar); }, 64, x);
  const WignerResult w = invert_radon(sino, {});
  const double expect = 2 * (2 * std::exp(-0.5) - 1);
  CHECK(w.negativity == doctest::Approx(expect).epsilon(0.02));
  RMat exact(w.x.size(), w.x.size());
  for (std::size_t i = 0; i < w.x.size(); ++i)
    for (std::size_t j = 0; j < w.x.size(); ++j) exact(i, j) = fock1_wigner(w.x[i], w.x[j]);
  CHECK(rel_l2(w.W, exact) < 0.03);
  const std::size_t c = w.x.size() / 2;
  CHECK(w.W(c, c) < 0.0);
}

TEST_CASE("forward projection recovers the sinogram") {
  const auto x = testing::linspace(-3.4, 3.4, 257);
  const Sinogram sino = gaussian_sinogram(0.3, 0.2, Eigen::Matrix2d::Identity() * kVar, 64, x);
  const WignerResult w = invert_radon(sino, {});
  const RMat back = forward_project(w, sino.alpha, sino.x);
  CHECK(rel_l2(back, sino.density()) < 0.02);
}

TEST_CASE("too few angles") {
  const auto x = testing::linspace(-3, 3, 65);
  const Sinogram sino = gaussian_sinogram(0, 0, Eigen::Matrix2d::Identity() * kVar, 8, x);
  CHECK_THROWS_AS(invert_radon(sino, {}), InsufficientAngles);
}

TEST_CASE("ramp kernels") {
  const double fc = 10.0;
  // Ram-Lak: integral of |f| over |f| < fc is fc^2 at t = 0
  CHECK(ramp_kernel(0.0, fc, FilterWindow::RamLak) == doctest::Approx(fc * fc).epsilon(1e-12));
  // Hann tapers: half of Ram-Lak plus the shifted terms, smaller at the origin
  CHECK(ramp_kernel(0.0, fc, FilterWindow::Hann) < ramp_kernel(0.0, fc, FilterWindow::RamLak));
  CHECK(ramp_kernel(0.37, fc, FilterWindow::Hann) == doctest::Approx(ramp_kernel(-0.37, fc, FilterWindow::Hann)));
  // numerical check of the Ram-Lak closed form
  const double t = 0.013;
  double acc = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double f = -fc + 2 * fc * (i + 0.5) / n;
    acc += std::abs(f) * std::cos(2 * std::numbers::pi * f * t);
  }
  acc *= 2 * fc / n;
  CHECK(ramp_kernel(t, fc, FilterWindow::RamLak) == doctest::Approx(acc).epsilon(1e-6));
}

TEST_CASE("negativity and 2D trapezoid") {
  WignerResult w;
  w.x = testing::linspace(-1, 1, 3);
  w.W = RMat::Zero(3, 3);
  w.W(1, 1) = -2.0;
  w.W(0, 0) = 1.0;
  // |W| - W = 4 at the centre, cell weight 1
  CHECK(negativity(w) == doctest::Approx(4.0));
  CHECK(w.boundary_mass);
  CHECK(trapezoid2d(w.x, RMat::Ones(3, 3)) == doctest::Approx(4.0));
}

TEST_CASE("grid validation") {
  TomographyGrids g;
  g.angles = 0;
  CHECK_THROWS(g.validate());
  g = {};
  g.s_points = 120;  // even: s = 0 not on the grid
  CHECK_THROWS(g.validate());
}

}
