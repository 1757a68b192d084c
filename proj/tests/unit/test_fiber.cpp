#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "wgqed/fiber_modes.hpp"

using namespace wgqed;

namespace {

// Hybrid-mode eigenvalue equation for l = 1 written out from Bessel
// functions directly, independent of the library's characteristic function.
double hybrid_l1(double a, double n1, double k, double beta) {
  const double h = std::sqrt(k * k * n1 * n1 - beta * beta);
  const double q = std::sqrt(beta * beta - k * k);
  const double u = h * a, w = q * a;
  const double jp = 0.5 * (std::cyl_bessel_j(0.0, u) - std::cyl_bessel_j(2.0, u));
  const double kp = -0.5 * (std::cyl_bessel_k(0.0, w) + std::cyl_bessel_k(2.0, w));
  const double J = jp / (u * std::cyl_bessel_j(1.0, u));
  const double K = kp / (w * std::cyl_bessel_k(1.0, w));
  const double rhs = std::pow(beta / k, 2) * std::pow(1.0 / (u * u) + 1.0 / (w * w), 2);
  return (J + K) * (n1 * n1 * J + K) - rhs;
}

double bisect(auto f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("fiber") {

TEST_CASE("HE11 root lies in the guidance window and matches an independent root finder") {
  const FiberSpec spec{0.22, 1.45};
  const FiberMode mode = solve_he11(spec);
  const double k = units::k0;
  CHECK(mode.beta_f() > k);
  CHECK(mode.beta_f() <= k * 1.45);
  // single-mode fiber: bracket the root near the top of the window
  const double ref = bisect([&](double b) { return hybrid_l1(0.22, 1.45, k, b); }, k * 1.0001, k * 1.2);
  CHECK(mode.beta_f() == doctest::Approx(ref).epsilon(1e-9));
  CHECK(mode.effective_index() == doctest::Approx(1.0506).epsilon(5e-3));
}

TEST_CASE("thick fiber approaches the core index") {
  const FiberMode mode = solve_he11({10.0, 1.45});
  CHECK(mode.effective_index() > 1.45 - 1e-3);
  CHECK(mode.effective_index() <= 1.45);
}

TEST_CASE("group index from finite differences of the dispersion") {
  // beta(k (1 + e)) = k (1 + e) n_eff(a (1 + e)) in wavelength units
  const double a = 0.22, e = 1e-5;
  const double np = solve_he11({a * (1 + e), 1.45}).effective_index();
  const double nm = solve_he11({a * (1 - e), 1.45}).effective_index();
  const double fd = ((1 + e) * np - (1 - e) * nm) / (2 * e);
  CHECK(solve_he11({a, 1.45}).beta_f_prime() == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("invalid fiber parameters are rejected") {
  CHECK_THROWS_AS(FiberSpec({-0.1, 1.45}).validate(), InvalidArgument);
  CHECK_THROWS_AS(FiberSpec({0.22, 0.9}).validate(), InvalidArgument);
}

TEST_CASE("calibrated rates reproduce the target beta factor") {
  const auto& m = testing::nanofiber();
  CHECK(m.rates.beta_factor() == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(m.rates.right > m.rates.left);
}

TEST_CASE("chirality from the field projections of the mode profile") {
  const auto& m = testing::nanofiber();
  const double r = 0.22 + 0.1;
  const FieldProfile e = m.mode.profile(r);
  const Vec3c d = circular_dipole();
  auto rate = [&](int f) {
    double acc = 0.0;
    for (int p : {1, -1}) {
      // x radial, y azimuthal, z axial at phi = 0
      const Vec3c field(e.e_r, static_cast<double>(p) * e.e_phi, static_cast<double>(f) * e.e_z);
      acc += std::norm(d.dot(field));  // conj(d) . e
    }
    return acc;
  };
  const double chi = (rate(1) - rate(-1)) / (rate(1) + rate(-1));
  CHECK(m.rates.chirality() == doctest::Approx(chi).epsilon(1e-9));
  CHECK(chi == doctest::Approx(0.72).epsilon(0.01));
}

TEST_CASE("mirror dipole swaps the propagation direction") {
  const auto plus = make_model({}, {}, 0.1, circular_dipole().conjugate());
  const auto& minus = testing::nanofiber();
  CHECK(plus.rates.right == doctest::Approx(minus.rates.left).epsilon(1e-10));
  CHECK(plus.rates.left == doctest::Approx(minus.rates.right).epsilon(1e-10));
}

TEST_CASE("dispersion scan brackets the HE11 root") {
  const FiberSpec spec{0.22, 1.45};
  const auto scan = dispersion_scan(spec, 400);
  const double nb = solve_he11(spec).effective_index();
  int crossings = 0;
  for (std::size_t i = 1; i < scan.size(); ++i) {
    if ((scan[i - 1].second < 0) != (scan[i].second < 0) && scan[i - 1].first <= nb && nb <= scan[i].first) ++crossings;
  }
  CHECK(crossings == 1);
}

}
