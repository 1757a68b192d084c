#include "wgqed/fiber_modes.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

namespace wgqed {

namespace {

double besselJ(int n, double x) { return std::cyl_bessel_j(static_cast<double>(n), x); }
double besselK(int n, double x) { return std::cyl_bessel_k(static_cast<double>(n), x); }

struct Transverse {
  double h;  // core transverse wavenumber
  double q;  // cladding decay constant
};

Transverse transverse(const FiberSpec& spec, double k, double beta) {
  const double n = spec.refractive_index;
  return {std::sqrt(k * k * n * n - beta * beta), std::sqrt(beta * beta - k * k)};
}

double characteristic(const FiberSpec& spec, double k, double beta) {
  const double n2 = spec.refractive_index * spec.refractive_index;
  const auto [h, q] = transverse(spec, k, beta);
  const double ha = h * spec.radius;
  const double qa = q * spec.radius;
  const double k1 = besselK(1, qa);
  const double k1p = -besselK(0, qa) - k1 / qa;
  const double kr = k1p / (qa * k1);
  const double lhs = besselJ(0, ha) / (ha * besselJ(1, ha));
  const double inv = 1.0 / (qa * qa) + 1.0 / (ha * ha);
  const double c = (n2 - 1.0) / (2.0 * n2);
  const double root = std::sqrt(c * c * kr * kr + beta * beta / (n2 * k * k) * inv * inv);
  const double rhs = -(n2 + 1.0) / (2.0 * n2) * kr + 1.0 / (ha * ha) - root;
  return lhs - rhs;
}

double scan_beta(double k, double n, int i, int points) {
  return k * (1.0 + (n - 1.0) * static_cast<double>(i) / static_cast<double>(points + 1));
}

// Largest-beta root on the scan, refined by bisection.
double solve_root(const FiberSpec& spec, double k) {
  const int points = kDispersionScanPoints;
  const double n = spec.refractive_index;
  auto f = [&](double beta) { return characteristic(spec, k, beta); };

  double hi = scan_beta(k, n, points, points);
  double f_hi = f(hi);
  bool bracket_found = false;
  for (int i = points - 1; i >= 1; --i) {
    const double lo = scan_beta(k, n, i, points);
    const double f_lo = f(lo);
    if (std::isfinite(f_lo) && std::isfinite(f_hi) && std::signbit(f_lo) != std::signbit(f_hi)) {
      bracket_found = true;
      auto stop = [](double a, double b) { return std::abs(b - a) <= 1e-12 * std::abs(b); };
      const auto [a, b] = boost::math::tools::bisect(f, lo, hi, stop);
      const double beta = 0.5 * (a + b);
      const double f_mid = f(beta);
      // A sign change across a pole of J0/J1 leaves |f| large at the midpoint.
      if (std::isfinite(f_mid) && std::abs(f_mid) <= std::min(std::abs(f_lo), std::abs(f_hi))) {
        return beta;
      }
    }
    hi = lo;
    f_hi = f_lo;
  }
  if (bracket_found) throw NonConvergence("HE11 root refinement did not converge to a root");
  throw NoGuidedMode("no sign change of the HE11 characteristic function in (k, k n_f)");
}

}  // namespace

void FiberSpec::validate() const {
  if (!(radius > 0.0)) throw InvalidArgument("fiber radius must be positive");
  if (!(refractive_index > 1.0)) throw InvalidArgument("fiber refractive index must exceed 1");
}

void CouplingCalibration::validate() const {
  if (!(beta_target > 0.0 && beta_target < 1.0)) {
    throw InvalidArgument("beta calibration target must lie in (0, 1)");
  }
  if (chirality_target && !(std::abs(*chirality_target) <= 1.0)) {
    throw InvalidArgument("chirality calibration target must lie in [-1, 1]");
  }
}

double he11_characteristic(const FiberSpec& spec, double wavenumber, double beta) {
  return characteristic(spec, wavenumber, beta);
}

FiberMode::FiberMode(FiberSpec spec, double wavenumber, double beta)
    : spec_(spec), k_(wavenumber), beta_(beta) {
  const auto [h, q] = transverse(spec_, k_, beta_);
  h_ = h;
  q_ = q;
  const double ha = h_ * spec_.radius;
  const double qa = q_ * spec_.radius;
  const double j1 = besselJ(1, ha);
  const double j1p = besselJ(0, ha) - j1 / ha;
  const double k1 = besselK(1, qa);
  const double k1p = -besselK(0, qa) - k1 / qa;
  s_ = (1.0 / (ha * ha) + 1.0 / (qa * qa)) / (j1p / (ha * j1) + k1p / (qa * k1));
}

FieldProfile FiberMode::profile(double r) const {
  const double a = spec_.radius;
  if (r >= a) {
    const double k0 = besselK(0, q_ * r);
    const double k2 = besselK(2, q_ * r);
    return {kI * ((1.0 - s_) * k0 + (1.0 + s_) * k2), -((1.0 - s_) * k0 - (1.0 + s_) * k2),
            cplx(2.0 * q_ / beta_ * besselK(1, q_ * r), 0.0)};
  }
  const double ratio = besselK(1, q_ * a) / besselJ(1, h_ * a);
  const double j0 = besselJ(0, h_ * r);
  const double j2 = besselJ(2, h_ * r);
  const double c = q_ / h_ * ratio;
  return {kI * c * ((1.0 - s_) * j0 - (1.0 + s_) * j2), -c * ((1.0 - s_) * j0 + (1.0 + s_) * j2),
          cplx(2.0 * q_ / beta_ * ratio * besselJ(1, h_ * r), 0.0)};
}

Vec3c FiberMode::field(double r, double phi_az, int direction, int rotation) const {
  const FieldProfile p = profile(r);
  const double c = std::cos(phi_az);
  const double s = std::sin(phi_az);
  const cplx e_phi = static_cast<double>(rotation) * p.e_phi;
  Vec3c e(p.e_r * c - e_phi * s, p.e_r * s + e_phi * c, static_cast<double>(direction) * p.e_z);
  return e * std::polar(1.0, static_cast<double>(rotation) * phi_az);
}

FiberMode solve_he11(const FiberSpec& spec) {
  spec.validate();
  const double k = units::k0;
  FiberMode mode(spec, k, solve_root(spec, k));

  const double dk = 1e-6 * k;
  mode.group_index_ = (solve_root(spec, k + dk) - solve_root(spec, k - dk)) / (2.0 * dk);

  using boost::math::quadrature::gauss_kronrod;
  const double a = spec.radius;
  const double n2 = spec.refractive_index * spec.refractive_index;
  auto density = [&](double r) {
    const FieldProfile p = mode.profile(r);
    return 2.0 * std::numbers::pi * r * (std::norm(p.e_r) + std::norm(p.e_phi) + std::norm(p.e_z));
  };
  const double inside = gauss_kronrod<double, 61>::integrate(density, 0.0, a, 15, 1e-12);
  const double outside =
      gauss_kronrod<double, 61>::integrate(density, a, a + 40.0 / mode.q_, 15, 1e-12);
  mode.norm_ = n2 * inside + outside;
  return mode;
}

std::vector<std::pair<double, double>> dispersion_scan(const FiberSpec& spec, int points) {
  spec.validate();
  const double k = units::k0;
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int i = 1; i <= points; ++i) {
    const double beta = scan_beta(k, spec.refractive_index, i, points);
    out.emplace_back(beta / k, characteristic(spec, k, beta));
  }
  return out;
}

GuidedRates single_atom_guided_rates(const FiberMode& mode, const Vec3c& dipole, double r,
                                     double phi_az, const CouplingCalibration& calibration) {
  if (r < mode.spec().radius) {
    throw InvalidPosition("atom at r = " + std::to_string(r) + " lies inside the fiber");
  }
  calibration.validate();
  auto coupling = [&](int direction) {
    double sum = 0.0;
    for (int rotation : {+1, -1}) {
      sum += std::norm(dipole.dot(mode.field(r, phi_az, direction, rotation)));
    }
    return sum;
  };
  const double forward = coupling(+1);
  const double backward = coupling(-1);

  GuidedRates rates;
  if (calibration.mode == CalibrationMode::FirstPrinciples) {
    const double k = units::k0;
    const double prefactor =
        3.0 * std::numbers::pi * mode.beta_f_prime() / (2.0 * k * k) / mode.norm();
    rates.right = prefactor * forward;
    rates.left = prefactor * backward;
    return rates;
  }
  const double total = calibration.beta_target / (1.0 - calibration.beta_target) * units::gamma;
  if (calibration.chirality_target) {
    rates.right = 0.5 * total * (1.0 + *calibration.chirality_target);
    rates.left = 0.5 * total * (1.0 - *calibration.chirality_target);
  } else {
    rates.right = total * forward / (forward + backward);
    rates.left = total * backward / (forward + backward);
  }
  return rates;
}

}  // namespace wgqed
