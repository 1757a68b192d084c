#include "wgqed/geometry.hpp"

#include <cmath>
#include <string>

namespace wgqed {

Vec3c circular_dipole() {
  return Vec3c(cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, -1.0)) / std::sqrt(2.0);
}

AtomChain AtomChain::regular(int atoms, double spacing, double surface_distance) {
  AtomChain chain;
  chain.spacing = spacing;
  chain.surface_distance = surface_distance;
  chain.sites.resize(static_cast<std::size_t>(std::max(atoms, 0)));
  for (int j = 0; j < atoms; ++j) chain.sites[static_cast<std::size_t>(j)] = j;
  return chain;
}

std::vector<double> AtomChain::positions() const {
  std::vector<double> z;
  z.reserve(sites.size());
  for (int s : sites) z.push_back(spacing * s);
  return z;
}

AtomChain AtomChain::shifted(int offset) const {
  AtomChain out = *this;
  for (int& s : out.sites) s += offset;
  return out;
}

void AtomChain::validate() const {
  if (sites.empty()) throw InvalidArgument("atom chain must contain at least one atom");
  if (!(spacing > 0.0)) throw InvalidArgument("lattice spacing must be positive");
  if (!(surface_distance >= 0.0)) throw InvalidArgument("surface distance must be non-negative");
  for (std::size_t i = 1; i < sites.size(); ++i) {
    if (sites[i] <= sites[i - 1]) {
      throw InvalidArgument("occupied sites must be strictly increasing (site " +
                            std::to_string(sites[i]) + ")");
    }
  }
  if (std::abs(dipole.norm() - 1.0) > 1e-12) throw InvalidArgument("dipole must be a unit vector");
}

void DriveParams::validate() const {
  if (!(rabi >= 0.0)) throw InvalidArgument("Rabi frequency must be non-negative");
  if (!std::isfinite(detuning)) throw InvalidArgument("detuning must be finite");
  if (!(laser_angle >= 0.0 && laser_angle <= std::numbers::pi)) {
    throw InvalidArgument("laser angle must lie in [0, pi]");
  }
}

CVec drive_phases(const AtomChain& chain, const DriveParams& drive) {
  const auto z = chain.positions();
  const double kz = units::k0 * std::cos(drive.laser_angle);
  CVec u(static_cast<Eigen::Index>(z.size()));
  for (std::size_t j = 0; j < z.size(); ++j) u[static_cast<Eigen::Index>(j)] = std::polar(1.0, kz * z[j]);
  return u;
}

}  // namespace wgqed
