#include "wgqed/model.hpp"

namespace wgqed {

Model make_model(const FiberSpec& fiber, const CouplingCalibration& calibration, double surface_distance,
                 const Vec3c& dipole) {
  FiberMode mode = solve_he11(fiber);
  const GuidedRates rates =
      single_atom_guided_rates(mode, dipole, fiber.radius + surface_distance, 0.0, calibration);
  return Model{std::move(mode), rates, surface_distance, dipole};
}

CouplingKernels Model::kernels(const AtomChain& chain) const {
  if (chain.surface_distance != surface_distance || chain.dipole != dipole) {
    throw InvalidArgument("chain geometry differs from the one the guided rates were computed for");
  }
  return assemble(chain, mode, rates);
}

AtomChain Model::chain(std::vector<int> sites, double spacing) const {
  AtomChain c;
  c.spacing = spacing;
  c.sites = std::move(sites);
  c.surface_distance = surface_distance;
  c.dipole = dipole;
  c.validate();
  return c;
}

AtomChain Model::regular_chain(int atoms, double spacing) const {
  AtomChain c = AtomChain::regular(atoms, spacing, surface_distance);
  c.dipole = dipole;
  c.validate();
  return c;
}

}  // namespace wgqed
