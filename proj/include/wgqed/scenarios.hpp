#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "wgqed/config.hpp"
#include "wgqed/emission.hpp"
#include "wgqed/model.hpp"
#include "wgqed/radon.hpp"
#include "wgqed/weak_drive.hpp"

namespace wgqed {

inline constexpr const char* kVersion = "0.1.0";

/// Lexicographic list of occupied-site sets of `atoms` atoms on sites
/// 0..total_sites-1. SingleGap keeps both end sites and exactly one empty
/// interior site; Spanning keeps every set with both end sites occupied.
std::vector<std::vector<int>> enumerate_gap_configs(int total_sites, int atoms, GapFilter filter = GapFilter::All);

struct SpectrumSweep {
  std::vector<double> spacing;
  RMat gamma;  // spacing points x N, descending per row
  std::vector<double> gamma_psi;
  std::vector<double> matching;
};

SpectrumSweep spectrum_sweep(const Model& model, int atoms, const DriveParams& drive, double lo, double hi,
                             int points, int max_order, int threads = 1);

struct SteadyPoint {
  EmissionRates rates;
  double residual = 0.0;
};

SteadyPoint solve_steady(const Model& model, const AtomChain& chain, const DriveParams& drive,
                         std::uint64_t seed = 0x5eed);

struct WignerRun {
  Sinogram sinogram;
  WignerResult wigner;
};

WignerRun wigner_run(const Model& model, const AtomChain& chain, const DriveParams& drive,
                     const TomographyGrids& grids, int threads = 1, std::uint64_t seed = 0x5eed);

Model model_from(const ScenarioConfig& config);

/// Runs the configured scenario into config.output_dir, writes
/// manifest.json there and returns it.
nlohmann::json run_scenario(const ScenarioConfig& config);

}  // namespace wgqed
