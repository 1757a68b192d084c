#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wgqed/fiber_modes.hpp"
#include "wgqed/geometry.hpp"
#include "wgqed/radon.hpp"

namespace wgqed {

enum class GapFilter { All, SingleGap, Spanning };

/// Everything a run depends on. Defaults are the nanofiber parameter set:
/// r = 0.22, n = 1.45, h = 0.1, beta_1 = 0.15, laser angle 1.37 rad,
/// N = 15 at a = 0.8.
struct ScenarioConfig {
  std::string scenario = "all";

  FiberSpec fiber;
  CouplingCalibration calibration;

  int atoms = 15;
  double spacing = 0.8;
  double surface_distance = 0.1;
  std::vector<int> sites;  // empty: 0..atoms-1
  std::string dipole = "circular_minus";
  DriveParams drive;

  struct Spectrum {
    double spacing_min = 0.1;
    double spacing_max = 2.0;
    int spacing_points = 381;
    int max_order = 3;
  } spectrum;

  struct Line {
    std::vector<int> atoms{2, 5, 10, 15, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    int detuning_points = 2001;
  } line;

  struct Steady {
    std::vector<int> atoms{1, 2, 3, 4, 5, 6, 7};
    std::vector<double> rabi{0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0};
    double detuning = 0.0;
  } steady;

  struct Wigner {
    std::vector<int> atoms{1, 2, 3};
    std::vector<double> rabi{0.05, 1.5};
    double detuning = 0.0;
    TomographyGrids grids;
  } wigner;

  struct Gaps {
    int total_sites = 5;
    int atoms = 4;
    GapFilter filter = GapFilter::SingleGap;
    std::vector<double> rabi{0.01, 1.5};
    bool negativity = true;
  } gaps;

  std::string output_dir = "out";
  int threads = 1;
  std::uint64_t seed = 0x5eed;

  AtomChain chain() const;
  Vec3c dipole_vector() const;
  void validate() const;
};

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"modes", "spectrum", "line", "steadystate", "wigner", "gaps", "all"};
  return names;
}

/// YAML text. Unknown keys and malformed values raise ConfigError naming
/// the field and its line.
ScenarioConfig parse_config(const std::string& text, const std::string& source = "<string>");
ScenarioConfig load_config(const std::string& path);

nlohmann::json to_json(const ScenarioConfig& config);

std::string to_string(GapFilter filter);

}  // namespace wgqed
