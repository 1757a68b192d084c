#include "wgqed/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace wgqed {

namespace {

class Table {
 public:
  Table(const YAML::Node& node, std::string path, const std::string& source) : node_(node), path_(std::move(path)), source_(source) {
    if (node_ && !node_.IsMap()) fail(node_, "expected a table");
  }

  ~Table() noexcept(false) {
    if (std::uncaught_exceptions() || !node_) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) fail(kv.first, "unknown key");
    }
  }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!node_ || !node_[key]) return;
    const YAML::Node v = node_[key];
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      fail(v, fmt::format("cannot parse value of '{}'", key), key);
    }
  }

  template <class T>
  void get_optional(const std::string& key, std::optional<T>& out) {
    seen_.insert(key);
    if (!node_ || !node_[key] || node_[key].IsNull()) return;
    T value{};
    get(key, value);
    out = value;
  }

  Table sub(const std::string& key) {
    seen_.insert(key);
    return Table(node_ ? node_[key] : YAML::Node(), path_.empty() ? key : path_ + "." + key, source_);
  }

  YAML::Node node(const std::string& key) const { return node_ ? node_[key] : YAML::Node(); }

  [[noreturn]] void fail(const YAML::Node& at, const std::string& what, const std::string& key = "") const {
    const std::string field = key.empty() ? (at.IsScalar() ? at.Scalar() : path_) : key;
    const std::string full = path_.empty() || field == path_ ? field : path_ + "." + field;
    throw ConfigError(fmt::format("{}:{}: {}: {}", source_, at.Mark().line + 1, full, what));
  }

 private:
  YAML::Node node_;
  std::string path_;
  const std::string& source_;
  std::set<std::string> seen_;
};

GapFilter parse_filter(const std::string& s) {
  if (s == "all") return GapFilter::All;
  if (s == "single_gap") return GapFilter::SingleGap;
  if (s == "spanning") return GapFilter::Spanning;
  throw ConfigError("gaps.filter: expected one of all, single_gap, spanning; got '" + s + "'");
}

}  // namespace

std::string to_string(GapFilter filter) {
  switch (filter) {
    case GapFilter::All: return "all";
    case GapFilter::SingleGap: return "single_gap";
    case GapFilter::Spanning: return "spanning";
  }
  return "?";
}

AtomChain ScenarioConfig::chain() const {
  AtomChain c = AtomChain::regular(atoms, spacing, surface_distance);
  if (!sites.empty()) c.sites = sites;
  c.dipole = dipole_vector();
  c.validate();
  return c;
}

Vec3c ScenarioConfig::dipole_vector() const {
  if (dipole == "circular_minus") return circular_dipole();
  if (dipole == "circular_plus") return circular_dipole().conjugate();
  if (dipole == "longitudinal") return Vec3c(0.0, 0.0, 1.0);
  if (dipole == "radial") return Vec3c(1.0, 0.0, 0.0);
  throw ConfigError("chain.dipole: expected circular_minus, circular_plus, longitudinal or radial; got '" + dipole + "'");
}

void ScenarioConfig::validate() const {
  auto check = [](bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError(field + ": " + what);
  };
  const auto& names = scenario_names();
  check(std::find(names.begin(), names.end(), scenario) != names.end(), "scenario", "unknown scenario '" + scenario + "'");
  check(fiber.radius > 0.0, "fiber.radius_in_lambda", "must be positive");
  check(fiber.refractive_index > 1.0, "fiber.refractive_index", "must exceed 1");
  check(calibration.beta_target > 0.0 && calibration.beta_target < 1.0, "calibration.beta_target", "must be in (0, 1)");
  check(!calibration.chirality_target || std::abs(*calibration.chirality_target) <= 1.0, "calibration.chirality_target",
        "must be in [-1, 1]");
  check(atoms >= 1, "chain.atoms", "must be at least 1");
  check(spacing > 0.0, "chain.spacing_in_lambda", "must be positive");
  check(surface_distance >= 0.0, "chain.surface_distance_in_lambda", "must be non-negative");
  check(drive.rabi >= 0.0, "drive.rabi_in_gamma", "must be non-negative");
  check(drive.laser_angle >= 0.0 && drive.laser_angle <= std::numbers::pi, "drive.laser_angle_in_rad", "must be in [0, pi]");
  check(spectrum.spacing_points >= 3 && spectrum.spacing_max > spectrum.spacing_min && spectrum.spacing_min > 0.0,
        "spectrum", "need spacing_points >= 3 and 0 < spacing_min < spacing_max");
  check(spectrum.max_order >= 1, "spectrum.max_order", "must be at least 1");
  check(!line.atoms.empty(), "line.atoms", "must be nonempty");
  check(line.detuning_points >= 3, "line.detuning_points", "must be at least 3");
  check(!steady.atoms.empty() && !steady.rabi.empty(), "steadystate", "atoms and rabi_in_gamma must be nonempty");
  check(!wigner.atoms.empty() && !wigner.rabi.empty(), "wigner", "atoms and rabi_in_gamma must be nonempty");
  check(gaps.atoms >= 1 && gaps.atoms <= gaps.total_sites, "gaps", "need 1 <= atoms <= total_sites");
  check(!gaps.rabi.empty(), "gaps.rabi_in_gamma", "must be nonempty");
  check(threads >= 1, "threads", "must be at least 1");
  for (int n : line.atoms) check(n >= 1, "line.atoms", "entries must be positive");
  for (int n : steady.atoms) check(n >= 1, "steadystate.atoms", "entries must be positive");
  for (int n : wigner.atoms) check(n >= 1, "wigner.atoms", "entries must be positive");
  try {
    wigner.grids.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("wigner: ") + e.what());
  }
  try {
    (void)chain();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("chain: ") + e.what());
  }
}

ScenarioConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(fmt::format("{}:{}: syntax error: {}", source, e.mark.line + 1, e.msg));
  }
  ScenarioConfig c;
  if (!root || root.IsNull()) {
    c.validate();
    return c;
  }
  {
    Table top(root, "", source);
    top.get("scenario", c.scenario);
    top.get("output_dir", c.output_dir);
    top.get("threads", c.threads);
    top.get("seed", c.seed);
    {
      Table t = top.sub("fiber");
      t.get("radius_in_lambda", c.fiber.radius);
      t.get("refractive_index", c.fiber.refractive_index);
    }
    {
      Table t = top.sub("calibration");
      std::string mode = "beta_calibrated";
      t.get("mode", mode);
      if (mode == "beta_calibrated") {
        c.calibration.mode = CalibrationMode::BetaCalibrated;
      } else if (mode == "first_principles") {
        c.calibration.mode = CalibrationMode::FirstPrinciples;
      } else {
        t.fail(t.node("mode"), "expected beta_calibrated or first_principles", "mode");
      }
      t.get("beta_target", c.calibration.beta_target);
      t.get_optional("chirality_target", c.calibration.chirality_target);
    }
    {
      Table t = top.sub("chain");
      t.get("atoms", c.atoms);
      t.get("spacing_in_lambda", c.spacing);
      t.get("surface_distance_in_lambda", c.surface_distance);
      t.get("sites", c.sites);
      t.get("dipole", c.dipole);
      if (!c.sites.empty() && t.node("atoms") && static_cast<int>(c.sites.size()) != c.atoms) {
        t.fail(t.node("sites"), "length differs from chain.atoms", "sites");
      }
      if (!c.sites.empty()) c.atoms = static_cast<int>(c.sites.size());
    }
    {
      Table t = top.sub("drive");
      t.get("rabi_in_gamma", c.drive.rabi);
      t.get("detuning_in_gamma", c.drive.detuning);
      t.get("laser_angle_in_rad", c.drive.laser_angle);
    }
    {
      Table t = top.sub("spectrum");
      t.get("spacing_min_in_lambda", c.spectrum.spacing_min);
      t.get("spacing_max_in_lambda", c.spectrum.spacing_max);
      t.get("spacing_points", c.spectrum.spacing_points);
      t.get("max_order", c.spectrum.max_order);
    }
    {
      Table t = top.sub("line");
      t.get("atoms", c.line.atoms);
      t.get("detuning_points", c.line.detuning_points);
    }
    {
      Table t = top.sub("steadystate");
      t.get("atoms", c.steady.atoms);
      t.get("rabi_in_gamma", c.steady.rabi);
      t.get("detuning_in_gamma", c.steady.detuning);
    }
    {
      Table t = top.sub("wigner");
      auto& g = c.wigner.grids;
      t.get("atoms", c.wigner.atoms);
      t.get("rabi_in_gamma", c.wigner.rabi);
      t.get("detuning_in_gamma", c.wigner.detuning);
      t.get("angles", g.angles);
      t.get("s_max", g.s_max);
      t.get("s_points", g.s_points);
      t.get("x_points", g.x_points);
      t.get("wigner_points", g.wigner_points);
      t.get("integration_time_in_inv_gamma", g.time);
      t.get("edge_rate", g.edge_rate);
      t.get("s_edge_rate", g.s_edge_rate);
      t.get("cutoff_fraction_of_nyquist", g.cutoff);
      std::string window = "hann";
      t.get("window", window);
      if (window == "hann") {
        g.window = FilterWindow::Hann;
      } else if (window == "ram_lak") {
        g.window = FilterWindow::RamLak;
      } else {
        t.fail(t.node("window"), "expected hann or ram_lak", "window");
      }
    }
    {
      Table t = top.sub("gaps");
      t.get("total_sites", c.gaps.total_sites);
      t.get("atoms", c.gaps.atoms);
      std::string filter = to_string(c.gaps.filter);
      t.get("filter", filter);
      try {
        c.gaps.filter = parse_filter(filter);
      } catch (const ConfigError&) {
        t.fail(t.node("filter"), "expected all, single_gap or spanning", "filter");
      }
      t.get("rabi_in_gamma", c.gaps.rabi);
      t.get("negativity", c.gaps.negativity);
    }
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

nlohmann::json to_json(const ScenarioConfig& c) {
  using nlohmann::json;
  const auto& g = c.wigner.grids;
  json calib{{"mode", c.calibration.mode == CalibrationMode::BetaCalibrated ? "beta_calibrated" : "first_principles"},
             {"beta_target", c.calibration.beta_target},
             {"chirality_target", c.calibration.chirality_target ? json(*c.calibration.chirality_target) : json()}};
  json chain_sites = json::array();
  for (int s : c.chain().sites) chain_sites.push_back(s);
  return json{
      {"scenario", c.scenario},
      {"fiber", {{"radius_in_lambda", c.fiber.radius}, {"refractive_index", c.fiber.refractive_index}}},
      {"calibration", calib},
      {"chain",
       {{"atoms", c.atoms},
        {"spacing_in_lambda", c.spacing},
        {"surface_distance_in_lambda", c.surface_distance},
        {"sites", chain_sites},
        {"dipole", c.dipole}}},
      {"drive",
       {{"rabi_in_gamma", c.drive.rabi},
        {"detuning_in_gamma", c.drive.detuning},
        {"laser_angle_in_rad", c.drive.laser_angle}}},
      {"spectrum",
       {{"spacing_min_in_lambda", c.spectrum.spacing_min},
        {"spacing_max_in_lambda", c.spectrum.spacing_max},
        {"spacing_points", c.spectrum.spacing_points},
        {"max_order", c.spectrum.max_order}}},
      {"line", {{"atoms", c.line.atoms}, {"detuning_points", c.line.detuning_points}}},
      {"steadystate",
       {{"atoms", c.steady.atoms}, {"rabi_in_gamma", c.steady.rabi}, {"detuning_in_gamma", c.steady.detuning}}},
      {"wigner",
       {{"atoms", c.wigner.atoms},
        {"rabi_in_gamma", c.wigner.rabi},
        {"detuning_in_gamma", c.wigner.detuning},
        {"angles", g.angles},
        {"s_max", g.s_max},
        {"s_points", g.s_points},
        {"x_points", g.x_points},
        {"wigner_points", g.wigner_points},
        {"integration_time_in_inv_gamma", g.time},
        {"edge_rate", g.edge_rate},
        {"s_edge_rate", g.s_edge_rate},
        {"window", g.window == FilterWindow::Hann ? "hann" : "ram_lak"},
        {"cutoff_fraction_of_nyquist", g.cutoff}}},
      {"gaps",
       {{"total_sites", c.gaps.total_sites},
        {"atoms", c.gaps.atoms},
        {"filter", to_string(c.gaps.filter)},
        {"rabi_in_gamma", c.gaps.rabi},
        {"negativity", c.gaps.negativity}}},
      {"output_dir", c.output_dir},
      {"threads", c.threads},
      {"seed", c.seed},
  };
}

}  // namespace wgqed
