#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "wgqed/config.hpp"
#include "wgqed/csv.hpp"
#include "wgqed/scenarios.hpp"

using namespace wgqed;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("wgqed_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(WGQED_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string expect_config_error(const std::string& yaml) {
  try {
    parse_config(yaml, "t.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults") {
  const ScenarioConfig c = parse_config("");
  CHECK(c.fiber.radius == 0.22);
  CHECK(c.fiber.refractive_index == 1.45);
  CHECK(c.calibration.beta_target == 0.15);
  CHECK(c.atoms == 15);
  CHECK(c.spacing == 0.8);
  CHECK(c.drive.laser_angle == 1.37);
  CHECK(c.wigner.grids.angles == 64);
  CHECK(c.gaps.filter == GapFilter::SingleGap);
  CHECK(c.chain().size() == 15);
}

TEST_CASE("full document") {
  const ScenarioConfig c = parse_config(R"(
scenario: gaps
threads: 2
seed: 17
fiber: {radius_in_lambda: 0.25, refractive_index: 1.5}
calibration: {mode: beta_calibrated, beta_target: 0.2}
chain: {atoms: 3, spacing_in_lambda: 0.6, sites: [0, 2, 5], dipole: circular_plus}
drive: {rabi_in_gamma: 0.5, detuning_in_gamma: -1, laser_angle_in_rad: 1.2}
wigner: {atoms: [1], rabi_in_gamma: [0.1], angles: 32, window: ram_lak}
gaps: {total_sites: 7, atoms: 5, filter: spanning}
)");
  CHECK(c.scenario == "gaps");
  CHECK(c.threads == 2);
  CHECK(c.seed == 17);
  CHECK(c.fiber.radius == 0.25);
  CHECK(c.calibration.beta_target == 0.2);
  CHECK(c.chain().sites == std::vector<int>{0, 2, 5});
  CHECK(c.drive.detuning == -1.0);
  CHECK(c.wigner.grids.angles == 32);
  CHECK(c.wigner.grids.window == FilterWindow::RamLak);
  CHECK(c.gaps.filter == GapFilter::Spanning);
  CHECK(to_json(c)["gaps"]["filter"] == "spanning");
}

TEST_CASE("errors name the field and line") {
  CHECK(expect_config_error("fiber:\n  radius: 0.2\n").find("t.yaml:2: fiber.radius: unknown key") !=
        std::string::npos);
  CHECK(expect_config_error("chain:\n  atoms: many\n").find("chain.atoms") != std::string::npos);
  CHECK(expect_config_error("scenario: bogus\n").find("scenario") != std::string::npos);
  CHECK(expect_config_error("gaps: {filter: sometimes}\n").find("gaps.filter") != std::string::npos);
  CHECK(expect_config_error("fiber: {refractive_index: 0.8}\n").find("fiber.refractive_index") != std::string::npos);
  CHECK(expect_config_error("chain: {atoms: 2, sites: [0, 1, 2]}\n").find("chain.sites") != std::string::npos);
  CHECK(expect_config_error("drive: [1, 2\n").find("t.yaml") != std::string::npos);
}

}

TEST_SUITE("output") {

TEST_CASE("numbers round trip") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_number(v)) == v);
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(3.0) == "3");
}

TEST_CASE("csv layout") {
  const fs::path dir = scratch("csv");
  {
    CsvWriter w((dir / "a.csv").string(), {"x", "y"});
    w.row({1.5, -2.0});
    w.row(std::vector<std::string>{"a b", "0.25"});
    CHECK_THROWS(w.row({1.0}));
  }
  CHECK(slurp(dir / "a.csv") == "x,y\n1.5,-2\na b,0.25\n");
}

TEST_CASE("gap configurations") {
  CHECK(enumerate_gap_configs(7, 5).size() == 21);
  CHECK(enumerate_gap_configs(7, 5, GapFilter::Spanning).size() == 10);
  CHECK(enumerate_gap_configs(7, 5, GapFilter::SingleGap).empty());
  const auto single = enumerate_gap_configs(5, 4, GapFilter::SingleGap);
  REQUIRE(single.size() == 3);
  CHECK(single[0] == std::vector<int>{0, 1, 2, 4});
  CHECK(single[1] == std::vector<int>{0, 1, 3, 4});
  CHECK(single[2] == std::vector<int>{0, 2, 3, 4});
  for (const auto& s : enumerate_gap_configs(6, 4, GapFilter::Spanning)) {
    CHECK(s.front() == 0);
    CHECK(s.back() == 5);
  }
}

TEST_CASE("scenario run writes a manifest") {
  const fs::path dir = scratch("modes");
  ScenarioConfig c;
  c.scenario = "modes";
  c.output_dir = dir.string();
  const auto m = run_scenario(c);
  CHECK(m["software"]["version"] == kVersion);
  const auto disk = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(disk["files"] == m["files"]);
  for (const auto& f : m["files"]) CHECK(fs::exists(dir / f.get<std::string>()));
  CHECK(disk["config"]["fiber"]["radius_in_lambda"] == 0.22);
}

}

TEST_SUITE("cli") {

TEST_CASE("exit codes") {
  const fs::path dir = scratch("cli_bad");
  std::ofstream(dir / "bad.yaml") << "chain:\n  atomz: 3\n";
  CHECK(run_cli("--config " + (dir / "bad.yaml").string() + " --out " + (dir / "o").string()) == 2);
  CHECK(run_cli("--scenario nonsense") != 0);
  CHECK(run_cli("--version") == 0);
}

TEST_CASE("repeated runs are byte identical") {
  const fs::path dir = scratch("cli_det");
  std::ofstream(dir / "q.yaml") << "chain: {atoms: 6}\nspectrum: {spacing_points: 41}\n"
                                   "line: {atoms: [3, 6], detuning_points: 201}\n";
  for (const char* run : {"a", "b"}) {
    for (const char* sc : {"spectrum", "line"}) {
      REQUIRE(run_cli(fmt::format("--config {} --scenario {} --threads 2 --out {}", (dir / "q.yaml").string(), sc,
                                  (dir / run).string())) == 0);
    }
  }
  int compared = 0;
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    if (e.path().extension() != ".csv") continue;
    CHECK(slurp(e.path()) == slurp(dir / "b" / e.path().filename()));
    ++compared;
  }
  CHECK(compared >= 8);
}

}
