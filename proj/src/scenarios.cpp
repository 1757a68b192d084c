#include "wgqed/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>

#include <fmt/format.h>

#include "wgqed/csv.hpp"
#include "wgqed/deformed.hpp"
#include "wgqed/lindblad.hpp"
#include "wgqed/parallel.hpp"
#include "wgqed/spectral.hpp"

namespace wgqed {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::vector<int>> enumerate_gap_configs(int total_sites, int atoms, GapFilter filter) {
  if (atoms < 0 || atoms > total_sites) throw InvalidArgument("need 0 <= atoms <= total_sites");
  std::vector<std::vector<int>> out;
  std::vector<int> pick(static_cast<std::size_t>(atoms));
  for (int i = 0; i < atoms; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    const bool spans = atoms > 0 && pick.front() == 0 && pick.back() == total_sites - 1;
    bool keep = true;
    if (filter == GapFilter::Spanning) keep = spans;
    if (filter == GapFilter::SingleGap) keep = spans && atoms == total_sites - 1;
    if (keep) out.push_back(pick);
    // next combination
    int i = atoms - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == total_sites - atoms + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < atoms; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

SpectrumSweep spectrum_sweep(const Model& model, int atoms, const DriveParams& drive, double lo, double hi, int points,
                             int max_order, int threads) {
  SpectrumSweep out;
  out.spacing.resize(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) out.spacing[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  out.gamma.resize(points, atoms);
  out.gamma_psi.resize(static_cast<std::size_t>(points));
  parallel_for(static_cast<std::size_t>(points), threads, [&](std::size_t i) {
    const AtomChain chain = model.regular_chain(atoms, out.spacing[i]);
    const CouplingKernels k = model.kernels(chain);
    const CVec psi = spin_wave(chain, drive);
    const CollectiveSpectrum spec = decay_spectrum(k, &psi);
    out.gamma.row(static_cast<Eigen::Index>(i)) = spec.gamma.transpose();
    out.gamma_psi[i] = effective_decay_rate(spec, psi);
  });
  out.matching = matching_lattice_constants(model.mode, drive.laser_angle, max_order, lo, hi);
  return out;
}

SteadyPoint solve_steady(const Model& model, const AtomChain& chain, const DriveParams& drive, std::uint64_t seed) {
  const CouplingKernels k = model.kernels(chain);
  const Liouvillian L = build_liouvillian(k, chain, drive);
  const SteadyState ss = steady_state(L, k, SteadyMethod::Auto, seed);
  return {ss.rates, ss.residual};
}

WignerRun wigner_run(const Model& model, const AtomChain& chain, const DriveParams& drive,
                     const TomographyGrids& grids, int threads, std::uint64_t seed) {
  const CouplingKernels k = model.kernels(chain);
  const Liouvillian L = build_liouvillian(k, chain, drive);
  const CMat rho = steady_density(L, SteadyMethod::Auto, seed);
  const Register reg(static_cast<int>(chain.size()));
  const DeformedGenerator gen(L, jump_operator(right_jump_amplitudes(k, chain, model.mode.beta_f()), reg));
  WignerRun run;
  run.sinogram = sinogram(gen, rho, grids, threads);
  run.wigner = invert_radon(run.sinogram, grids);
  return run;
}

Model model_from(const ScenarioConfig& config) {
  return make_model(config.fiber, config.calibration, config.surface_distance, config.dipole_vector());
}

namespace {

std::string tag(double v) { return fmt::format("{:g}", v); }

json rates_json(const EmissionRates& r) {
  return {{"gamma_R", r.right}, {"gamma_L", r.left}, {"gamma_u", r.unguided}, {"beta", r.beta()}, {"chi", r.chirality()}};
}

class Output {
 public:
  explicit Output(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

  CsvWriter csv(const std::string& name, const std::vector<std::string>& header) {
    std::lock_guard lock(mutex_);
    files_.push_back(name);
    return CsvWriter((dir_ / name).string(), header);
  }

  json files() const { return files_; }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
  std::mutex mutex_;
};

json run_modes(const ScenarioConfig& c, const Model& model, Output& out) {
  const auto scan = dispersion_scan(c.fiber);
  {
    auto w = out.csv("dispersion.csv", {"beta_over_k", "characteristic"});
    for (const auto& [b, f] : scan) w.row({b, f});
  }
  {
    auto w = out.csv("mode_profile.csv", {"r_in_lambda", "abs_e_r", "abs_e_phi", "abs_e_z"});
    const double a = c.fiber.radius;
    for (int i = 0; i <= 400; ++i) {
      const double r = 3.0 * a * i / 400.0 + 1e-9;
      const FieldProfile p = model.mode.profile(r);
      const double s = 1.0 / std::sqrt(model.mode.norm());
      w.row({r, std::abs(p.e_r) * s, std::abs(p.e_phi) * s, std::abs(p.e_z) * s});
    }
  }
  const auto& m = model.mode;
  return {{"beta_f", m.beta_f()},
          {"effective_index", m.effective_index()},
          {"lambda_f", m.lambda_f()},
          {"group_index", m.beta_f_prime()},
          {"gamma_R1", model.rates.right},
          {"gamma_L1", model.rates.left},
          {"beta_1", model.rates.beta_factor()},
          {"chi_1", model.rates.chirality()}};
}

void write_matrix(Output& out, const std::string& name, const CMat& m) {
  std::vector<std::string> header;
  for (Eigen::Index j = 0; j < m.cols(); ++j) header.push_back(fmt::format("col{}", j));
  auto re = out.csv(name + "_real.csv", header);
  auto im = out.csv(name + "_imag.csv", header);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> r(static_cast<std::size_t>(m.cols())), q(r.size());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      r[static_cast<std::size_t>(j)] = m(i, j).real();
      q[static_cast<std::size_t>(j)] = m(i, j).imag();
    }
    re.row(r);
    im.row(q);
  }
}

json run_spectrum(const ScenarioConfig& c, const Model& model, Output& out) {
  const auto sweep = spectrum_sweep(model, c.atoms, c.drive, c.spectrum.spacing_min, c.spectrum.spacing_max,
                                    c.spectrum.spacing_points, c.spectrum.max_order, c.threads);
  {
    std::vector<std::string> header{"spacing_in_lambda", "gamma_psi"};
    for (int n = 1; n <= c.atoms; ++n) header.push_back(fmt::format("gamma_{}", n));
    auto w = out.csv("spectrum.csv", header);
    for (std::size_t i = 0; i < sweep.spacing.size(); ++i) {
      std::vector<double> row{sweep.spacing[i], sweep.gamma_psi[i]};
      for (int n = 0; n < c.atoms; ++n) row.push_back(sweep.gamma(static_cast<Eigen::Index>(i), n));
      w.row(row);
    }
  }
  {
    auto w = out.csv("matching.csv", {"order", "spacing_in_lambda"});
    for (std::size_t m = 0; m < sweep.matching.size(); ++m) w.row({static_cast<double>(m + 1), sweep.matching[m]});
  }
  const AtomChain chain = c.chain();
  const CouplingKernels k = model.kernels(chain);
  const CVec psi = spin_wave(chain, c.drive);
  const CollectiveSpectrum spec = decay_spectrum(k, &psi);
  {
    auto w = out.csv("interaction.csv", {"n", "v_n", "overlap_psi"});
    for (Eigen::Index n = 0; n < spec.v.size(); ++n) {
      w.row({static_cast<double>(n + 1), spec.v[n], std::norm(spec.C.row(n).dot(psi.conjugate()))});
    }
  }
  write_matrix(out, "kernel_V", k.V());
  write_matrix(out, "kernel_G", k.G());
  return {{"matching_spacings", sweep.matching},
          {"gamma_psi_at_config", effective_decay_rate(spec, psi)},
          {"max_gamma_at_config", spec.gamma[0]}};
}

json run_line(const ScenarioConfig& c, const Model& model, Output& out) {
  json summary = json::array();
  std::vector<LineScan> scans(c.line.atoms.size());
  parallel_for(scans.size(), c.threads, [&](std::size_t i) {
    const AtomChain chain = model.regular_chain(c.line.atoms[i], c.spacing);
    const CouplingKernels k = model.kernels(chain);
    const auto grid = default_detuning_grid(decay_spectrum(k), c.line.detuning_points);
    scans[i] = emission_line(k, chain, c.drive, grid);
  });
  const double r2 = c.drive.rabi * c.drive.rabi;
  auto split = out.csv("splitting.csv", {"atoms", "splitting_in_gamma", "peak_gamma_R", "peak_gamma_R_per_rabi2"});
  for (std::size_t i = 0; i < scans.size(); ++i) {
    const auto& s = scans[i];
    const int n = c.line.atoms[i];
    auto w = out.csv(fmt::format("line_N{}.csv", n), {"detuning_in_gamma", "gamma_R", "gamma_L", "gamma_u", "beta",
                                                      "chi", "gamma_R_per_rabi2"});
    double peak = 0.0;
    for (std::size_t j = 0; j < s.detunings.size(); ++j) {
      const auto& r = s.rates[j];
      peak = std::max(peak, r.right);
      w.row({s.detunings[j], r.right, r.left, r.unguided, r.beta(), r.chirality(), r.right / r2});
    }
    const double delta = s.splitting.value_or(std::nan(""));
    split.row({static_cast<double>(n), delta, peak, peak / r2});
    summary.push_back({{"atoms", n}, {"splitting", s.splitting ? json(*s.splitting) : json()}, {"peak_gamma_R", peak}});
  }
  // detuning vs lattice constant map for the configured N
  {
    const int points = 201;
    std::vector<double> detunings(points);
    for (int j = 0; j < points; ++j) detunings[static_cast<std::size_t>(j)] = -10.0 + 20.0 * j / (points - 1);
    const int na = c.spectrum.spacing_points;
    std::vector<LineScan> rows(static_cast<std::size_t>(na));
    std::vector<double> spacing(static_cast<std::size_t>(na));
    parallel_for(rows.size(), c.threads, [&](std::size_t i) {
      spacing[i] = c.spectrum.spacing_min + (c.spectrum.spacing_max - c.spectrum.spacing_min) * static_cast<double>(i) / (na - 1);
      const AtomChain chain = model.regular_chain(c.atoms, spacing[i]);
      rows[i] = emission_line(model.kernels(chain), chain, c.drive, detunings);
    });
    auto w = out.csv("line_map.csv", {"spacing_in_lambda", "detuning_in_gamma", "gamma_R_per_rabi2"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < detunings.size(); ++j) w.row({spacing[i], detunings[j], rows[i].rates[j].right / r2});
    }
  }
  return {{"lines", summary}, {"rabi_in_gamma", c.drive.rabi}};
}

json run_steadystate(const ScenarioConfig& c, const Model& model, Output& out) {
  struct Task {
    int atoms;
    double rabi;
  };
  std::vector<Task> tasks;
  for (double r : c.steady.rabi) tasks.push_back({1, r});
  for (int n : c.steady.atoms) {
    if (n == 1) continue;
    for (double r : c.steady.rabi) tasks.push_back({n, r});
  }
  std::vector<SteadyPoint> res(tasks.size());
  parallel_for(tasks.size(), c.threads, [&](std::size_t i) {
    DriveParams d = c.drive;
    d.rabi = tasks[i].rabi;
    d.detuning = c.steady.detuning;
    res[i] = solve_steady(model, model.regular_chain(tasks[i].atoms, c.spacing), d, c.seed);
  });
  auto w = out.csv("steadystate.csv", {"rabi_in_gamma", "atoms", "gamma_R", "gamma_L", "gamma_u", "beta", "chi",
                                       "gamma_R_normalized", "residual"});
  double worst = 0.0;
  for (int n : c.steady.atoms) {
    for (std::size_t ir = 0; ir < c.steady.rabi.size(); ++ir) {
      const std::size_t idx = std::find_if(tasks.begin(), tasks.end(), [&](const Task& t) {
                                return t.atoms == n && t.rabi == c.steady.rabi[ir];
                              }) - tasks.begin();
      const auto& r = res[idx].rates;
      const double single = res[ir].rates.right;
      worst = std::max(worst, res[idx].residual);
      w.row({c.steady.rabi[ir], static_cast<double>(n), r.right, r.left, r.unguided, r.beta(), r.chirality(),
             r.right / (n * single), res[idx].residual});
    }
  }
  return {{"normalization", "gamma_R_normalized = gamma_R / (N * gamma_R at N = 1, same rabi)"},
          {"worst_residual", worst}};
}

json wigner_files(const ScenarioConfig& c, const WignerRun& run, Output& out, const std::string& stem) {
  {
    auto w = out.csv("sinogram_" + stem + ".csv", {"alpha", "x", "density"});
    for (const auto& m : run.sinogram.marginals) {
      for (std::size_t i = 0; i < m.x.size(); ++i) w.row({m.alpha, m.x[i], m.density[i]});
    }
  }
  {
    auto w = out.csv("scgf_" + stem + ".csv", {"alpha", "s", "theta", "converged"});
    for (const auto& curve : run.sinogram.curves) {
      for (std::size_t i = 0; i < curve.s.size(); ++i) {
        w.row({curve.alpha, curve.s[i], curve.theta[i], curve.converged[i] ? 1.0 : 0.0});
      }
    }
  }
  {
    auto w = out.csv("wigner_" + stem + ".csv", {"x", "p", "W"});
    const auto& x = run.wigner.x;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < x.size(); ++j) {
        w.row({x[i], x[j], run.wigner.W(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
      }
    }
  }
  double kurt = 0.0, s_max = 0.0;
  bool converged = true;
  for (const auto& m : run.sinogram.marginals) kurt = std::max(kurt, std::abs(m.excess_kurtosis()));
  for (const auto& cv : run.sinogram.curves) {
    s_max = std::max(s_max, cv.s.back());
    converged = converged && cv.all_converged();
  }
  (void)c;
  return {{"negativity", run.wigner.negativity},
          {"raw_integral", run.wigner.raw_integral},
          {"boundary_mass_warning", run.wigner.boundary_mass},
          {"boundary_ratio", run.wigner.boundary_ratio},
          {"consistency", run.sinogram.consistency},
          {"x0", run.sinogram.x0},
          {"p0", run.sinogram.p0},
          {"max_abs_excess_kurtosis", kurt},
          {"x_extent", run.sinogram.x.back()},
          {"s_max_used", s_max},
          {"all_scgf_converged", converged},
          {"worst_convexity_violation", run.sinogram.worst_convexity_violation}};
}

json run_wigner(const ScenarioConfig& c, const Model& model, Output& out) {
  json results = json::array();
  auto w = out.csv("negativity.csv", {"atoms", "rabi_in_gamma", "negativity", "consistency", "boundary_ratio"});
  for (int n : c.wigner.atoms) {
    for (double r : c.wigner.rabi) {
      DriveParams d = c.drive;
      d.rabi = r;
      d.detuning = c.wigner.detuning;
      const WignerRun run = wigner_run(model, model.regular_chain(n, c.spacing), d, c.wigner.grids, c.threads, c.seed);
      const std::string stem = fmt::format("N{}_rabi{}", n, tag(r));
      json item = wigner_files(c, run, out, stem);
      if (run.wigner.boundary_mass) {
        fmt::print(stderr, "warning: {}: Wigner grid edge carries {:.2e} of the peak\n", stem, run.wigner.boundary_ratio);
      }
      item["atoms"] = n;
      item["rabi_in_gamma"] = r;
      w.row({static_cast<double>(n), r, run.wigner.negativity, run.sinogram.consistency, run.wigner.boundary_ratio});
      results.push_back(item);
    }
  }
  return {{"runs", results}};
}

json run_gaps(const ScenarioConfig& c, const Model& model, Output& out) {
  std::vector<std::vector<int>> configs{};
  {
    std::vector<int> full(static_cast<std::size_t>(c.gaps.atoms));
    for (int i = 0; i < c.gaps.atoms; ++i) full[static_cast<std::size_t>(i)] = i;
    configs.push_back(full);
  }
  for (auto& s : enumerate_gap_configs(c.gaps.total_sites, c.gaps.atoms, c.gaps.filter)) configs.push_back(s);
  struct Row {
    SteadyPoint steady;
    double negativity = std::nan("");
  };
  const std::size_t nr = c.gaps.rabi.size();
  std::vector<Row> rows(configs.size() * nr);
  // tomography runs parallelize internally over angles
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& sites = configs[i / nr];
    DriveParams d = c.drive;
    d.rabi = c.gaps.rabi[i % nr];
    d.detuning = 0.0;
    const AtomChain chain = model.chain(sites, c.spacing);
    rows[i].steady = solve_steady(model, chain, d, c.seed);
    if (c.gaps.negativity) {
      rows[i].negativity = wigner_run(model, chain, d, c.wigner.grids, c.threads, c.seed).wigner.negativity;
    }
  }
  auto w = out.csv("gaps.csv", {"config", "kind", "sites", "rabi_in_gamma", "gamma_R", "gamma_L", "gamma_u", "beta",
                                "chi", "negativity"});
  json items = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t ci = i / nr;
    std::string sites;
    for (int s : configs[ci]) sites += (sites.empty() ? "" : " ") + std::to_string(s);
    const auto& r = rows[i].steady.rates;
    w.row({std::to_string(ci), ci == 0 ? "gapless" : "gap", sites, format_number(c.gaps.rabi[i % nr]),
           format_number(r.right), format_number(r.left), format_number(r.unguided), format_number(r.beta()),
           format_number(r.chirality()), format_number(rows[i].negativity)});
    json item = rates_json(r);
    item["config"] = ci;
    item["sites"] = configs[ci];
    item["rabi_in_gamma"] = c.gaps.rabi[i % nr];
    item["negativity"] = c.gaps.negativity ? json(rows[i].negativity) : json();
    items.push_back(item);
  }
  return {{"configurations", items}};
}

}  // namespace

json run_scenario(const ScenarioConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  Output out(config.output_dir);
  const Model model = model_from(config);
  json results;
  const bool all = config.scenario == "all";
  auto wrap = [&](const std::string& name, auto&& fn) {
    if (!all && config.scenario != name) return;
    try {
      results[name] = fn(config, model, out);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw Error("scenario " + name + ": " + e.what());
    }
  };
  wrap("modes", run_modes);
  wrap("spectrum", run_spectrum);
  wrap("line", run_line);
  wrap("steadystate", run_steadystate);
  wrap("wigner", run_wigner);
  wrap("gaps", run_gaps);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json manifest{
      {"software", {{"name", "wgqed"}, {"version", kVersion}}},
      {"units",
       {{"length", "transition wavelength lambda"},
        {"rate", "free-space single-atom decay rate gamma"},
        {"time", "1/gamma"},
        {"hbar", 1}}},
      {"config", to_json(config)},
      {"tolerances",
       {{"he11_root_relative", 1e-12},
        {"dispersion_scan_points", kDispersionScanPoints},
        {"kernel_hermiticity", 1e-12},
        {"kernel_psd", -1e-10},
        {"steady_residual", 1e-9},
        {"scgf_residual_relative", ScgfOptions{}.tolerance},
        {"convexity", 1e-8}}},
      {"files", out.files()},
      {"results", results},
      {"wall_time_s", wall},
  };
  std::ofstream(out.path("manifest.json")) << manifest.dump(2) << '\n';
  return manifest;
}

}  // namespace wgqed
