#include "wgqed/weak_drive.hpp"

#include <algorithm>
#include <cmath>

namespace wgqed {

CVec steady_amplitudes(const CouplingKernels& kernels, const AtomChain& chain, const DriveParams& drive) {
  drive.validate();
  const Eigen::Index n = kernels.size();
  if (static_cast<Eigen::Index>(chain.size()) != n) throw DimensionMismatch("chain and kernels differ in size");
  const CMat system = drive.detuning * CMat::Identity(n, n) - kernels.effective();
  const CVec rhs = drive.rabi * drive_phases(chain, drive).conjugate();
  Eigen::PartialPivLU<CMat> lu(system);
  if (!(lu.rcond() > 1e-13)) throw SingularSystem("weak-drive linear system is numerically singular");
  return lu.solve(rhs);
}

EmissionRates weak_emission(const CouplingKernels& kernels, const CVec& amplitudes) {
  return emission_from_correlations(kernels, amplitudes * amplitudes.adjoint());
}

std::vector<double> LineScan::right() const {
  std::vector<double> out;
  out.reserve(rates.size());
  for (const auto& r : rates) out.push_back(r.right);
  return out;
}

std::vector<double> default_detuning_grid(const CollectiveSpectrum& spectrum, int points) {
  const double vmax = spectrum.v.size() ? spectrum.v.cwiseAbs().maxCoeff() : 0.0;
  const double span = std::max(10.0 * units::gamma, 1.5 * vmax);
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = -span + 2.0 * span * i / (points - 1);
  return grid;
}

LineScan emission_line(const CouplingKernels& kernels, const AtomChain& chain, const DriveParams& drive,
                       std::span<const double> detunings) {
  if (detunings.empty()) throw InvalidArgument("detuning grid is empty");
  LineScan scan;
  scan.detunings.assign(detunings.begin(), detunings.end());
  scan.rates.reserve(detunings.size());
  DriveParams point = drive;
  for (double d : detunings) {
    point.detuning = d;
    scan.rates.push_back(weak_emission(kernels, steady_amplitudes(kernels, chain, point)));
  }
  scan.splitting = line_splitting(scan.detunings, scan.right());
  return scan;
}

std::optional<double> line_splitting(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("line scan grids differ in length");
  struct Peak {
    double position;
    double value;
  };
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    // vertex of the parabola through the three samples
    const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
    const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
    const double d0 = (y1 - y0) / (x1 - x0);
    const double d1 = (y2 - y1) / (x2 - x1);
    const double curv = (d1 - d0) / (x2 - x0);
    Peak p{x1, y1};
    if (curv < 0.0) {
      const double xm = 0.5 * (x0 + x1) - d0 / (2.0 * curv);
      if (xm >= x0 && xm <= x2) {
        p.position = xm;
        p.value = y0 + d0 * (xm - x0) + curv * (xm - x0) * (xm - x1);
      }
    }
    peaks.push_back(p);
  }
  if (peaks.size() < 2) return std::nullopt;
  std::partial_sort(peaks.begin(), peaks.begin() + 2, peaks.end(),
                    [](const Peak& a, const Peak& b) { return a.value > b.value; });
  return std::abs(peaks[0].position - peaks[1].position);
}

}  // namespace wgqed
