#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace wgqed {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cplx>;
using Vec3c = Eigen::Vector3cd;

inline constexpr cplx kI{0.0, 1.0};

// Fixed unit system: lengths in the transition wavelength, rates in the
// free-space single-atom decay rate, hbar = 1.
namespace units {
inline constexpr double wavelength = 1.0;
inline constexpr double gamma = 1.0;
inline constexpr double k0 = 2.0 * std::numbers::pi / wavelength;
}  // namespace units

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define WGQED_ERROR(Name)                 \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

WGQED_ERROR(InvalidArgument);
WGQED_ERROR(NoGuidedMode);
WGQED_ERROR(NonConvergence);
WGQED_ERROR(InvalidPosition);
WGQED_ERROR(CoincidentAtoms);
WGQED_ERROR(HermiticityViolation);
WGQED_ERROR(PSDViolation);
WGQED_ERROR(DimensionMismatch);
WGQED_ERROR(SingularSystem);
WGQED_ERROR(DimensionCap);
WGQED_ERROR(DegenerateSteadyState);
WGQED_ERROR(NonConvexInput);
WGQED_ERROR(InsufficientAngles);
WGQED_ERROR(ConfigError);

#undef WGQED_ERROR

}  // namespace wgqed
