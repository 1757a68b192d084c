#include "wgqed/deformed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseLU>

namespace wgqed {

namespace {

using Index = Eigen::Index;
using Triplet = Eigen::Triplet<cplx>;

SpMat kron_identity_left(const SpMat& a) {
  // I (x) A
  const Index d = a.rows();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(a.nonZeros() * d));
  for (Index c = 0; c < a.outerSize(); ++c) {
    for (SpMat::InnerIterator it(a, c); it; ++it) {
      for (Index b = 0; b < d; ++b) trip.emplace_back(it.row() + d * b, c + d * b, it.value());
    }
  }
  SpMat out(d * d, d * d);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

SpMat kron_identity_right(const SpMat& a) {
  // A (x) I
  const Index d = a.rows();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(a.nonZeros() * d));
  for (Index c = 0; c < a.outerSize(); ++c) {
    for (SpMat::InnerIterator it(a, c); it; ++it) {
      for (Index b = 0; b < d; ++b) trip.emplace_back(b + d * it.row(), b + d * c, it.value());
    }
  }
  SpMat out(d * d, d * d);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

struct EigenPair {
  double theta = 0.0;
  CVec vec;
  bool converged = false;
  double residual = 0.0;
};

double diag_scale(const SpMat& a) {
  double m = 1.0;
  for (Index i = 0; i < a.rows(); ++i) m = std::max(m, std::abs(a.coeff(i, i)));
  return m;
}

// Shifted inverse iteration; the shift is refreshed from the Rayleigh
// quotient whenever it drifts, so a rough guess still locks onto the
// eigenvalue whose eigenvector is closest to `start`.
EigenPair inverse_iteration(const SpMat& a, double guess, CVec start, const ScgfOptions& opt) {
  const Index n = a.rows();
  SpMat identity(n, n);
  identity.setIdentity();
  const double tol = opt.tolerance * diag_scale(a);
  EigenPair out;
  CVec x = start.normalized();
  double sigma = guess + 1e-6 * (1.0 + std::abs(guess));
  Eigen::SparseLU<SpMat> lu;
  bool factored = false;
  cplx lambda = guess;
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (!factored) {
      lu.compute(a - cplx(sigma, 0.0) * identity);
      if (lu.info() != Eigen::Success) {
        sigma += 1e-5 * (1.0 + std::abs(sigma));
        continue;
      }
      factored = true;
    }
    CVec y = lu.solve(x);
    if (!y.allFinite()) break;
    x = y.normalized();
    const CVec ax = a * x;
    lambda = x.dot(ax);
    out.residual = (ax - lambda * x).norm();
    if (out.residual < tol) {
      out.converged = true;
      break;
    }
    if (std::abs(lambda.real() - sigma) > 1e-3 * (1.0 + std::abs(sigma)) && it % 3 == 2) {
      sigma = lambda.real() + 1e-6 * (1.0 + std::abs(lambda.real()));
      factored = false;
    }
  }
  out.theta = lambda.real();
  if (std::abs(lambda.imag()) > 1e-8) out.converged = false;
  out.vec = x;
  return out;
}

double extrapolate(const std::vector<double>& s, const std::vector<double>& t, double target) {
  // quadratic through the last three points walked (or fewer)
  const std::size_t m = s.size();
  if (m == 1) return t[0];
  if (m == 2) return t[1] + (t[1] - t[0]) / (s[1] - s[0]) * (target - s[1]);
  const double x0 = s[m - 3], x1 = s[m - 2], x2 = s[m - 1];
  const double d0 = (t[m - 2] - t[m - 3]) / (x1 - x0);
  const double d1 = (t[m - 1] - t[m - 2]) / (x2 - x1);
  const double c = (d1 - d0) / (x2 - x0);
  return t[m - 3] + d0 * (target - x0) + c * (target - x0) * (target - x1);
}

struct Walk {
  std::vector<double> s, theta, residual;
  std::vector<bool> converged;
  CVec last;
};

// Walk the points in `targets` (ordered away from the seed) starting from a
// known point history.
void walk(const DeformedGenerator& gen, double alpha, const std::vector<double>& targets, Walk& w,
          const ScgfOptions& opt) {
  for (double s : targets) {
    const double guess = extrapolate(w.s, w.theta, s);
    EigenPair p = inverse_iteration(gen.matrix(alpha, s), guess, w.last, opt);
    w.s.push_back(s);
    w.theta.push_back(p.theta);
    w.residual.push_back(p.residual);
    w.converged.push_back(p.converged);
    w.last = p.vec;
  }
}

}  // namespace

CVec right_jump_amplitudes(const CouplingKernels& kernels, const AtomChain& chain, double beta_f) {
  const auto z = chain.positions();
  CVec a(static_cast<Index>(z.size()));
  for (Index j = 0; j < a.size(); ++j) {
    a[j] = std::sqrt(std::max(0.0, kernels.G_R(j, j).real())) * std::polar(1.0, -beta_f * z[static_cast<std::size_t>(j)]);
  }
  return a;
}

SpMat jump_operator(const CVec& amplitudes, const Register& reg) {
  if (amplitudes.size() != reg.atoms()) throw DimensionMismatch("jump amplitudes and register differ in size");
  SpMat j(reg.dim(), reg.dim());
  for (int i = 0; i < reg.atoms(); ++i) j += amplitudes[i] * reg.lowering(i);
  return j;
}

DeformedGenerator::DeformedGenerator(const Liouvillian& L, const SpMat& jump)
    : base_(L.matrix), jump_(jump), left_(kron_identity_left(jump)),
      right_(kron_identity_right(SpMat(jump.conjugate()))) {
  if (jump.rows() * jump.rows() != base_.rows()) throw DimensionMismatch("jump operator does not match Liouvillian");
}

SpMat DeformedGenerator::matrix(double alpha, double s) const {
  if (s == 0.0) return base_;
  SpMat identity(base_.rows(), base_.cols());
  identity.setIdentity();
  const cplx e = std::polar(1.0, -alpha);
  SpMat out = base_ - (0.5 * s * e) * left_ - (0.5 * s * std::conj(e)) * right_ + cplx(s * s / 8.0, 0.0) * identity;
  out.makeCompressed();
  return out;
}

bool ScgfCurve::all_converged() const {
  return std::all_of(converged.begin(), converged.end(), [](bool b) { return b; });
}

ScgfCurve scgf(const DeformedGenerator& gen, double alpha, std::span<const double> s_grid, const CMat& rho_ss,
               const ScgfOptions& opt) {
  if (!std::is_sorted(s_grid.begin(), s_grid.end())) throw InvalidArgument("s grid must be increasing");
  const auto zero = std::find_if(s_grid.begin(), s_grid.end(), [](double s) { return std::abs(s) < 1e-14; });
  if (zero == s_grid.end()) throw InvalidArgument("s grid must contain 0");
  if (rho_ss.rows() != gen.dim()) throw DimensionMismatch("steady state does not match the generator");

  Walk seed;
  const CVec start = Eigen::Map<const CVec>(rho_ss.data(), rho_ss.size());
  EigenPair p0 = inverse_iteration(gen.matrix(alpha, 0.0), 0.0, start, opt);
  seed.s = {0.0};
  seed.theta = {p0.theta};
  seed.residual = {p0.residual};
  seed.converged = {p0.converged};
  seed.last = p0.vec;

  const std::size_t iz = static_cast<std::size_t>(zero - s_grid.begin());
  std::vector<double> up(s_grid.begin() + static_cast<std::ptrdiff_t>(iz) + 1, s_grid.end());
  std::vector<double> down(s_grid.begin(), s_grid.begin() + static_cast<std::ptrdiff_t>(iz));
  std::reverse(down.begin(), down.end());

  Walk right = seed, left = seed;
  walk(gen, alpha, up, right, opt);
  walk(gen, alpha, down, left, opt);

  ScgfCurve curve;
  curve.alpha = alpha;
  for (std::size_t i = left.s.size(); i-- > 1;) {
    curve.s.push_back(left.s[i]);
    curve.theta.push_back(left.theta[i]);
    curve.residual.push_back(left.residual[i]);
    curve.converged.push_back(left.converged[i]);
  }
  for (std::size_t i = 0; i < right.s.size(); ++i) {
    curve.s.push_back(right.s[i]);
    curve.theta.push_back(right.theta[i]);
    curve.residual.push_back(right.residual[i]);
    curve.converged.push_back(right.converged[i]);
  }
  curve.left_vector = left.last;
  curve.right_vector = right.last;
  return curve;
}

void extend_scgf(const DeformedGenerator& gen, ScgfCurve& curve, double s_max, double step, const ScgfOptions& opt) {
  if (curve.s.size() < 3) throw InvalidArgument("curve too short to extend");
  const std::size_t n = curve.s.size();
  std::vector<double> up, down;
  for (double s = curve.s.back() + step; s <= s_max + 1e-9; s += step) up.push_back(s);
  for (double s = curve.s.front() - step; s >= -s_max - 1e-9; s -= step) down.push_back(s);

  Walk right{{curve.s[n - 3], curve.s[n - 2], curve.s[n - 1]},
             {curve.theta[n - 3], curve.theta[n - 2], curve.theta[n - 1]},
             {},
             {},
             curve.right_vector};
  Walk left{{curve.s[2], curve.s[1], curve.s[0]}, {curve.theta[2], curve.theta[1], curve.theta[0]}, {}, {},
            curve.left_vector};
  walk(gen, curve.alpha, up, right, opt);
  walk(gen, curve.alpha, down, left, opt);

  ScgfCurve out;
  out.alpha = curve.alpha;
  for (std::size_t i = left.s.size(); i-- > 3;) {
    out.s.push_back(left.s[i]);
    out.theta.push_back(left.theta[i]);
    out.residual.push_back(left.residual[i - 3]);
    out.converged.push_back(left.converged[i - 3]);
  }
  out.s.insert(out.s.end(), curve.s.begin(), curve.s.end());
  out.theta.insert(out.theta.end(), curve.theta.begin(), curve.theta.end());
  out.residual.insert(out.residual.end(), curve.residual.begin(), curve.residual.end());
  out.converged.insert(out.converged.end(), curve.converged.begin(), curve.converged.end());
  for (std::size_t i = 3; i < right.s.size(); ++i) {
    out.s.push_back(right.s[i]);
    out.theta.push_back(right.theta[i]);
    out.residual.push_back(right.residual[i - 3]);
    out.converged.push_back(right.converged[i - 3]);
  }
  out.left_vector = left.last;
  out.right_vector = right.last;
  curve = std::move(out);
}

double scgf_dense(const DeformedGenerator& gen, double alpha, double s) {
  const CMat dense(gen.matrix(alpha, s));
  Eigen::ComplexEigenSolver<CMat> eig(dense, false);
  if (eig.info() != Eigen::Success) throw NonConvergence("dense eigensolver failed");
  double best = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < eig.eigenvalues().size(); ++i) best = std::max(best, eig.eigenvalues()[i].real());
  return best;
}

cplx jump_expectation(const CMat& rho, const SpMat& jump) {
  cplx sum = 0.0;
  for (Index c = 0; c < jump.outerSize(); ++c) {
    for (SpMat::InnerIterator it(jump, c); it; ++it) sum += it.value() * rho(c, it.row());
  }
  return sum;
}

}  // namespace wgqed
