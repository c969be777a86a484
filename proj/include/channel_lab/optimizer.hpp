#pragma once

// Extremization of the quartic form f(psi) = <psi psi| H |psi psi> over unit
// vectors psi of a subspace C, by multistart Riemannian gradient descent on
// the sphere with Armijo backtracking.
//
// For H Hermitian and swap-symmetric, the Wirtinger derivative is
// df/dconj(psi) = 2 M(psi) psi with M the partial contraction below, so the
// Euclidean gradient in real coordinates is g = 4 M(psi) psi and the
// directional derivative along delta is Re<delta, g>.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "channel_lab/hamiltonian.hpp"
#include "channel_lab/tensor.hpp"

namespace channel_lab {

struct OptimizerConfig {
  std::size_t restarts = 32;
  std::size_t max_iterations = 2000;
  double step_size = 0.5;
  double gradient_tolerance = 1e-9;
  std::uint64_t seed = 0;

  void validate() const {
    if (restarts < 1) throw ValidationError("optimizer: restarts must be at least 1");
    if (!(gradient_tolerance > 0.0)) {
      throw ValidationError("optimizer: gradient_tolerance must be positive");
    }
    if (!(step_size > 0.0)) throw ValidationError("optimizer: step_size must be positive");
  }
};

struct OptimizationResult {
  double value = 0.0;
  PureState state = PureState::basis(1, 0);
  bool converged = false;
  std::size_t iterations_used = 0;   // of the winning restart
  std::size_t best_restart = 0;
  std::vector<double> restart_values;
  std::vector<double> value_history;  // accepted objective values of the winning restart
  bool candidate_dfs = false;         // maximization reached 1 within tolerance
};

/// M_ij = sum_kl conj(psi_k) H_{(i,k),(j,l)} psi_l, so that
/// <psi psi|H|psi psi> = <psi|M(psi)|psi>.
inline ComplexMatrix effective_matrix(const ComplexMatrix& h, const ComplexVector& psi) {
  const Eigen::Index n = psi.size();
  if (h.rows() != n * n || h.cols() != n * n) {
    throw DimensionError("effective_matrix: state of dimension " + std::to_string(n) +
                         " does not match operator of size " + std::to_string(h.rows()));
  }
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = psi.dot(h.block(i * n, j * n, n, n) * psi);
    }
  }
  return m;
}

inline ComplexMatrix effective_matrix(const ChannelHamiltonian& h, const PureState& psi) {
  if (psi.dim() != h.source_dim) {
    throw DimensionError("effective_matrix: state dimension does not match Hamiltonian");
  }
  return effective_matrix(h.matrix, psi.amplitudes());
}

namespace detail {

// Below this projected-gradient norm a stalled line search counts as
// convergence: the remaining decrease is under double-precision resolution.
inline constexpr double kStallGradient = 1e-6;
// Relative decrease per accepted step below which progress is round-off.
// Degenerate minima (quartic growth) make plain descent sublinear there.
inline constexpr double kFlatDecrease = 1e-15;
inline constexpr double kMinStep = 1e-16;
inline constexpr double kMaxStep = 1e3;
// A sufficient-decrease constant well above the textbook 1e-4: with step
// doubling, weaker values accept near-reflections across the optimum (t ~ 2/L)
// and the iterates oscillate instead of converging.
inline constexpr double kArmijo = 0.3;

class QuarticObjective {
 public:
  // h must be Hermitian; it is replaced by its swap-symmetric part, which
  // has the same values on product states.
  QuarticObjective(const ComplexMatrix& h, std::size_t dim) : dim_(dim) {
    const ComplexMatrix s = swap_operator(dim);
    h_ = 0.5 * (h + s * h * s);
  }

  std::size_t dim() const { return dim_; }
  const ComplexMatrix& matrix() const { return h_; }

  double value(const ComplexVector& c) const {
    return product_expectation(h_, c).real();
  }

  ComplexVector gradient(const ComplexVector& c) const {
    return 4.0 * (effective_matrix(h_, c) * c);
  }

  // Gradient projected onto the tangent space of the real unit sphere at c.
  ComplexVector tangent_gradient(const ComplexVector& c) const {
    const ComplexVector g = gradient(c);
    const double radial = c.dot(g).real();
    return g - radial * c;
  }

 private:
  std::size_t dim_;
  ComplexMatrix h_;
};

struct DescentRun {
  ComplexVector coefficients;
  double value = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  std::vector<double> history;
};

inline DescentRun descend(const QuarticObjective& f, ComplexVector c,
                          const OptimizerConfig& cfg) {
  DescentRun run;
  double fc = f.value(c);
  run.history.push_back(fc);
  double step = cfg.step_size;
  std::size_t it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const ComplexVector g = f.tangent_gradient(c);
    const double gnorm = g.norm();
    if (gnorm <= cfg.gradient_tolerance) {
      run.converged = true;
      break;
    }
    double t = step;
    bool accepted = false;
    ComplexVector next;
    double fnext = 0.0;
    while (t >= kMinStep) {
      next = c - t * g;
      next.normalize();
      fnext = f.value(next);
      if (fnext <= fc - kArmijo * t * gnorm * gnorm) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      run.converged = gnorm <= kStallGradient;
      break;
    }
    const double decrease = fc - fnext;
    c = std::move(next);
    fc = fnext;
    run.history.push_back(fc);
    if (gnorm <= kStallGradient && decrease <= kFlatDecrease * std::max(1.0, std::abs(fc))) {
      run.converged = true;
      ++it;
      break;
    }
    step = std::min(2.0 * t, kMaxStep);
  }
  run.iterations = it;
  run.coefficients = std::move(c);
  run.value = fc;
  return run;
}

inline OptimizationResult optimize(const ChannelHamiltonian& h, const SubspaceBasis& c,
                                   const OptimizerConfig& cfg, double sign) {
  cfg.validate();
  require_hermitian_kind(h, "optimizer");
  if (c.empty()) throw ValidationError("optimizer: subspace is empty");
  if (c.ambient_dim() != h.source_dim) {
    throw DimensionError("optimizer: subspace dimension does not match Hamiltonian");
  }
  const ChannelHamiltonian reduced = compress(h, c);
  const QuarticObjective objective(sign * reduced.matrix, c.dim());

  OptimizationResult result;
  DescentRun best;
  bool have_best = false;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    std::mt19937_64 rng(derive_seed(cfg.seed, r));
    const PureState start = haar_random_state(c.dim(), rng);
    DescentRun run = descend(objective, start.amplitudes(), cfg);
    result.restart_values.push_back(sign * run.value);
    if (!have_best || run.value < best.value) {
      best = std::move(run);
      result.best_restart = r;
      have_best = true;
    }
  }

  result.state = PureState::normalized(c.embed(best.coefficients));
  result.value = product_expectation(h, result.state).real();
  result.converged = best.converged;
  result.iterations_used = best.iterations;
  for (double v : best.history) result.value_history.push_back(sign * v);
  return result;
}

}  // namespace detail

/// Minimum of <psi psi|H|psi psi> over unit psi in C.
inline OptimizationResult minimize_product_expectation(const ChannelHamiltonian& h,
                                                       const SubspaceBasis& c,
                                                       const OptimizerConfig& cfg = {}) {
  return detail::optimize(h, c, cfg, 1.0);
}

/// Maximum of <psi psi|H|psi psi> over unit psi in C; flags candidate_dfs
/// when the maximum reaches 1.
inline OptimizationResult maximize_product_expectation(const ChannelHamiltonian& h,
                                                       const SubspaceBasis& c,
                                                       const OptimizerConfig& cfg = {}) {
  auto result = detail::optimize(h, c, cfg, -1.0);
  result.candidate_dfs = result.value >= 1.0 - kEigenvalueOneTolerance;
  return result;
}

struct GridResult {
  double min_value = 0.0;
  PureState argmin = PureState::basis(2, 0);
  double max_value = 0.0;
  PureState argmax = PureState::basis(2, 0);
};

/// Exhaustive evaluation on the Bloch sphere, psi(theta, phi) =
/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>, over a resolution x
/// 2*resolution grid covering [0, pi] x [0, 2 pi). Qubits only.
inline GridResult brute_force_grid(const ChannelHamiltonian& h, std::size_t resolution) {
  if (h.source_dim != 2) {
    throw DimensionError("brute_force_grid: requires a qubit Hamiltonian (d = 2), got d = " +
                         std::to_string(h.source_dim));
  }
  if (resolution < 2) throw ValidationError("brute_force_grid: resolution must be at least 2");
  const double pi = std::acos(-1.0);
  GridResult out;
  out.min_value = std::numeric_limits<double>::infinity();
  out.max_value = -std::numeric_limits<double>::infinity();
  ComplexVector psi(2);
  for (std::size_t a = 0; a < resolution; ++a) {
    const double theta = pi * static_cast<double>(a) / static_cast<double>(resolution - 1);
    for (std::size_t b = 0; b < 2 * resolution; ++b) {
      const double phi = pi * static_cast<double>(b) / static_cast<double>(resolution);
      psi(0) = std::cos(theta / 2.0);
      psi(1) = std::polar(std::sin(theta / 2.0), phi);
      const double v = product_expectation(h.matrix, psi).real();
      if (v < out.min_value) {
        out.min_value = v;
        out.argmin = PureState::normalized(psi);
      }
      if (v > out.max_value) {
        out.max_value = v;
        out.argmax = PureState::normalized(psi);
      }
    }
  }
  return out;
}

}  // namespace channel_lab
