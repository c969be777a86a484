#pragma once

// Shared fixtures for the unit and acceptance suites.

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "channel_lab/channel.hpp"
#include "channel_lab/tensor.hpp"

namespace channel_lab::testing {

inline const double kSqrtHalf = 1.0 / std::sqrt(2.0);

inline ComplexVector ket(std::initializer_list<Complex> amps) {
  ComplexVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (auto a : amps) v(i++) = a;
  return v;
}

inline PureState plus() { return PureState(ket({kSqrtHalf, kSqrtHalf})); }
inline PureState minus() { return PureState(ket({kSqrtHalf, -kSqrtHalf})); }

// Bell states in the computational basis |00>,|01>,|10>,|11>.
inline PureState phi_plus() { return PureState(ket({kSqrtHalf, 0, 0, kSqrtHalf})); }
inline PureState phi_minus() { return PureState(ket({kSqrtHalf, 0, 0, -kSqrtHalf})); }
inline PureState psi_plus() { return PureState(ket({0, kSqrtHalf, kSqrtHalf, 0})); }
inline PureState psi_minus() { return PureState(ket({0, kSqrtHalf, -kSqrtHalf, 0})); }

inline std::array<double, 4> random_probabilities(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::array<double, 4> p{};
  double sum = 0.0;
  for (auto& x : p) {
    x = u(rng);
    sum += x;
  }
  for (auto& x : p) x /= sum;
  return p;
}

inline std::vector<double> random_probabilities(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto& x : p) {
    x = u(rng);
    sum += x;
  }
  for (auto& x : p) x /= sum;
  return p;
}

// Pauli-channel coefficients alpha_0 = sum p_i^2, alpha_k = 2(p_0 p_k + p_i p_j).
inline std::array<double, 4> pauli_alphas(const std::array<double, 4>& p) {
  return {p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3],
          2.0 * (p[0] * p[1] + p[2] * p[3]), 2.0 * (p[0] * p[2] + p[1] * p[3]),
          2.0 * (p[0] * p[3] + p[1] * p[2])};
}

// Random density matrix: normalized Wishart G G^dagger.
inline ComplexMatrix random_density(std::size_t d, std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  const ComplexMatrix g = random_gaussian_matrix(n, n, rng);
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

// Diagonal projector onto the listed computational basis states.
inline ComplexMatrix diagonal_projector(std::size_t d, std::initializer_list<std::size_t> idx) {
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (auto i : idx) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  return p;
}

// One of each builtin family, at generic parameters.
inline std::vector<KrausChannel> builtin_family_channels() {
  std::vector<ComplexMatrix> z3;
  const double pi = std::acos(-1.0);
  for (int k = 0; k < 3; ++k) {
    ComplexMatrix u = ComplexMatrix::Zero(3, 3);
    for (int j = 0; j < 3; ++j) u(j, j) = std::polar(1.0, 2.0 * pi * k * j / 3.0);
    z3.push_back(u);
  }
  return {
      pauli_channel({0.6, 0.2, 0.15, 0.05}),
      depolarizing_channel(0.4),
      correlated_pauli2_channel({0.4, 0.3, 0.2, 0.1}),
      partial_replacement_channel(3, 0.35),
      projective_channel({diagonal_projector(4, {0, 1}), diagonal_projector(4, {2}),
                          diagonal_projector(4, {3})}),
      unitary_mixture_channel({0.5, 0.3, 0.2}, z3),
  };
}

}  // namespace channel_lab::testing
