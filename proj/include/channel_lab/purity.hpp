#pragma once

// Pointwise purity and fidelity, purity bounds, decoherence-free subspace
// checks, Haar averages and the code-matrix purity identity.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "channel_lab/channel.hpp"
#include "channel_lab/hamiltonian.hpp"
#include "channel_lab/optimizer.hpp"
#include "channel_lab/tensor.hpp"

namespace channel_lab {

// Agreement required between the direct and Hamiltonian evaluation routes.
inline constexpr double kCrossRouteTolerance = 1e-10;

// Z-scores divide by at least this much, so pointwise-constant quantities
// (standard error at the roundoff level) do not produce spurious outliers.
inline constexpr double kStandardErrorFloor = 1e-12;

namespace detail {

inline void check_state(const KrausChannel& t, const PureState& psi, const char* who) {
  if (psi.dim() != t.dim()) {
    throw DimensionError(std::string(who) + ": state dimension " + std::to_string(psi.dim()) +
                         " does not match channel dimension " + std::to_string(t.dim()));
  }
}

inline void check_agreement(double direct, double route, const char* who) {
  if (!(std::abs(direct - route) <= kCrossRouteTolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << who << ": direct value " << direct << " and Hamiltonian value " << route
        << " disagree";
    throw NumericalError(msg.str());
  }
}

}  // namespace detail

/// Tr[T(|psi><psi|)^2], cross-checked against <psi psi|Omega|psi psi>.
inline double output_purity(const KrausChannel& t, const PureState& psi,
                            const ChannelHamiltonian& omega) {
  detail::check_state(t, psi, "output_purity");
  const ComplexMatrix out = apply(t, psi.density());
  const double direct = (out * out).trace().real();
  const double route = product_expectation(omega, psi).real();
  detail::check_agreement(direct, route, "output_purity");
  return direct;
}

inline double output_purity(const KrausChannel& t, const PureState& psi) {
  return output_purity(t, psi, purity_hamiltonian(t));
}

/// <psi|T(|psi><psi|)|psi>, cross-checked against Re<psi psi|Omega1|psi psi>.
inline double pure_state_fidelity(const KrausChannel& t, const PureState& psi,
                                  const ChannelHamiltonian& omega1) {
  detail::check_state(t, psi, "pure_state_fidelity");
  const ComplexVector& v = psi.amplitudes();
  const double direct = v.dot(apply(t, psi.density()) * v).real();
  const Complex route = product_expectation(omega1, psi);
  if (!(std::abs(route.imag()) <= kCrossRouteTolerance)) {
    throw NumericalError("pure_state_fidelity: Omega1 expectation has imaginary part " +
                         std::to_string(route.imag()));
  }
  detail::check_agreement(direct, route.real(), "pure_state_fidelity");
  return direct;
}

inline double pure_state_fidelity(const KrausChannel& t, const PureState& psi) {
  return pure_state_fidelity(t, psi, fidelity_hamiltonian(t));
}

struct PurityBounds {
  double upper = 0.0;           // Tr[Pi+(C) Omega]
  double lower_global = 0.0;    // least eigenvalue of Omega on Sym(H (x) H)
  double lower_subspace = 0.0;  // least eigenvalue of Omega on Sym(C (x) C)
};

/// lower_global <= lower_subspace <= P(T, C) <= upper.
inline PurityBounds purity_bounds(const KrausChannel& t, const SubspaceBasis& c) {
  if (c.ambient_dim() != t.dim()) {
    throw DimensionError("purity_bounds: subspace dimension does not match channel");
  }
  const auto omega = purity_hamiltonian(t);
  PurityBounds b;
  b.upper = (symmetric_projector(c) * omega.matrix).trace().real();
  b.lower_global = symmetric_sector_spectrum(omega).min_eigenvalue;
  b.lower_subspace = symmetric_sector_spectrum(omega, c).min_eigenvalue;
  return b;
}

struct DfsCertificate {
  bool is_dfs = false;
  bool unital_criterion = false;  // eigenvector test used (unital channel)
  double eigen_residual = 0.0;    // max ||Omega v - v|| over a basis of Sym(C (x) C)
  std::vector<double> sampled_purities;
  double min_sampled_purity = 1.0;
  double optimizer_min = 0.0;
  PureState optimizer_argmin = PureState::basis(1, 0);
  double upper_bound = 0.0;  // Tr[Pi+(C) Omega]
};

inline constexpr std::size_t kDfsRandomSamples = 20;

/// Unital channels: C is a DFS iff Sym(C (x) C) lies in the eigenvalue-one
/// eigenspace of Omega. Non-unital channels: sampled purities on a basis of
/// C plus random superpositions and the optimizer minimum over C must all
/// reach 1 - tol (sound up to sampling).
inline DfsCertificate dfs_check(const KrausChannel& t, const SubspaceBasis& c,
                                double tol = kEigenvalueOneTolerance,
                                const OptimizerConfig& cfg = {}) {
  if (c.empty()) throw ValidationError("dfs_check: subspace is empty");
  if (c.ambient_dim() != t.dim()) {
    throw DimensionError("dfs_check: subspace dimension does not match channel");
  }
  const auto omega = purity_hamiltonian(t);
  DfsCertificate cert;
  cert.unital_criterion = is_unital(t).unital;

  const ComplexMatrix sym = symmetric_subspace_isometry(c);
  const ComplexMatrix residual = omega.matrix * sym - sym;
  for (Eigen::Index j = 0; j < residual.cols(); ++j) {
    cert.eigen_residual = std::max(cert.eigen_residual, residual.col(j).norm());
  }

  for (const auto& v : c.vectors()) cert.sampled_purities.push_back(output_purity(t, v, omega));
  std::mt19937_64 rng(derive_seed(cfg.seed, 0xDF5));
  for (std::size_t s = 0; s < kDfsRandomSamples; ++s) {
    const auto coeffs = haar_random_state(c.dim(), rng);
    const auto psi = PureState::normalized(c.embed(coeffs.amplitudes()));
    cert.sampled_purities.push_back(output_purity(t, psi, omega));
  }
  cert.min_sampled_purity =
      *std::min_element(cert.sampled_purities.begin(), cert.sampled_purities.end());

  const auto opt = minimize_product_expectation(omega, c, cfg);
  cert.optimizer_min = opt.value;
  cert.optimizer_argmin = opt.state;
  cert.upper_bound = (symmetric_projector(c) * omega.matrix).trace().real();

  if (cert.unital_criterion) {
    cert.is_dfs = cert.eigen_residual <= tol;
  } else {
    cert.is_dfs = cert.min_sampled_purity >= 1.0 - tol && cert.optimizer_min >= 1.0 - tol;
  }
  return cert;
}

/// Haar average of the output purity:
/// Tr[S T^{(x)2}(I) + Omega] / [d(d+1)].
inline double average_purity(const KrausChannel& t) {
  const std::size_t d = t.dim();
  const auto n = static_cast<Eigen::Index>(d * d);
  ComplexMatrix tt_identity = ComplexMatrix::Zero(n, n);
  for (const auto& ai : t.kraus()) {
    for (const auto& aj : t.kraus()) {
      const ComplexMatrix aa = tensor_product(ai, aj);
      tt_identity += aa * aa.adjoint();
    }
  }
  const ComplexMatrix s = swap_operator(d);
  const auto omega = purity_hamiltonian(t);
  const double dd = static_cast<double>(d);
  return (s * tt_identity + omega.matrix).trace().real() / (dd * (dd + 1.0));
}

/// Haar average of the pure-state fidelity:
/// Tr[Omega1 + S (I (x) T(I))] / [d(d+1)].
inline double average_fidelity(const KrausChannel& t) {
  const std::size_t d = t.dim();
  const auto n = static_cast<Eigen::Index>(d);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix s = swap_operator(d);
  const auto omega1 = fidelity_hamiltonian(t);
  const ComplexMatrix second = s * tensor_product(id, apply(t, id));
  const double dd = static_cast<double>(d);
  return (omega1.matrix + second).trace().real() / (dd * (dd + 1.0));
}

enum class Quantity { purity, fidelity };

inline const char* to_string(Quantity q) {
  return q == Quantity::purity ? "purity" : "fidelity";
}

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
  std::size_t partitions = 1;
};

inline double z_score(const MonteCarloEstimate& mc, double analytic) {
  return std::abs(mc.estimate - analytic) / std::max(mc.standard_error, kStandardErrorFloor);
}

namespace detail {

struct RunningMoments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  // Chan et al. pairwise merge.
  void merge(const RunningMoments& other) {
    if (other.count == 0) return;
    const double total = static_cast<double>(count + other.count);
    const double delta = other.mean - mean;
    m2 += other.m2 + delta * delta * static_cast<double>(count) *
                         static_cast<double>(other.count) / total;
    mean += delta * static_cast<double>(other.count) / total;
    count += other.count;
  }
};

}  // namespace detail

/// Sample mean and standard error of the pointwise quantity over n Haar
/// states. Partition p draws from the substream derive_seed(seed, p) and the
/// partial moments are merged in partition order, so the result depends on
/// (seed, partitions) only, not on thread scheduling.
inline MonteCarloEstimate monte_carlo_average(const KrausChannel& t, Quantity quantity,
                                              std::size_t n, std::uint64_t seed,
                                              std::size_t partitions = 1) {
  if (n < 2) throw ValidationError("monte_carlo_average: need at least 2 samples");
  partitions = std::clamp<std::size_t>(partitions, 1, n);
  const auto h = quantity == Quantity::purity ? purity_hamiltonian(t) : fidelity_hamiltonian(t);

  std::vector<detail::RunningMoments> parts(partitions);
  auto work = [&](std::size_t p) {
    const std::size_t count = n / partitions + (p < n % partitions ? 1 : 0);
    std::mt19937_64 rng(derive_seed(seed, p));
    for (std::size_t s = 0; s < count; ++s) {
      const auto psi = haar_random_state(t.dim(), rng);
      parts[p].add(quantity == Quantity::purity ? output_purity(t, psi, h)
                                                : pure_state_fidelity(t, psi, h));
    }
  };
  if (partitions == 1) {
    work(0);
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(partitions);
    for (std::size_t p = 0; p < partitions; ++p) {
      workers.emplace_back([&, p] {
        try {
          work(p);
        } catch (...) {
          errors[p] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  detail::RunningMoments total;
  for (const auto& part : parts) total.merge(part);
  MonteCarloEstimate out;
  out.estimate = total.mean;
  out.samples = total.count;
  out.partitions = partitions;
  const double variance = total.m2 / static_cast<double>(total.count - 1);
  out.standard_error = std::sqrt(std::max(variance, 0.0) / static_cast<double>(total.count));
  return out;
}

// Default tolerance on the error-correction residual.
inline constexpr double kCodeConditionTolerance = 1e-9;
inline constexpr double kCodePurityTolerance = 1e-9;

struct CodeMatrix {
  ComplexMatrix c;           // k x k, c_ij = <psi_0|A_i^dag A_j|psi_0>
  double kl_residual = 0.0;  // max |<psi_a|A_i^dag A_j|psi_b> - c_ij delta_ab|
  bool satisfies_condition = false;
  double purity = 0.0;       // Tr(c^2); asserted only when the condition holds
  std::vector<double> codeword_purities;
};

/// Code matrix of the error-correction condition
/// <psi_a|A_i^dag A_j|psi_b> = c_ij delta_ab and, when it holds, the purity
/// identity P(T, C) = Tr(c^2) checked on every codeword.
inline CodeMatrix qecc_code_matrix(const KrausChannel& t, const SubspaceBasis& code,
                                   double tol = kCodeConditionTolerance) {
  if (code.empty()) throw ValidationError("qecc_code_matrix: code has no codewords");
  if (code.ambient_dim() != t.dim()) {
    throw DimensionError("qecc_code_matrix: codeword dimension does not match channel");
  }
  const std::size_t k = t.size();
  const std::size_t m = code.dim();
  const ComplexMatrix& w = code.isometry();

  // Transported codewords A_j |psi_b>, one matrix per Kraus operator.
  std::vector<ComplexMatrix> moved;
  for (const auto& a : t.kraus()) moved.push_back(a * w);

  CodeMatrix out;
  out.c.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      out.c(i, j) = moved[i].col(0).dot(moved[j].col(0));
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const ComplexMatrix block = moved[i].adjoint() * moved[j];  // m x m over codewords
      for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
          const Complex expected = a == b ? out.c(i, j) : Complex(0.0);
          out.kl_residual = std::max(out.kl_residual, std::abs(block(a, b) - expected));
        }
      }
    }
  }
  out.satisfies_condition = out.kl_residual <= tol;

  const auto omega = purity_hamiltonian(t);
  for (const auto& psi : code.vectors()) {
    out.codeword_purities.push_back(output_purity(t, psi, omega));
  }
  if (out.satisfies_condition) {
    out.purity = (out.c * out.c).trace().real();
    for (std::size_t a = 0; a < m; ++a) {
      if (!(std::abs(out.purity - out.codeword_purities[a]) <= kCodePurityTolerance)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "qecc_code_matrix: Tr(c^2) = " << out.purity << " but codeword " << a
            << " has output purity " << out.codeword_purities[a];
        throw NumericalError(msg.str());
      }
    }
  }
  return out;
}

struct StatePurity {
  PureState state;
  double output_purity;
  double fidelity;
};

struct PurityReport {
  std::string channel_label;
  std::vector<StatePurity> entries;
  PurityBounds bounds;
  double average_purity = 0.0;
  double average_fidelity = 0.0;
  std::optional<InvariantSubspace> dfs_basis;
};

inline PurityReport make_purity_report(const KrausChannel& t, const std::vector<PureState>& states,
                                       const SubspaceBasis& c, bool with_invariant_subspace = true) {
  PurityReport report;
  report.channel_label = t.label();
  const auto omega = purity_hamiltonian(t);
  const auto omega1 = fidelity_hamiltonian(t);
  for (const auto& psi : states) {
    report.entries.push_back(
        {psi, output_purity(t, psi, omega), pure_state_fidelity(t, psi, omega1)});
  }
  report.bounds = purity_bounds(t, c);
  report.average_purity = average_purity(t);
  report.average_fidelity = average_fidelity(t);
  if (with_invariant_subspace) report.dfs_basis = invariant_subspace(omega);
  return report;
}

}  // namespace channel_lab
