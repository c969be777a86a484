#pragma once

// Kraus-form quantum channels T(X) = sum_i A_i X A_i^dagger.

#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "channel_lab/error.hpp"
#include "channel_lab/tensor.hpp"

namespace channel_lab {

// Kraus operators with smaller Frobenius norm are discarded on construction.
inline constexpr double kZeroKrausNorm = 1e-14;

// Probability vectors within this distance of normalization are rescaled;
// anything further off is rejected.
inline constexpr double kProbabilityRenormTolerance = 1e-9;

// Looser check for projectors and unitaries read from files.
inline constexpr double kStructureTolerance = 1e-9;

class KrausChannel {
 public:
  KrausChannel(std::vector<ComplexMatrix> kraus, std::string label = {})
      : label_(std::move(label)) {
    if (kraus.empty()) {
      throw ValidationError("KrausChannel: no Kraus operators given");
    }
    const auto d = kraus.front().rows();
    for (std::size_t i = 0; i < kraus.size(); ++i) {
      if (kraus[i].rows() != d || kraus[i].cols() != d) {
        throw DimensionError("KrausChannel: Kraus operator " + std::to_string(i) + " is " +
                             std::to_string(kraus[i].rows()) + "x" +
                             std::to_string(kraus[i].cols()) + ", expected " +
                             std::to_string(d) + "x" + std::to_string(d));
      }
    }
    if (d == 0) throw DimensionError("KrausChannel: zero-dimensional Kraus operators");
    dim_ = static_cast<std::size_t>(d);
    for (auto& a : kraus) {
      if (!(a.norm() < kZeroKrausNorm)) kraus_.push_back(std::move(a));
    }
    if (kraus_.empty()) {
      throw ValidationError("KrausChannel: every Kraus operator is zero");
    }
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return kraus_.size(); }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  const ComplexMatrix& operator[](std::size_t i) const { return kraus_[i]; }
  const std::string& label() const { return label_; }

 private:
  std::size_t dim_ = 0;
  std::vector<ComplexMatrix> kraus_;
  std::string label_;
};

/// Adjoint of T under the trace pairing: T*(X) = sum_i A_i^dagger X A_i.
/// Not trace preserving in general; T*(I) = I for every channel.
struct DualMap {
  std::size_t dim;
  std::vector<ComplexMatrix> kraus;

  ComplexMatrix operator()(const ComplexMatrix& x) const {
    const auto n = static_cast<Eigen::Index>(dim);
    if (x.rows() != n || x.cols() != n) {
      throw DimensionError("dual map: operand is " + std::to_string(x.rows()) + "x" +
                           std::to_string(x.cols()) + ", channel dimension " +
                           std::to_string(dim));
    }
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (const auto& a : kraus) out += a.adjoint() * x * a;
    return out;
  }
};

inline DualMap dual(const KrausChannel& t) { return DualMap{t.dim(), t.kraus()}; }

struct ValidationReport {
  double deviation = 0.0;  // max |sum_i A_i^dagger A_i - I|
  double tolerance = 0.0;
  bool passed = false;
};

inline ComplexMatrix completeness_sum(const KrausChannel& t) {
  const auto n = static_cast<Eigen::Index>(t.dim());
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& a : t.kraus()) sum += a.adjoint() * a;
  return sum;
}

inline ValidationReport validate(const KrausChannel& t, double tol = kDefaultTolerance) {
  const auto n = static_cast<Eigen::Index>(t.dim());
  const double dev = max_abs(completeness_sum(t) - ComplexMatrix::Identity(n, n));
  return {dev, tol, dev <= tol};
}

// Throws ValidationError unless t is trace preserving within tol.
inline void require_valid(const KrausChannel& t, double tol = kDefaultTolerance) {
  const auto report = validate(t, tol);
  if (!report.passed) {
    std::ostringstream msg;
    msg << "channel '" << t.label() << "' is not trace preserving: max |sum A^dagger A - I| = "
        << report.deviation << " exceeds tolerance " << tol;
    throw ValidationError(msg.str());
  }
}

inline void check_operand(const KrausChannel& t, const ComplexMatrix& x, const char* what) {
  const auto n = static_cast<Eigen::Index>(t.dim());
  if (x.rows() != n || x.cols() != n) {
    throw DimensionError(std::string(what) + ": operand is " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + ", channel dimension " +
                         std::to_string(t.dim()));
  }
}

namespace detail {
struct ApplyFn {
  ComplexMatrix operator()(const KrausChannel& t, const ComplexMatrix& rho) const {
    check_operand(t, rho, "apply");
    const auto n = static_cast<Eigen::Index>(t.dim());
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (const auto& a : t.kraus()) out += a * rho * a.adjoint();
    return out;
  }
};
}  // namespace detail

/// T(rho) = sum_i A_i rho A_i^dagger. A function object rather than a
/// function so unqualified calls never pick up std::apply through ADL.
inline constexpr detail::ApplyFn apply{};

inline ComplexMatrix apply_dual(const KrausChannel& t, const ComplexMatrix& x) {
  check_operand(t, x, "apply_dual");
  return dual(t)(x);
}

struct UnitalityReport {
  bool unital = false;
  double deviation = 0.0;  // max |sum_i A_i A_i^dagger - I|
};

inline UnitalityReport is_unital(const KrausChannel& t, double tol = kDefaultTolerance) {
  const auto n = static_cast<Eigen::Index>(t.dim());
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& a : t.kraus()) sum += a * a.adjoint();
  const double dev = max_abs(sum - ComplexMatrix::Identity(n, n));
  return {dev <= tol, dev};
}

/// Equivalent Kraus representation A'_i = sum_j u_ij A_j for a unitary u
/// over the Kraus index.
inline KrausChannel mix_kraus(const KrausChannel& t, const ComplexMatrix& u,
                              double tol = kDefaultTolerance) {
  const auto k = static_cast<Eigen::Index>(t.size());
  if (u.rows() != k || u.cols() != k) {
    throw DimensionError("mix_kraus: mixing matrix must be " + std::to_string(k) + "x" +
                         std::to_string(k));
  }
  const double dev = unitarity_deviation(u);
  if (!(dev <= tol)) {
    std::ostringstream msg;
    msg << "mix_kraus: mixing matrix is not unitary (max |u^dagger u - I| = " << dev << ")";
    throw ValidationError(msg.str());
  }
  const auto n = static_cast<Eigen::Index>(t.dim());
  std::vector<ComplexMatrix> mixed(t.size(), ComplexMatrix::Zero(n, n));
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      mixed[i] += u(i, j) * t[j];
    }
  }
  return KrausChannel(std::move(mixed), t.label());
}

// ---------------------------------------------------------------------------
// Named channel families
// ---------------------------------------------------------------------------

/// sigma^0..sigma^3 = I, X, Y, Z.
inline ComplexMatrix pauli_matrix(int index) {
  ComplexMatrix m(2, 2);
  const Complex i(0.0, 1.0);
  switch (index) {
    case 0: m << 1.0, 0.0, 0.0, 1.0; break;
    case 1: m << 0.0, 1.0, 1.0, 0.0; break;
    case 2: m << 0.0, -i, i, 0.0; break;
    case 3: m << 1.0, 0.0, 0.0, -1.0; break;
    default: throw DimensionError("pauli_matrix: index must be 0..3");
  }
  return m;
}

/// Tensor product of Paulis named by a string such as "XIZ" (leftmost
/// character = outermost factor).
inline ComplexMatrix pauli_string(std::string_view word) {
  if (word.empty()) throw ParseError("pauli_string: empty word");
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const char ch : word) {
    int idx = -1;
    switch (ch) {
      case 'I': idx = 0; break;
      case 'X': idx = 1; break;
      case 'Y': idx = 2; break;
      case 'Z': idx = 3; break;
      default: throw ParseError(std::string("pauli_string: unknown letter '") + ch + "'");
    }
    out = tensor_product(out, pauli_matrix(idx));
  }
  return out;
}

namespace detail {

inline std::vector<double> normalized_probabilities(std::vector<double> p, const char* who) {
  if (p.empty()) throw ValidationError(std::string(who) + ": empty probability vector");
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0) {
      throw ValidationError(std::string(who) + ": probabilities must be finite and non-negative");
    }
  }
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  if (!(std::abs(sum - 1.0) <= kProbabilityRenormTolerance)) {
    std::ostringstream msg;
    msg << who << ": probabilities sum to " << sum << ", expected 1";
    throw ValidationError(msg.str());
  }
  for (double& x : p) x /= sum;
  return p;
}

}  // namespace detail

struct PauliParams {
  std::array<double, 4> p;  // p_0 (identity), p_x, p_y, p_z
};
struct DepolarizingParams {
  double p0;
};
struct CorrelatedPauli2Params {
  std::array<double, 4> p;  // p_0, p_x, p_y, p_z for sigma (x) sigma
};
struct PartialReplacementParams {
  std::size_t dim;
  double p;
};
struct ProjectiveParams {
  std::vector<ComplexMatrix> projectors;
};
struct UnitaryMixtureParams {
  std::vector<double> probabilities;
  std::vector<ComplexMatrix> unitaries;
};

using ChannelDescriptor =
    std::variant<PauliParams, DepolarizingParams, CorrelatedPauli2Params,
                 PartialReplacementParams, ProjectiveParams, UnitaryMixtureParams>;

/// A_i = sqrt(p_i) sigma^i.
inline KrausChannel pauli_channel(const std::array<double, 4>& p) {
  const auto q = detail::normalized_probabilities({p.begin(), p.end()}, "pauli");
  std::vector<ComplexMatrix> kraus;
  for (int i = 0; i < 4; ++i) kraus.push_back(std::sqrt(q[i]) * pauli_matrix(i));
  std::ostringstream label;
  label << "pauli(" << p[0] << "," << p[1] << "," << p[2] << "," << p[3] << ")";
  return KrausChannel(std::move(kraus), label.str());
}

/// Isotropic Pauli channel with p_x = p_y = p_z = (1 - p0) / 3.
inline KrausChannel depolarizing_channel(double p0) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) {
    throw ValidationError("depolarizing: p0 must lie in [0, 1]");
  }
  const double r = (1.0 - p0) / 3.0;
  auto t = pauli_channel({p0, r, r, r});
  std::ostringstream label;
  label << "depolarizing(" << p0 << ")";
  return KrausChannel(t.kraus(), label.str());
}

/// Two-qubit channel A_a = sqrt(p_a) sigma_a (x) sigma_a.
inline KrausChannel correlated_pauli2_channel(const std::array<double, 4>& p) {
  const auto q = detail::normalized_probabilities({p.begin(), p.end()}, "correlated_pauli2");
  std::vector<ComplexMatrix> kraus;
  for (int i = 0; i < 4; ++i) {
    kraus.push_back(std::sqrt(q[i]) * tensor_product(pauli_matrix(i), pauli_matrix(i)));
  }
  std::ostringstream label;
  label << "correlated_pauli2(" << p[0] << "," << p[1] << "," << p[2] << "," << p[3] << ")";
  return KrausChannel(std::move(kraus), label.str());
}

/// T(rho) = (1 - p) rho + p |0><0| on C^d, with Kraus set
/// {sqrt(1-p) I} u {sqrt(p) |0><i| : i = 0..d-1}.
inline KrausChannel partial_replacement_channel(std::size_t d, double p) {
  if (d == 0) throw DimensionError("partial_replacement: dimension must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("partial_replacement: p must lie in [0, 1]");
  }
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<ComplexMatrix> kraus;
  kraus.push_back(std::sqrt(1.0 - p) * ComplexMatrix::Identity(n, n));
  for (Eigen::Index i = 0; i < n; ++i) {
    ComplexMatrix a = ComplexMatrix::Zero(n, n);
    a(0, i) = std::sqrt(p);
    kraus.push_back(std::move(a));
  }
  std::ostringstream label;
  label << "partial_replacement(" << d << "," << p << ")";
  return KrausChannel(std::move(kraus), label.str());
}

/// T(rho) = sum_i P_i rho P_i for an orthogonal, complete projector family.
inline KrausChannel projective_channel(const std::vector<ComplexMatrix>& projectors) {
  if (projectors.empty()) throw ValidationError("projective: no projectors given");
  const auto n = projectors.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    const auto& pi = projectors[i];
    if (pi.rows() != n || pi.cols() != n) {
      throw DimensionError("projective: projector " + std::to_string(i) + " has wrong shape");
    }
    if (hermiticity_deviation(pi) > kStructureTolerance ||
        max_abs(pi * pi - pi) > kStructureTolerance) {
      throw ValidationError("projective: element " + std::to_string(i) +
                            " is not an orthogonal projector");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (max_abs(pi * projectors[j]) > kStructureTolerance) {
        throw ValidationError("projective: projectors " + std::to_string(j) + " and " +
                              std::to_string(i) + " are not mutually orthogonal");
      }
    }
    sum += pi;
  }
  const double dev = max_abs(sum - ComplexMatrix::Identity(n, n));
  if (dev > kStructureTolerance) {
    std::ostringstream msg;
    msg << "projective: projectors do not resolve the identity (max deviation " << dev << ")";
    throw ValidationError(msg.str());
  }
  return KrausChannel(projectors, "projective(" + std::to_string(projectors.size()) + ")");
}

/// T(rho) = sum_g p_g U_g rho U_g^dagger.
inline KrausChannel unitary_mixture_channel(const std::vector<double>& probabilities,
                                            const std::vector<ComplexMatrix>& unitaries) {
  if (probabilities.size() != unitaries.size()) {
    throw DimensionError("unitary_mixture: " + std::to_string(probabilities.size()) +
                         " probabilities for " + std::to_string(unitaries.size()) + " unitaries");
  }
  const auto q = detail::normalized_probabilities(probabilities, "unitary_mixture");
  std::vector<ComplexMatrix> kraus;
  for (std::size_t g = 0; g < unitaries.size(); ++g) {
    const double dev = unitarity_deviation(unitaries[g]);
    if (dev > kStructureTolerance) {
      std::ostringstream msg;
      msg << "unitary_mixture: U_" << g << " is not unitary (max deviation " << dev << ")";
      throw ValidationError(msg.str());
    }
    kraus.push_back(std::sqrt(q[g]) * unitaries[g]);
  }
  return KrausChannel(std::move(kraus),
                      "unitary_mixture(" + std::to_string(unitaries.size()) + ")");
}

inline KrausChannel build_named_channel(const ChannelDescriptor& descriptor) {
  struct Visitor {
    KrausChannel operator()(const PauliParams& x) const { return pauli_channel(x.p); }
    KrausChannel operator()(const DepolarizingParams& x) const {
      return depolarizing_channel(x.p0);
    }
    KrausChannel operator()(const CorrelatedPauli2Params& x) const {
      return correlated_pauli2_channel(x.p);
    }
    KrausChannel operator()(const PartialReplacementParams& x) const {
      return partial_replacement_channel(x.dim, x.p);
    }
    KrausChannel operator()(const ProjectiveParams& x) const {
      return projective_channel(x.projectors);
    }
    KrausChannel operator()(const UnitaryMixtureParams& x) const {
      return unitary_mixture_channel(x.probabilities, x.unitaries);
    }
  };
  return std::visit(Visitor{}, descriptor);
}

inline KrausChannel identity_channel(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return KrausChannel({ComplexMatrix::Identity(n, n)}, "identity");
}

/// Random channel with `rank` Kraus operators: the blocks of a Haar-like
/// isometry C^d -> C^(rank*d), so sum_i A_i^dagger A_i = V^dagger V = I.
template <class Rng>
KrausChannel random_channel(std::size_t d, std::size_t rank, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  const auto k = static_cast<Eigen::Index>(rank);
  const ComplexMatrix g = random_gaussian_matrix(n * k, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix v = qr.householderQ() * ComplexMatrix::Identity(n * k, n);
  std::vector<ComplexMatrix> kraus;
  for (Eigen::Index i = 0; i < k; ++i) kraus.push_back(v.block(i * n, 0, n, n));
  return KrausChannel(std::move(kraus), "random(" + std::to_string(d) + "," +
                                            std::to_string(rank) + ")");
}

}  // namespace channel_lab
