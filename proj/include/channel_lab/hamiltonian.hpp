#pragma once

// Channel Hamiltonians on H (x) H.
//
//   purity              Omega  = sum_ij (A_i^dag A_j)^dag (x) (A_i^dag A_j)
//   fidelity            Omega1 = sum_i A_i (x) A_i^dag          (non-Hermitian)
//   fidelity-hermitian  Omega' = (I (x) T*)(S) = Omega1 S
//
// <psi psi| Omega |psi psi> is the output purity Tr[T(psi)^2] and
// <psi psi| Omega1 |psi psi> = <psi psi| Omega' |psi psi> is the pure-state
// fidelity <psi|T(psi)|psi>.

#include <sstream>
#include <string>
#include <utility>

#include "channel_lab/channel.hpp"
#include "channel_lab/tensor.hpp"

namespace channel_lab {

enum class HamiltonianKind { purity, fidelity, fidelity_hermitian };

inline const char* to_string(HamiltonianKind kind) {
  switch (kind) {
    case HamiltonianKind::purity: return "purity";
    case HamiltonianKind::fidelity: return "fidelity";
    case HamiltonianKind::fidelity_hermitian: return "fidelity-hermitian";
  }
  return "unknown";
}

// Default eigenvalue-one membership tolerance for invariant subspaces.
inline constexpr double kEigenvalueOneTolerance = 1e-8;

struct ChannelHamiltonian {
  HamiltonianKind kind;
  ComplexMatrix matrix;     // d^2 x d^2
  std::size_t source_dim;   // d

  // Only Omega1 is allowed to be non-Hermitian.
  bool hermitian() const { return kind != HamiltonianKind::fidelity; }
};

/// Direct route: sum over Kraus pairs of Omega_ij^dag (x) Omega_ij.
inline ChannelHamiltonian purity_hamiltonian(const KrausChannel& t) {
  const auto n = static_cast<Eigen::Index>(t.dim());
  ComplexMatrix omega = ComplexMatrix::Zero(n * n, n * n);
  for (const auto& ai : t.kraus()) {
    for (const auto& aj : t.kraus()) {
      const ComplexMatrix omega_ij = ai.adjoint() * aj;
      add_tensor_product(omega, omega_ij.adjoint(), omega_ij);
    }
  }
  return {HamiltonianKind::purity, std::move(omega), t.dim()};
}

/// Dual route: T*^{(x)2}(S) S, applying the dual factor-wise to SWAP.
inline ChannelHamiltonian purity_hamiltonian_dual(const KrausChannel& t) {
  const std::size_t d = t.dim();
  const auto n = static_cast<Eigen::Index>(d * d);
  const ComplexMatrix s = swap_operator(d);
  ComplexMatrix dual_s = ComplexMatrix::Zero(n, n);
  for (const auto& ai : t.kraus()) {
    for (const auto& aj : t.kraus()) {
      const ComplexMatrix aa = tensor_product(ai, aj);
      dual_s += aa.adjoint() * s * aa;
    }
  }
  return {HamiltonianKind::purity, dual_s * s, d};
}

inline ChannelHamiltonian fidelity_hamiltonian(const KrausChannel& t) {
  const auto n = static_cast<Eigen::Index>(t.dim());
  ComplexMatrix omega1 = ComplexMatrix::Zero(n * n, n * n);
  for (const auto& a : t.kraus()) add_tensor_product(omega1, a, a.adjoint());
  return {HamiltonianKind::fidelity, std::move(omega1), t.dim()};
}

inline ChannelHamiltonian fidelity_hamiltonian_hermitian(const KrausChannel& t) {
  const std::size_t d = t.dim();
  const auto n = static_cast<Eigen::Index>(d);
  const ComplexMatrix s = swap_operator(d);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  ComplexMatrix out = ComplexMatrix::Zero(n * n, n * n);
  for (const auto& a : t.kraus()) {
    const ComplexMatrix ia = tensor_product(id, a);
    out += ia.adjoint() * s * ia;
  }
  return {HamiltonianKind::fidelity_hermitian, std::move(out), d};
}

/// <psi (x) psi| H |psi (x) psi> (complex; real for Hermitian H).
inline Complex product_expectation(const ComplexMatrix& h, const ComplexVector& psi) {
  const ComplexVector pp = tensor_product(psi, psi);
  if (pp.size() != h.rows()) {
    throw DimensionError("product_expectation: state dimension " + std::to_string(psi.size()) +
                         " does not match operator of size " + std::to_string(h.rows()));
  }
  return pp.dot(h * pp);
}

inline Complex product_expectation(const ChannelHamiltonian& h, const PureState& psi) {
  return product_expectation(h.matrix, psi.amplitudes());
}

/// Restriction of H to coordinates of a subspace C: (B (x) B)^dag H (B (x) B),
/// an operator on C^k (x) C^k with k = dim C.
inline ChannelHamiltonian compress(const ChannelHamiltonian& h, const SubspaceBasis& c) {
  if (c.ambient_dim() != h.source_dim) {
    throw DimensionError("compress: subspace lives in dimension " +
                         std::to_string(c.ambient_dim()) + ", Hamiltonian acts on " +
                         std::to_string(h.source_dim));
  }
  const ComplexMatrix bb = tensor_product(c.isometry(), c.isometry());
  return {h.kind, bb.adjoint() * h.matrix * bb, c.dim()};
}

/// Spectrum of H restricted to Sym(H (x) H).
struct SymmetricSpectrum {
  RealVector eigenvalues;       // ascending
  double min_eigenvalue = 0.0;  // omega_0^+
  ComplexMatrix eigenvectors;   // columns in H (x) H, each S-invariant
};

namespace detail {

inline void require_hermitian_kind(const ChannelHamiltonian& h, const char* who) {
  if (!h.hermitian()) {
    throw ValidationError(std::string(who) +
                          ": fidelity Hamiltonian Omega1 is not Hermitian; use Omega'");
  }
  const double dev = hermiticity_deviation(h.matrix);
  if (!(dev <= kDefaultTolerance)) {
    std::ostringstream msg;
    msg << who << ": operator is not Hermitian (max |H - H^dagger| = " << dev << ")";
    throw ValidationError(msg.str());
  }
}

inline SymmetricSpectrum compressed_spectrum(const ComplexMatrix& h, const ComplexMatrix& iso) {
  const ComplexMatrix reduced = iso.adjoint() * h * iso;
  // Compression of a Hermitian operator; clear rounding asymmetry first.
  auto eig = hermitian_eigensystem(0.5 * (reduced + reduced.adjoint()));
  SymmetricSpectrum out;
  out.eigenvalues = eig.eigenvalues;
  out.min_eigenvalue = eig.eigenvalues.size() > 0 ? eig.eigenvalues(0) : 0.0;
  out.eigenvectors = iso * eig.eigenvectors;
  return out;
}

}  // namespace detail

/// Spectrum of H compressed onto Sym(H (x) H), dimension d(d+1)/2.
inline SymmetricSpectrum symmetric_sector_spectrum(const ChannelHamiltonian& h) {
  detail::require_hermitian_kind(h, "symmetric_sector_spectrum");
  return detail::compressed_spectrum(h.matrix, symmetric_subspace_isometry(h.source_dim));
}

/// Spectrum of H compressed onto Sym(C (x) C) for a subspace C.
inline SymmetricSpectrum symmetric_sector_spectrum(const ChannelHamiltonian& h,
                                                   const SubspaceBasis& c) {
  detail::require_hermitian_kind(h, "symmetric_sector_spectrum");
  if (c.ambient_dim() != h.source_dim) {
    throw DimensionError("symmetric_sector_spectrum: subspace dimension mismatch");
  }
  return detail::compressed_spectrum(h.matrix, symmetric_subspace_isometry(c));
}

inline HermitianEigensystem full_spectrum(const ChannelHamiltonian& h) {
  detail::require_hermitian_kind(h, "full_spectrum");
  return hermitian_eigensystem(h.matrix);
}

/// Eigenvalue-one eigenspace of Omega, H^Omega.
struct InvariantSubspace {
  ComplexMatrix basis;  // orthonormal columns in H (x) H; may have zero columns
  double eigenvalue_tolerance = kEigenvalueOneTolerance;

  std::size_t dim() const { return static_cast<std::size_t>(basis.cols()); }
};

inline InvariantSubspace invariant_subspace(const ChannelHamiltonian& h,
                                            double tol = kEigenvalueOneTolerance) {
  if (h.kind != HamiltonianKind::purity) {
    throw ValidationError("invariant_subspace: requires the purity Hamiltonian");
  }
  const auto eig = hermitian_eigensystem(h.matrix);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (std::abs(eig.eigenvalues(i) - 1.0) <= tol) keep.push_back(i);
  }
  InvariantSubspace out;
  out.eigenvalue_tolerance = tol;
  out.basis.resize(h.matrix.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    out.basis.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors.col(keep[c]);
  }
  return out;
}

// Largest singular value.
inline double operator_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

}  // namespace channel_lab
