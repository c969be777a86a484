#pragma once

// Dense complex linear algebra on H and H (x) H.
//
// Index convention: the basis vector |i> (x) |j> of H (x) H sits at row
// i * d + j, i.e. the FIRST tensor factor labels the outer blocks of a
// Kronecker product. Every module relies on this.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "channel_lab/error.hpp"

namespace channel_lab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Default tolerance for Hermiticity, orthonormality and unit-norm checks.
inline constexpr double kDefaultTolerance = 1e-10;

/// User-supplied bases that are orthonormal to this level are repaired by
/// re-orthogonalization instead of being rejected.
inline constexpr double kSanitizeTolerance = 1e-6;

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_deviation(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("hermiticity check on a non-square matrix");
  }
  return max_abs(m - m.adjoint());
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kDefaultTolerance) {
  return m.rows() == m.cols() && hermiticity_deviation(m) <= tol;
}

inline double unitarity_deviation(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) {
    throw DimensionError("unitarity check on a non-square matrix");
  }
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
}

inline bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

// Kronecker product, first factor = outer blocks.
inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

// out += scale * (a (x) b), without materializing the product.
inline void add_tensor_product(ComplexMatrix& out, const ComplexMatrix& a,
                               const ComplexMatrix& b, Complex scale = 1.0) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const Complex c = scale * a(i, j);
      if (c == Complex(0.0)) continue;
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) += c * b;
    }
  }
}

/// SWAP on C^d (x) C^d: S|i>|j> = |j>|i>.
inline ComplexMatrix swap_operator(std::size_t d) {
  if (d == 0) {
    throw DimensionError("swap_operator: dimension must be at least 1");
  }
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix s = ComplexMatrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      s(j * n + i, i * n + j) = 1.0;
    }
  }
  return s;
}

/// Eigenvalues ascending; eigenvectors are the matching orthonormal columns.
struct HermitianEigensystem {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

inline HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& m,
                                                  double tol = kDefaultTolerance) {
  if (m.rows() != m.cols()) {
    throw DimensionError("hermitian_eigensystem: matrix is " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()));
  }
  const double asym = hermiticity_deviation(m);
  if (!(asym <= tol)) {
    std::ostringstream msg;
    msg << "hermitian_eigensystem: input is not Hermitian (max |M - M^dagger| = " << asym
        << ", tolerance " << tol << ")";
    throw ValidationError(msg.str());
  }
  // The solver reads one triangle only; hand it the Hermitian part.
  const ComplexMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian_eigensystem: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// ---------------------------------------------------------------------------
// States and subspaces
// ---------------------------------------------------------------------------

/// Unit vector in C^d.
class PureState {
 public:
  explicit PureState(ComplexVector amplitudes, double tol = kDefaultTolerance)
      : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) {
      throw DimensionError("PureState: empty amplitude vector");
    }
    const double norm = amplitudes_.norm();
    if (!(std::abs(norm - 1.0) <= tol)) {
      std::ostringstream msg;
      msg << "PureState: norm is " << norm << ", expected 1 within " << tol;
      throw ValidationError(msg.str());
    }
  }

  // Rescales v to unit norm.
  static PureState normalized(const ComplexVector& v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw ValidationError("PureState: cannot normalize a zero or non-finite vector");
    }
    return PureState(v / norm);
  }

  static PureState basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
      throw DimensionError("PureState::basis: index out of range");
    }
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(std::move(v));
  }

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

  ComplexMatrix density() const { return amplitudes_ * amplitudes_.adjoint(); }
  ComplexVector doubled() const { return tensor_product(amplitudes_, amplitudes_); }

 private:
  ComplexVector amplitudes_;
};

namespace detail {

// Classical Gram-Schmidt run twice per vector ("twice is enough"). Vectors
// whose residual norm falls below rank_tol are dropped.
inline std::vector<ComplexVector> orthonormalize(const std::vector<ComplexVector>& vectors,
                                                 double rank_tol) {
  std::vector<ComplexVector> out;
  for (const auto& v : vectors) {
    ComplexVector w = v;
    const double scale = v.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : out) {
        w -= q.dot(w) * q;
      }
    }
    const double norm = w.norm();
    if (norm > rank_tol * std::max(1.0, scale)) {
      out.push_back(w / norm);
    }
  }
  return out;
}

}  // namespace detail

/// Orthonormal basis of a subspace C of C^d, stored as the columns of a
/// d x k isometry.
class SubspaceBasis {
 public:
  /// The whole space, spanned by the computational basis.
  static SubspaceBasis full(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    return SubspaceBasis(ComplexMatrix::Identity(n, n));
  }

  /// Accepts vectors that are already orthonormal up to rounding (Gram
  /// deviation at most `sanitize_tol`) and re-orthogonalizes them; rejects
  /// anything further off. Codeword order is preserved.
  static SubspaceBasis from_orthonormal(std::size_t ambient_dim,
                                        const std::vector<ComplexVector>& vectors,
                                        double sanitize_tol = kSanitizeTolerance) {
    check_lengths(ambient_dim, vectors);
    const std::size_t k = vectors.size();
    double deviation = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        const Complex g = vectors[a].dot(vectors[b]);
        deviation = std::max(deviation, std::abs(g - (a == b ? 1.0 : 0.0)));
      }
    }
    if (!(deviation <= sanitize_tol)) {
      std::ostringstream msg;
      msg << "subspace basis is not orthonormal (max Gram deviation " << deviation
          << ", tolerance " << sanitize_tol << ")";
      throw ValidationError(msg.str());
    }
    return from_vectors(ambient_dim, detail::orthonormalize(vectors, 0.5));
  }

  /// Orthonormal basis of span(vectors); linearly dependent inputs are dropped.
  static SubspaceBasis span_of(std::size_t ambient_dim, const std::vector<ComplexVector>& vectors,
                               double rank_tol = kDefaultTolerance) {
    check_lengths(ambient_dim, vectors);
    return from_vectors(ambient_dim, detail::orthonormalize(vectors, rank_tol));
  }

  std::size_t ambient_dim() const { return static_cast<std::size_t>(isometry_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(isometry_.cols()); }
  bool empty() const { return isometry_.cols() == 0; }

  PureState vector(std::size_t i) const {
    return PureState(isometry_.col(static_cast<Eigen::Index>(i)));
  }
  std::vector<PureState> vectors() const {
    std::vector<PureState> out;
    for (std::size_t i = 0; i < dim(); ++i) out.push_back(vector(i));
    return out;
  }

  // Columns are the basis vectors.
  const ComplexMatrix& isometry() const { return isometry_; }
  ComplexMatrix projector() const { return isometry_ * isometry_.adjoint(); }

  // Embeds coefficients c (length dim()) as sum_k c_k |b_k>.
  ComplexVector embed(const ComplexVector& coefficients) const { return isometry_ * coefficients; }

  double orthonormality_deviation() const {
    const auto k = isometry_.cols();
    return max_abs(isometry_.adjoint() * isometry_ - ComplexMatrix::Identity(k, k));
  }

 private:
  explicit SubspaceBasis(ComplexMatrix isometry) : isometry_(std::move(isometry)) {}

  static void check_lengths(std::size_t ambient_dim, const std::vector<ComplexVector>& vectors) {
    if (ambient_dim == 0) throw DimensionError("subspace: ambient dimension must be positive");
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (static_cast<std::size_t>(vectors[i].size()) != ambient_dim) {
        throw DimensionError("subspace vector " + std::to_string(i) + " has length " +
                             std::to_string(vectors[i].size()) + ", expected " +
                             std::to_string(ambient_dim));
      }
    }
  }

  static SubspaceBasis from_vectors(std::size_t ambient_dim,
                                    const std::vector<ComplexVector>& columns) {
    ComplexMatrix iso(static_cast<Eigen::Index>(ambient_dim),
                      static_cast<Eigen::Index>(columns.size()));
    for (std::size_t i = 0; i < columns.size(); ++i) {
      iso.col(static_cast<Eigen::Index>(i)) = columns[i];
    }
    return SubspaceBasis(std::move(iso));
  }

  ComplexMatrix isometry_;
};

/// Orthonormal basis of Sym(C^d (x) C^d) as the columns of a
/// d^2 x d(d+1)/2 isometry: |ii> and (|ij> + |ji>)/sqrt(2) for i < j,
/// ordered lexicographically in (i, j).
inline ComplexMatrix symmetric_subspace_isometry(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix basis = ComplexMatrix::Zero(n * n, n * (n + 1) / 2);
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j, ++col) {
      if (i == j) {
        basis(i * n + i, col) = 1.0;
      } else {
        basis(i * n + j, col) = r;
        basis(j * n + i, col) = r;
      }
    }
  }
  return basis;
}

/// Sym(C (x) C) for a subspace C, embedded in H (x) H.
inline ComplexMatrix symmetric_subspace_isometry(const SubspaceBasis& c) {
  const ComplexMatrix& b = c.isometry();
  return tensor_product(b, b) * symmetric_subspace_isometry(c.dim());
}

/// Normalized projector onto the symmetric part of C (x) C:
/// (P_C (x) P_C)(I + S)(P_C (x) P_C) / [k(k+1)] with k = dim C. Unit trace.
inline ComplexMatrix symmetric_projector(const SubspaceBasis& c) {
  if (c.empty()) {
    throw ValidationError("symmetric_projector: empty subspace basis");
  }
  const std::size_t d = c.ambient_dim();
  const double k = static_cast<double>(c.dim());
  const ComplexMatrix p = c.projector();
  const ComplexMatrix pp = tensor_product(p, p);
  const auto n = static_cast<Eigen::Index>(d * d);
  const ComplexMatrix sym = ComplexMatrix::Identity(n, n) + swap_operator(d);
  return pp * sym * pp / (k * (k + 1.0));
}

// ---------------------------------------------------------------------------
// Randomness
// ---------------------------------------------------------------------------

// Deterministic substream seed for (seed, index): one splitmix64 step.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

template <class Rng>
ComplexMatrix random_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

/// Haar-distributed pure state: normalized vector of i.i.d. standard complex
/// Gaussians.
template <class Rng>
PureState haar_random_state(std::size_t d, Rng& rng) {
  if (d == 0) throw DimensionError("haar_random_state: dimension must be at least 1");
  const ComplexMatrix g = random_gaussian_matrix(static_cast<Eigen::Index>(d), 1, rng);
  return PureState::normalized(g.col(0));
}

inline PureState haar_random_state(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return haar_random_state(d, rng);
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal folded back into Q.
template <class Rng>
ComplexMatrix haar_random_unitary(std::size_t d, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  const ComplexMatrix g = random_gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex diag = r(j, j);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(j) *= diag / mag;
  }
  return q;
}

/// Random Hermitian matrix from the Gaussian unitary ensemble (unnormalized).
template <class Rng>
ComplexMatrix random_hermitian(std::size_t d, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  const ComplexMatrix g = random_gaussian_matrix(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

}  // namespace channel_lab
