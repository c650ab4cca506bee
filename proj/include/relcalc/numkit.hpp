#pragma once

// Tolerance-aware dense Hermitian linear algebra over C^n.

#include <complex>
#include <utility>

#include <Eigen/Dense>

#include "relcalc/error.hpp"

namespace relcalc {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Numerical cutoffs shared by every module.
///
/// `rank_rel` is a relative singular/eigenvalue cutoff: a value is treated as
/// zero when it is at most `rank_rel` times the largest one. `psd_slack` is the
/// slack used in Loewner-order tests, scaled by (1 + norms of the operands).
/// `limit` is the looser tolerance for schedule-driven limits (resolvent metric).
struct Tolerance {
  double rank_rel = 1e-10;
  double psd_slack = 1e-9;
  double limit = 1e-5;

  /// Throws InvalidTolerance unless 0 < rank_rel, psd_slack < 1e-2 and limit > 0.
  void validate() const;

  /// Largest gap between projectors at which two subspaces are considered equal.
  /// Matches the principal-angle threshold used by meet().
  double subspace_gap() const;
};

/// Spectral norm of an arbitrary matrix.
double opnorm(const Matrix& m);

/// n×n complex matrix, Hermitian within tolerance at construction. The stored
/// value is the exact Hermitian part of the input.
class HermMatrix {
 public:
  static constexpr double kHermitianTol = 1e-8;

  HermMatrix() = default;
  explicit HermMatrix(Matrix m, double tol = kHermitianTol);

  static HermMatrix identity(Eigen::Index n);
  static HermMatrix zero(Eigen::Index n);
  static HermMatrix diagonal(const RealVector& d);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double norm() const;  // spectral norm

  HermMatrix operator+(const HermMatrix& o) const;
  HermMatrix operator-(const HermMatrix& o) const;
  HermMatrix operator-() const;
  HermMatrix operator*(double s) const;

 private:
  Matrix m_;
};

inline HermMatrix operator*(double s, const HermMatrix& h) { return h * s; }

/// Orthonormal-column basis of a subspace of C^n (d may be 0).
class Subspace {
 public:
  Subspace() = default;
  /// `basis` must have orthonormal columns within `tol`.
  Subspace(Eigen::Index n, Matrix basis, double tol = 1e-8);

  static Subspace zero(Eigen::Index n);
  static Subspace full(Eigen::Index n);
  /// Span of the given columns (numerical range at cutoff `rank_rel`).
  static Subspace span(const Matrix& columns, const Tolerance& tol = {});

  Eigen::Index ambient() const { return n_; }
  Eigen::Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

 private:
  Eigen::Index n_ = 0;
  Matrix basis_;
};

struct Eigh {
  RealVector values;  // ascending
  Matrix vectors;     // unitary, columns match values
};

Eigh eigh(const HermMatrix& m);

// Rank decisions below compare against rank_rel·max(own scale, reference);
// pass `reference` when the operand is a block of a larger computation whose
// scale should set the noise floor.

/// Moore–Penrose pseudoinverse; eigenvalues with |λ| ≤ rank_rel·max|λ| are dropped.
HermMatrix pinv(const HermMatrix& m, const Tolerance& tol = {}, double reference = 0.0);
/// Moore–Penrose pseudoinverse of a general rectangular matrix (SVD cutoff).
Matrix pinv_general(const Matrix& m, const Tolerance& tol = {});

/// Square root of a PSD matrix. Negative eigenvalues above
/// −psd_slack·(1+‖S‖) and eigenvalues below rank_rel·max are set to zero;
/// anything more negative throws NotPSD.
HermMatrix psd_sqrt(const HermMatrix& s, const Tolerance& tol = {}, double reference = 0.0);
/// pinv(psd_sqrt(s)).
HermMatrix pinv_sqrt(const HermMatrix& s, const Tolerance& tol = {}, double reference = 0.0);

/// Numerical column space / null space of a general matrix.
Subspace range(const Matrix& m, const Tolerance& tol = {}, double reference = 0.0);
Subspace kernel(const Matrix& m, const Tolerance& tol = {}, double reference = 0.0);
inline Subspace range(const HermMatrix& m, const Tolerance& tol = {}) { return range(m.matrix(), tol); }
inline Subspace kernel(const HermMatrix& m, const Tolerance& tol = {}) { return kernel(m.matrix(), tol); }

/// Orthonormal basis of a full-column-rank matrix (thin QR, no rank decision).
Matrix orthonormalize(const Matrix& columns);

Subspace orth_complement(const Subspace& u);
Subspace meet(const Subspace& u, const Subspace& v, const Tolerance& tol = {});
Subspace join(const Subspace& u, const Subspace& v, const Tolerance& tol = {});

HermMatrix projector(const Subspace& u);

/// ‖P_U − P_V‖ (spectral); +inf when ambient dimensions differ.
double subspace_gap(const Subspace& u, const Subspace& v);
/// Equal dimension and gap ≤ tol.subspace_gap().
bool same_subspace(const Subspace& u, const Subspace& v, const Tolerance& tol = {});
/// ‖(I − P_V) U‖ ≤ tol.subspace_gap().
bool contained_in(const Subspace& u, const Subspace& v, const Tolerance& tol = {});

/// Minimum eigenvalue of a Hermitian matrix.
double min_eigenvalue(const HermMatrix& m);
/// A ≤ B, i.e. λ_min(B − A) ≥ −psd_slack·(1 + ‖A‖ + ‖B‖).
bool loewner_leq(const HermMatrix& a, const HermMatrix& b, const Tolerance& tol = {});

/// Apply f to the eigenvalues of a Hermitian matrix.
template <typename F>
HermMatrix spectral_map(const HermMatrix& m, F&& f) {
  const Eigh e = eigh(m);
  RealVector mapped(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) mapped(i) = f(e.values(i));
  return HermMatrix(e.vectors * mapped.asDiagonal() * e.vectors.adjoint());
}

}  // namespace relcalc
