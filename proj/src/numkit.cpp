#include "relcalc/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace relcalc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidTolerance: return "InvalidTolerance";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotPD: return "NotPD";
    case ErrorCode::NotContraction: return "NotContraction";
    case ErrorCode::NotSelfadjoint: return "NotSelfadjoint";
    case ErrorCode::NotNonnegative: return "NotNonnegative";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::DefectiveGraph: return "DefectiveGraph";
    case ErrorCode::SpectrumHit: return "SpectrumHit";
    case ErrorCode::OutOfFormDomain: return "OutOfFormDomain";
    case ErrorCode::NotReducing: return "NotReducing";
    case ErrorCode::SingularCompression: return "SingularCompression";
    case ErrorCode::NonMonotoneStep: return "NonMonotoneStep";
    case ErrorCode::NotContractive: return "NotContractive";
    case ErrorCode::ParamOutOfInterval: return "ParamOutOfInterval";
    case ErrorCode::NotAnExtension: return "NotAnExtension";
    case ErrorCode::CriteriaDisagree: return "CriteriaDisagree";
    case ErrorCode::ExtremalPair: return "ExtremalPair";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownProperty: return "UnknownProperty";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::IO: return "IO";
  }
  return "Unknown";
}

void Tolerance::validate() const {
  auto ok = [](double v) { return v > 0.0 && v < 1e-2; };
  if (!ok(rank_rel) || !ok(psd_slack) || !(limit > 0.0)) {
    std::ostringstream os;
    os << "rank_rel=" << rank_rel << " psd_slack=" << psd_slack << " limit=" << limit;
    throw Error(ErrorCode::InvalidTolerance, os.str());
  }
}

double Tolerance::subspace_gap() const { return std::sqrt(2.0 * rank_rel); }

double opnorm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

// ---------------------------------------------------------------------------
// HermMatrix

HermMatrix::HermMatrix(Matrix m, double tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "HermMatrix requires a square matrix");
  }
  const double asym = (m - m.adjoint()).norm();
  if (asym > tol * (1.0 + m.norm())) {
    std::ostringstream os;
    os << "‖M − M*‖_F = " << asym;
    throw Error(ErrorCode::NotHermitian, os.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermMatrix HermMatrix::identity(Eigen::Index n) { return HermMatrix(Matrix::Identity(n, n)); }
HermMatrix HermMatrix::zero(Eigen::Index n) { return HermMatrix(Matrix::Zero(n, n)); }
HermMatrix HermMatrix::diagonal(const RealVector& d) {
  return HermMatrix(Matrix(d.cast<cplx>().asDiagonal()));
}

double HermMatrix::norm() const {
  if (m_.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

HermMatrix HermMatrix::operator+(const HermMatrix& o) const { return HermMatrix(m_ + o.m_); }
HermMatrix HermMatrix::operator-(const HermMatrix& o) const { return HermMatrix(m_ - o.m_); }
HermMatrix HermMatrix::operator-() const { return HermMatrix(Matrix(-m_)); }
HermMatrix HermMatrix::operator*(double s) const { return HermMatrix(Matrix(s * m_)); }

// ---------------------------------------------------------------------------
// Subspace

Subspace::Subspace(Eigen::Index n, Matrix basis, double tol) : n_(n), basis_(std::move(basis)) {
  if (basis_.rows() != n) {
    throw Error(ErrorCode::DimensionMismatch, "subspace basis row count differs from n");
  }
  const Eigen::Index d = basis_.cols();
  if (d > n) throw Error(ErrorCode::NotOrthonormal, "more basis vectors than ambient dimension");
  if (d > 0) {
    const double err = (basis_.adjoint() * basis_ - Matrix::Identity(d, d)).norm();
    if (err > tol) {
      std::ostringstream os;
      os << "‖B*B − I‖_F = " << err;
      throw Error(ErrorCode::NotOrthonormal, os.str());
    }
  }
}

Subspace Subspace::zero(Eigen::Index n) { return Subspace(n, Matrix(n, 0)); }
Subspace Subspace::full(Eigen::Index n) { return Subspace(n, Matrix::Identity(n, n)); }
Subspace Subspace::span(const Matrix& columns, const Tolerance& tol) { return range(columns, tol); }

// ---------------------------------------------------------------------------
// Spectral helpers

Eigh eigh(const HermMatrix& m) {
  if (m.dim() == 0) return {RealVector(0), Matrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.matrix());
  return {es.eigenvalues(), es.eigenvectors()};
}

HermMatrix pinv(const HermMatrix& m, const Tolerance& tol, double reference) {
  const Eigh e = eigh(m);
  if (e.values.size() == 0) return m;
  const double cut = tol.rank_rel * std::max(e.values.cwiseAbs().maxCoeff(), reference);
  RealVector inv(e.values.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    const double l = e.values(i);
    inv(i) = (std::abs(l) <= cut || l == 0.0) ? 0.0 : 1.0 / l;
  }
  return HermMatrix(e.vectors * inv.asDiagonal() * e.vectors.adjoint());
}

Matrix pinv_general(const Matrix& m, const Tolerance& tol) {
  if (m.size() == 0) return Matrix::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  const double cut = tol.rank_rel * s(0);
  RealVector inv(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) inv(i) = (s(i) <= cut || s(i) == 0.0) ? 0.0 : 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

namespace {

// Eigenvalues of a PSD matrix with slack clamping and rank truncation applied.
Eigh clamped_psd_spectrum(const HermMatrix& s, const Tolerance& tol, double reference) {
  Eigh e = eigh(s);
  if (e.values.size() == 0) return e;
  const double top = std::max(e.values.cwiseAbs().maxCoeff(), reference);
  const double floor = -tol.psd_slack * (1.0 + top);
  if (e.values(0) < floor) {
    std::ostringstream os;
    os << "eigenvalue " << e.values(0) << " below " << floor;
    throw Error(ErrorCode::NotPSD, os.str());
  }
  const double cut = tol.rank_rel * std::max(e.values.maxCoeff(), reference);
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) <= cut) e.values(i) = 0.0;
  }
  return e;
}

}  // namespace

HermMatrix psd_sqrt(const HermMatrix& s, const Tolerance& tol, double reference) {
  const Eigh e = clamped_psd_spectrum(s, tol, reference);
  if (e.values.size() == 0) return s;
  const RealVector r = e.values.cwiseSqrt();
  return HermMatrix(e.vectors * r.asDiagonal() * e.vectors.adjoint());
}

HermMatrix pinv_sqrt(const HermMatrix& s, const Tolerance& tol, double reference) {
  const Eigh e = clamped_psd_spectrum(s, tol, reference);
  if (e.values.size() == 0) return s;
  RealVector r(e.values.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = e.values(i) > 0.0 ? 1.0 / std::sqrt(e.values(i)) : 0.0;
  return HermMatrix(e.vectors * r.asDiagonal() * e.vectors.adjoint());
}

double min_eigenvalue(const HermMatrix& m) {
  if (m.dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool loewner_leq(const HermMatrix& a, const HermMatrix& b, const Tolerance& tol) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "loewner_leq operands");
  return min_eigenvalue(b - a) >= -tol.psd_slack * (1.0 + a.norm() + b.norm());
}

// ---------------------------------------------------------------------------
// Subspace algebra

Subspace range(const Matrix& m, const Tolerance& tol, double reference) {
  const Eigen::Index n = m.rows();
  if (m.size() == 0) return Subspace::zero(n);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const RealVector& s = svd.singularValues();
  if (s(0) == 0.0) return Subspace::zero(n);
  const double cut = tol.rank_rel * std::max(s(0), reference);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return Subspace(n, svd.matrixU().leftCols(r));
}

Subspace kernel(const Matrix& m, const Tolerance& tol, double reference) {
  const Eigen::Index cols = m.cols();
  if (cols == 0) return Subspace::zero(0);
  if (m.rows() == 0) return Subspace::full(cols);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  Eigen::Index r = 0;
  if (s(0) > 0.0) {
    const double cut = tol.rank_rel * std::max(s(0), reference);
    while (r < s.size() && s(r) > cut) ++r;
  }
  return Subspace(cols, svd.matrixV().rightCols(cols - r));
}

Matrix orthonormalize(const Matrix& columns) {
  if (columns.cols() == 0) return columns;
  Eigen::HouseholderQR<Matrix> qr(columns);
  Matrix q = qr.householderQ() * Matrix::Identity(columns.rows(), columns.cols());
  return q;
}

Subspace orth_complement(const Subspace& u) {
  const Eigen::Index n = u.ambient();
  const Eigen::Index d = u.dim();
  if (d == 0) return Subspace::full(n);
  Eigen::HouseholderQR<Matrix> qr(u.basis());
  Matrix q = qr.householderQ();
  return Subspace(n, q.rightCols(n - d));
}

namespace {

void require_same_ambient(const Subspace& u, const Subspace& v, const char* what) {
  if (u.ambient() != v.ambient()) throw Error(ErrorCode::DimensionMismatch, what);
}

}  // namespace

Subspace meet(const Subspace& u, const Subspace& v, const Tolerance& tol) {
  require_same_ambient(u, v, "meet");
  const Eigen::Index n = u.ambient();
  if (u.dim() == 0 || v.dim() == 0) return Subspace::zero(n);
  // Principal angles: singular values of U*V are the cosines.
  Eigen::JacobiSVD<Matrix> svd(u.basis().adjoint() * v.basis(), Eigen::ComputeThinU);
  const RealVector& c = svd.singularValues();
  Eigen::Index k = 0;
  while (k < c.size() && c(k) >= 1.0 - tol.rank_rel) ++k;
  return Subspace(n, u.basis() * svd.matrixU().leftCols(k));
}

Subspace join(const Subspace& u, const Subspace& v, const Tolerance& tol) {
  require_same_ambient(u, v, "join");
  const Eigen::Index n = u.ambient();
  if (u.dim() == 0) return v;
  if (v.dim() == 0) return u;
  Eigen::JacobiSVD<Matrix> svd(u.basis().adjoint() * v.basis(), Eigen::ComputeFullV);
  const RealVector& c = svd.singularValues();
  const Eigen::Index dv = v.dim();
  // Principal vectors of V that are not shared with U contribute their
  // components orthogonal to U; these are mutually orthogonal with norm sin θ.
  Matrix extra(n, dv);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < dv; ++i) {
    const double cosine = i < c.size() ? c(i) : 0.0;
    if (cosine >= 1.0 - tol.rank_rel) continue;
    Vector w = v.basis() * svd.matrixV().col(i);
    w -= u.basis() * (u.basis().adjoint() * w);
    const double nrm = w.norm();
    if (nrm == 0.0) continue;
    extra.col(k++) = w / nrm;
  }
  Matrix basis(n, u.dim() + k);
  basis << u.basis(), extra.leftCols(k);
  // Re-orthonormalize to remove rounding drift between the two blocks.
  return Subspace(n, orthonormalize(basis));
}

HermMatrix projector(const Subspace& u) {
  return HermMatrix(Matrix(u.basis() * u.basis().adjoint()));
}

double subspace_gap(const Subspace& u, const Subspace& v) {
  if (u.ambient() != v.ambient()) return std::numeric_limits<double>::infinity();
  return opnorm(projector(u).matrix() - projector(v).matrix());
}

bool same_subspace(const Subspace& u, const Subspace& v, const Tolerance& tol) {
  return u.ambient() == v.ambient() && u.dim() == v.dim() && subspace_gap(u, v) <= tol.subspace_gap();
}

bool contained_in(const Subspace& u, const Subspace& v, const Tolerance& tol) {
  require_same_ambient(u, v, "contained_in");
  if (u.dim() == 0) return true;
  const Matrix residual = u.basis() - v.basis() * (v.basis().adjoint() * u.basis());
  return opnorm(residual) <= tol.subspace_gap();
}

}  // namespace relcalc
