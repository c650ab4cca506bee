#include "relcalc/relation.hpp"

#include <cmath>
#include <sstream>

namespace relcalc {

namespace {

Matrix stack(const Matrix& top, const Matrix& bottom) {
  Matrix m(top.rows() + bottom.rows(), top.cols());
  m << top, bottom;
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// LinearRelation

LinearRelation::LinearRelation(Eigen::Index n, Subspace graph) : n_(n), graph_(std::move(graph)) {
  if (graph_.ambient() != 2 * n) {
    throw Error(ErrorCode::DimensionMismatch, "graph must live in C^{2n}");
  }
}

LinearRelation LinearRelation::from_graph(const Matrix& op) {
  const Eigen::Index n = op.rows();
  if (op.cols() != n) throw Error(ErrorCode::DimensionMismatch, "from_graph needs a square matrix");
  return LinearRelation(n, Subspace(2 * n, orthonormalize(stack(Matrix::Identity(n, n), op))));
}

LinearRelation LinearRelation::from_generators(const Matrix& first, const Matrix& second, const Tolerance& tol) {
  if (first.rows() != second.rows() || first.cols() != second.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "generator blocks differ in shape");
  }
  return LinearRelation(first.rows(), range(stack(first, second), tol));
}

LinearRelation adjoint(const LinearRelation& r) {
  const cplx i(0.0, 1.0);
  // J(f, f′) = (i f′, −i f) is unitary, so J·basis stays orthonormal.
  const Matrix jg = stack(i * r.second(), -i * r.first());
  return LinearRelation(r.n(), orth_complement(Subspace(2 * r.n(), jg)));
}

LinearRelation inverse(const LinearRelation& r) {
  return LinearRelation(r.n(), Subspace(2 * r.n(), stack(r.second(), r.first())));
}

RelationParts parts(const LinearRelation& r, const Tolerance& tol) {
  const Eigen::Index n = r.n();
  const Matrix f = r.first();
  const Matrix g = r.second();
  RelationParts p;
  p.dom = range(f, tol);
  p.ran = range(g, tol);
  if (r.graph().dim() == 0) {
    p.ker = Subspace::zero(n);
    p.mul = Subspace::zero(n);
    p.op_matrix = Matrix::Zero(n, n);
    return p;
  }
  // f ∈ ker ⟺ (f, 0) = (F c, G c) with G c = 0; symmetrically for mul.
  p.ker = range(Matrix(f * kernel(g, tol).basis()), tol);
  p.mul = range(Matrix(g * kernel(f, tol).basis()), tol);
  const Matrix off_mul = Matrix::Identity(n, n) - p.mul.basis() * p.mul.basis().adjoint();
  p.op_matrix = off_mul * g * pinv_general(f, tol);
  return p;
}

bool is_symmetric(const LinearRelation& r, const Tolerance& tol) {
  return contained_in(r.graph(), adjoint(r).graph(), tol);
}

bool is_selfadjoint(const LinearRelation& r, const Tolerance& tol) {
  return same_subspace(r.graph(), adjoint(r).graph(), tol);
}

bool is_nonnegative(const LinearRelation& r, const Tolerance& tol) {
  if (r.graph().dim() == 0) return true;
  const Matrix f = r.first();
  const Matrix g = r.second();
  // The graph basis is orthonormal, so ‖f‖² + ‖f′‖² = ‖c‖² for (F c, G c).
  const HermMatrix gram(Matrix(0.5 * (f.adjoint() * g + g.adjoint() * f)));
  return min_eigenvalue(gram) >= -tol.psd_slack;
}

double relation_gap(const LinearRelation& a, const LinearRelation& b) {
  return subspace_gap(a.graph(), b.graph());
}

// ---------------------------------------------------------------------------
// NonnegRelation

NonnegRelation::NonnegRelation(const HermMatrix& cayley, const Tolerance& tol) {
  const Eigh e = eigh(cayley);
  const double slack = tol.psd_slack * 2.0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) < -1.0 - slack || e.values(i) > 1.0 + slack) {
      std::ostringstream os;
      os << "Cayley transform has eigenvalue " << e.values(i) << " outside [-1, 1]";
      throw Error(ErrorCode::NotContraction, os.str());
    }
  }
  if (e.values.size() > 0 && (e.values.minCoeff() < -1.0 || e.values.maxCoeff() > 1.0)) {
    const RealVector clamped = e.values.cwiseMax(-1.0).cwiseMin(1.0);
    t_ = HermMatrix(e.vectors * clamped.asDiagonal() * e.vectors.adjoint());
  } else {
    t_ = cayley;
  }
}

NonnegRelation NonnegRelation::from_operator(const HermMatrix& op, const Tolerance& tol) {
  if (min_eigenvalue(op) < -tol.psd_slack * (1.0 + op.norm())) {
    throw Error(ErrorCode::NotNonnegative, "operator is not PSD");
  }
  const Eigen::Index n = op.dim();
  const Matrix id = Matrix::Identity(n, n);
  // (I − A)(I + A)^{-1}; I + A is PD and commutes with I − A.
  const Matrix t = (id + op.matrix()).ldlt().solve(id - op.matrix());
  return NonnegRelation(HermMatrix(t), tol);
}

NonnegRelation NonnegRelation::zero_operator(Eigen::Index n) { return NonnegRelation(HermMatrix::identity(n)); }
NonnegRelation NonnegRelation::purely_multivalued(Eigen::Index n) { return NonnegRelation(-HermMatrix::identity(n)); }
NonnegRelation NonnegRelation::identity(Eigen::Index n) { return NonnegRelation(HermMatrix::zero(n)); }

NonnegRelation cayley(const LinearRelation& r, const Tolerance& tol) {
  if (!is_selfadjoint(r, tol)) throw Error(ErrorCode::NotSelfadjoint, "cayley requires a selfadjoint relation");
  if (!is_nonnegative(r, tol)) throw Error(ErrorCode::NotNonnegative, "cayley requires a nonnegative relation");
  const Matrix f = r.first();
  const Matrix g = r.second();
  const Matrix sum = f + g;
  Eigen::JacobiSVD<Matrix> svd(sum);
  const RealVector& s = svd.singularValues();
  if (s.size() != r.n() || s(s.size() - 1) <= tol.rank_rel * s(0)) {
    throw Error(ErrorCode::DefectiveGraph, "F + G is rank deficient");
  }
  // T(f + f′) = f − f′.
  const Matrix t = sum.transpose().fullPivLu().solve(Matrix((f - g).transpose())).transpose();
  return NonnegRelation(HermMatrix(t), tol);
}

LinearRelation uncayley(const NonnegRelation& a) {
  const Eigen::Index n = a.n();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix& t = a.cayley().matrix();
  return LinearRelation(n, Subspace(2 * n, orthonormalize(stack(id + t, id - t))));
}

NonnegRelation rel_inverse(const NonnegRelation& a) { return NonnegRelation(-a.cayley()); }

NonnegRelation scale(const NonnegRelation& a, double lambda, const Tolerance& tol) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "scale requires a finite λ > 0");
  }
  if (lambda == 1.0) return a;
  const LinearRelation g = uncayley(a);
  return cayley(LinearRelation::from_generators(g.first(), lambda * g.second(), tol), tol);
}

NonnegRelation shift(const NonnegRelation& a, double eps, const Tolerance& tol) {
  if (!(eps >= 0.0)) throw Error(ErrorCode::InvalidArgument, "shift requires ε ≥ 0");
  const Eigen::Index n = a.n();
  const Matrix r = resolvent(a, cplx(-1.0 - eps, 0.0), tol);
  return NonnegRelation(HermMatrix(Matrix(-Matrix::Identity(n, n) + 2.0 * r)), tol);
}

Matrix resolvent(const NonnegRelation& a, cplx lambda, const Tolerance& tol) {
  if (lambda.imag() == 0.0 && lambda.real() >= 0.0) {
    throw Error(ErrorCode::SpectrumHit, "λ must lie off [0, ∞)");
  }
  // On an eigenvector of T with eigenvalue t the operator part acts as
  // (1 − t)/(1 + t); the multivalued part (t = −1) is sent to 0.
  const Eigh e = eigh(a.cayley());
  Eigen::VectorXcd d(e.values.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double t = e.values(i);
    const cplx den = (1.0 - t) - lambda * (1.0 + t);
    if (std::abs(den) <= tol.rank_rel * (std::abs(1.0 - t) + std::abs(lambda) * (1.0 + t))) {
      std::ostringstream os;
      os << "λ = " << lambda << " is within tolerance of the spectrum";
      throw Error(ErrorCode::SpectrumHit, os.str());
    }
    d(i) = (1.0 + t) / den;
  }
  return e.vectors * d.asDiagonal() * e.vectors.adjoint();
}

namespace {

HermMatrix shifted(const NonnegRelation& a, double sign) {
  const Eigen::Index n = a.n();
  return HermMatrix::identity(n) + a.cayley() * sign;
}

}  // namespace

Subspace form_domain(const NonnegRelation& a, const Tolerance& tol) { return range(shifted(a, 1.0).matrix(), tol, 2.0); }
Subspace sqrt_range(const NonnegRelation& a, const Tolerance& tol) { return range(shifted(a, -1.0).matrix(), tol, 2.0); }
Subspace mul_part(const NonnegRelation& a, const Tolerance& tol) { return kernel(shifted(a, 1.0).matrix(), tol, 2.0); }
Subspace ker_part(const NonnegRelation& a, const Tolerance& tol) { return kernel(shifted(a, -1.0).matrix(), tol, 2.0); }

bool is_operator(const NonnegRelation& a, const Tolerance& tol) { return mul_part(a, tol).dim() == 0; }

HermMatrix operator_matrix(const NonnegRelation& a, const Tolerance& tol) {
  if (!is_operator(a, tol)) throw Error(ErrorCode::InvalidArgument, "relation has a multivalued part");
  return spectral_map(a.cayley(), [](double t) { return (1.0 - t) / (1.0 + t); });
}

namespace {

void require_in_domain(const Subspace& dom, const Vector& u, const Tolerance& tol) {
  const Vector residual = u - dom.basis() * (dom.basis().adjoint() * u);
  if (residual.norm() > tol.subspace_gap() * (1.0 + u.norm())) {
    throw Error(ErrorCode::OutOfFormDomain, "vector is not in the form domain");
  }
}

}  // namespace

cplx form_eval(const NonnegRelation& a, const Vector& u, const Vector& v, const Tolerance& tol) {
  const Subspace dom = form_domain(a, tol);
  require_in_domain(dom, u, tol);
  require_in_domain(dom, v, tol);
  const HermMatrix p = pinv_sqrt(shifted(a, 1.0), tol, 2.0);
  const Vector pu = p.matrix() * u;
  const Vector pv = p.matrix() * v;
  return -v.dot(u) + 2.0 * pv.dot(pu);
}

HermMatrix form_gram(const NonnegRelation& a, const Subspace& d, const Tolerance& tol) {
  const Subspace dom = form_domain(a, tol);
  for (Eigen::Index j = 0; j < d.dim(); ++j) require_in_domain(dom, d.basis().col(j), tol);
  const Matrix pd = pinv_sqrt(shifted(a, 1.0), tol, 2.0).matrix() * d.basis();
  return HermMatrix(Matrix(-Matrix::Identity(d.dim(), d.dim()) + 2.0 * pd.adjoint() * pd));
}

bool rel_leq(const NonnegRelation& a, const NonnegRelation& b, const Tolerance& tol) {
  return loewner_leq(b.cayley(), a.cayley(), tol);
}

double resolvent_distance(const NonnegRelation& a, const NonnegRelation& b) {
  if (a.n() != b.n()) throw Error(ErrorCode::DimensionMismatch, "resolvent_distance operands");
  return 0.5 * (a.cayley() - b.cayley()).norm();
}

NonnegRelation from_form(const Subspace& d, const HermMatrix& q, const Tolerance& tol) {
  if (q.dim() != d.dim()) throw Error(ErrorCode::DimensionMismatch, "form matrix must match dim D");
  if (min_eigenvalue(q) < -tol.psd_slack * (1.0 + q.norm())) {
    throw Error(ErrorCode::NotPSD, "form matrix is not PSD");
  }
  const Eigen::Index n = d.ambient();
  const Subspace perp = orth_complement(d);
  Matrix first = Matrix::Zero(n, n);
  Matrix second(n, n);
  first.leftCols(d.dim()) = d.basis();
  second << d.basis() * q.matrix(), perp.basis();
  return cayley(LinearRelation::from_generators(first, second, tol), tol);
}

NonnegRelation restrict_reducing(const NonnegRelation& a, const Subspace& l, const Tolerance& tol) {
  if (l.ambient() != a.n()) throw Error(ErrorCode::DimensionMismatch, "restrict_reducing");
  const Matrix& t = a.cayley().matrix();
  const Matrix tl = t * l.basis();
  const Matrix leak = tl - l.basis() * (l.basis().adjoint() * tl);
  if (opnorm(leak) > tol.subspace_gap()) throw Error(ErrorCode::NotReducing, "L does not reduce T");
  return NonnegRelation(HermMatrix(Matrix(l.basis().adjoint() * tl)), tol);
}

NonnegRelation embed_with_kernel(const NonnegRelation& part, const Subspace& l) {
  if (part.n() != l.dim()) throw Error(ErrorCode::DimensionMismatch, "embed_with_kernel");
  const Eigen::Index n = l.ambient();
  const Matrix& b = l.basis();
  const Matrix t = b * part.cayley().matrix() * b.adjoint() + (Matrix::Identity(n, n) - b * b.adjoint());
  return NonnegRelation(HermMatrix(t));
}

}  // namespace relcalc
