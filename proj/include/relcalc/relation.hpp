#pragma once

// Linear relations in C^n: graph subspaces of C^n ⊕ C^n and, for nonnegative
// selfadjoint relations, the Cayley-transform contraction T = −I + 2(I + A)^{-1}.

#include "relcalc/numkit.hpp"

namespace relcalc {

/// A closed linear relation, stored as an orthonormal basis of its graph in
/// C^{2n}: the top n rows are first components f, the bottom n rows are f′.
class LinearRelation {
 public:
  LinearRelation() = default;
  LinearRelation(Eigen::Index n, Subspace graph);

  /// Graph of an everywhere defined operator: range [I; A].
  static LinearRelation from_graph(const Matrix& op);
  /// Relation spanned by the pairs (F c, G c).
  static LinearRelation from_generators(const Matrix& first, const Matrix& second, const Tolerance& tol = {});

  Eigen::Index n() const { return n_; }
  const Subspace& graph() const { return graph_; }
  Matrix first() const { return graph_.basis().topRows(n_); }
  Matrix second() const { return graph_.basis().bottomRows(n_); }

 private:
  Eigen::Index n_ = 0;
  Subspace graph_;
};

struct RelationParts {
  Subspace dom, ran, ker, mul;
  /// Operator part as an n×n matrix: maps dom into mul⊥ and is zero on dom⊥.
  Matrix op_matrix;
};

LinearRelation adjoint(const LinearRelation& r);
LinearRelation inverse(const LinearRelation& r);
RelationParts parts(const LinearRelation& r, const Tolerance& tol = {});

bool is_symmetric(const LinearRelation& r, const Tolerance& tol = {});
bool is_selfadjoint(const LinearRelation& r, const Tolerance& tol = {});
bool is_nonnegative(const LinearRelation& r, const Tolerance& tol = {});

/// Gap between graphs.
double relation_gap(const LinearRelation& a, const LinearRelation& b);

/// Nonnegative selfadjoint relation represented by its Cayley transform, a
/// Hermitian contraction T with −I ≤ T ≤ I. Eigenvalue −1 of T is the
/// multivalued part, eigenvalue +1 the kernel.
class NonnegRelation {
 public:
  NonnegRelation() = default;
  /// Checks −I ≤ T ≤ I within psd_slack and clamps the spectrum into [−1, 1].
  explicit NonnegRelation(const HermMatrix& cayley, const Tolerance& tol = {});

  /// Bounded PSD operator A, T = (I − A)(I + A)^{-1}.
  static NonnegRelation from_operator(const HermMatrix& op, const Tolerance& tol = {});
  static NonnegRelation zero_operator(Eigen::Index n);
  /// {0} ⊕ C^n.
  static NonnegRelation purely_multivalued(Eigen::Index n);
  static NonnegRelation identity(Eigen::Index n);

  Eigen::Index n() const { return t_.dim(); }
  const HermMatrix& cayley() const { return t_; }

 private:
  HermMatrix t_;
};

/// Requires R selfadjoint and nonnegative; T = 2F(F + G)^{-1} − I.
NonnegRelation cayley(const LinearRelation& r, const Tolerance& tol = {});
/// Graph range [I + T; I − T].
LinearRelation uncayley(const NonnegRelation& a);
/// A^{-1}: T ↦ −T.
NonnegRelation rel_inverse(const NonnegRelation& a);
/// λA = {(f, λf′)}, λ > 0, computed through the graph.
NonnegRelation scale(const NonnegRelation& a, double lambda, const Tolerance& tol = {});
/// A + εI for ε ≥ 0.
NonnegRelation shift(const NonnegRelation& a, double eps, const Tolerance& tol = {});

/// (A − λ)^{-1} = (A_o − λ)^{-1} P_A for λ off [0, ∞).
Matrix resolvent(const NonnegRelation& a, cplx lambda, const Tolerance& tol = {});

/// 𝒟[A] = ran (I + T).
Subspace form_domain(const NonnegRelation& a, const Tolerance& tol = {});
/// A[u, v] = −(u, v) + 2((I + T)^{[−1/2]}u, (I + T)^{[−1/2]}v); throws
/// OutOfFormDomain when u or v leaves 𝒟[A].
cplx form_eval(const NonnegRelation& a, const Vector& u, const Vector& v, const Tolerance& tol = {});
/// Gram matrix of the form on the basis of `d` (which must lie in 𝒟[A]).
HermMatrix form_gram(const NonnegRelation& a, const Subspace& d, const Tolerance& tol = {});
/// ran A^{1/2} = ran (I − T).
Subspace sqrt_range(const NonnegRelation& a, const Tolerance& tol = {});

Subspace mul_part(const NonnegRelation& a, const Tolerance& tol = {});
Subspace ker_part(const NonnegRelation& a, const Tolerance& tol = {});
bool is_operator(const NonnegRelation& a, const Tolerance& tol = {});
/// Matrix of A when mul A = {0}; throws InvalidArgument otherwise.
HermMatrix operator_matrix(const NonnegRelation& a, const Tolerance& tol = {});

/// A ≤ B ⟺ T_B ≤ T_A.
bool rel_leq(const NonnegRelation& a, const NonnegRelation& b, const Tolerance& tol = {});
/// ‖T_A − T_B‖/2 = ‖(A + I)^{-1} − (B + I)^{-1}‖.
double resolvent_distance(const NonnegRelation& a, const NonnegRelation& b);

/// Unique nonnegative selfadjoint relation with form domain `d` and form
/// matrix `q` (dim d × dim d, PSD) in the basis of `d`.
NonnegRelation from_form(const Subspace& d, const HermMatrix& q, const Tolerance& tol = {});

/// Part of A in a reducing subspace L, as a relation in C^{dim L} (coordinates
/// of L's basis). Throws NotReducing when L does not reduce T.
NonnegRelation restrict_reducing(const NonnegRelation& a, const Subspace& l, const Tolerance& tol = {});
/// A_L ⊕ (0 on L⊥): inverse of restrict_reducing for relations with kernel ⊇ L⊥.
NonnegRelation embed_with_kernel(const NonnegRelation& part, const Subspace& l);

}  // namespace relcalc
