#pragma once

// Kreĭn shorting of PSD matrices and nonnegative selfadjoint relations,
// compressions, and the Weyl (Nevanlinna) family with its endpoint limits.

#include <optional>
#include <vector>

#include "relcalc/relation.hpp"

namespace relcalc {

/// S_L = S^{1/2} P_M S^{1/2} with M = {f : S^{1/2} f ∈ L}.
HermMatrix short_psd(const HermMatrix& s, const Subspace& l, const Tolerance& tol = {});
/// Generalized Schur complement in the block form L⊥ ⊕ L:
/// S_L = 0 ⊕ (S22 − (S11^{[−1/2]} S12)^* (S11^{[−1/2]} S12)).
HermMatrix short_psd_schur(const HermMatrix& s, const Subspace& l, const Tolerance& tol = {});

/// A_L, Cayley transform I − (I − T)_L.
NonnegRelation short_rel(const NonnegRelation& a, const Subspace& l, const Tolerance& tol = {});
/// (A^{-1})_L, Cayley transform I − (I + T)_L.
NonnegRelation antishort(const NonnegRelation& a, const Subspace& l, const Tolerance& tol = {});

struct ShortDiagnostics {
  Subspace sqrt_range_short;  // ran (A_L)^{1/2}
  Subspace sqrt_range_meet;   // ran A^{1/2} ∧ L
  Subspace mul_short;         // mul A_L
  Subspace mul_meet;          // mul A ∧ L
  /// max |(A_L↾L)^{-1}[u_i, u_j] − A^{-1}[u_i, u_j]| over a basis of ran A^{1/2} ∧ L.
  double sesquilinear_residual = 0.0;
};

ShortDiagnostics short_parts(const NonnegRelation& a, const Subspace& l, const Tolerance& tol = {});

/// P_L A↾L as a relation in the coordinates of L's basis.
NonnegRelation compress(const NonnegRelation& a, const Subspace& l, const Tolerance& tol = {});

/// M(λ) = −(P_L (A − λ)^{-1}↾L)^{-1} − λ I_L for real λ < 0.
struct WeylSample {
  double lambda = 0.0;
  HermMatrix value;
};

/// Throws SingularCompression when the compressed resolvent is numerically
/// singular (M(λ) is then a relation, see weyl_relation).
WeylSample weyl_eval(const NonnegRelation& a, const Subspace& l, double lambda, const Tolerance& tol = {});
/// −M(λ) as a nonnegative selfadjoint relation in L; defined even when the
/// compressed resolvent is singular.
NonnegRelation weyl_relation(const NonnegRelation& a, const Subspace& l, double lambda, const Tolerance& tol = {});

/// One row of a convergence trace: k, the schedule point, resolvent gap to the
/// previous iterate and whether the monotonicity check passed.
struct TraceRow {
  int k = 0;
  double point = 0.0;
  double resolvent_gap = 0.0;
  bool monotone_ok = true;
};

struct LimitResult {
  /// Cauchy criterion: tail_estimate ≤ tol.limit.
  bool converged = false;
  /// Estimated distance from the last iterate to the limit: the last gap,
  /// scaled by r/(1 − r) when the gaps contract geometrically with ratio r.
  double tail_estimate = 0.0;
  /// Last iterate as a relation (for Weyl limits this is −M at the last point).
  NonnegRelation relation;
  /// Limit of M as a matrix when converged and operator valued.
  std::optional<HermMatrix> matrix;
  std::vector<TraceRow> trace;
};

struct WeylLimits {
  LimitResult at_zero;      // λ ↑ 0
  LimitResult at_infinity;  // λ ↓ −∞
};

/// Default ladder k = 1..k_max for the 10^{±k} schedules.
std::vector<int> ladder(int k_max = 8);

WeylLimits weyl_limits(const NonnegRelation& a, const Subspace& l, const Tolerance& tol = {},
                       const std::vector<int>& schedule = ladder());

/// A : tP_L for t = 10^k; the last iterate approximates A_L.
LimitResult short_by_parallel_limit(const NonnegRelation& a, const Subspace& l,
                                    const std::vector<int>& schedule = ladder(), const Tolerance& tol = {});

/// tP_L as a nonnegative relation.
NonnegRelation scaled_projection(const Subspace& l, double t, const Tolerance& tol = {});

}  // namespace relcalc
