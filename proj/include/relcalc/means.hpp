#pragma once

// Parallel addition, form sums and operator means of nonnegative selfadjoint
// relations. Every relation-level mean is computed on Cayley transforms and
// reduces to parallel_sum_psd.

#include <vector>

#include "relcalc/relation.hpp"

namespace relcalc {

/// A : B for PSD matrices via the Douglas factor K of A in A + B:
/// (A + B)^{1/2} (K − K²) (A + B)^{1/2}.
HermMatrix parallel_sum_psd(const HermMatrix& a, const HermMatrix& b, const Tolerance& tol = {});
/// h(A, B) = 2 (A : B) for PSD matrices.
HermMatrix harmonic_psd(const HermMatrix& a, const HermMatrix& b, const Tolerance& tol = {});

NonnegRelation parallel_sum_rel(const NonnegRelation& a, const NonnegRelation& b, const Tolerance& tol = {});
NonnegRelation form_sum(const NonnegRelation& a, const NonnegRelation& b, const Tolerance& tol = {});
/// Form sum from the first representation theorem: domain 𝒟[A] ∧ 𝒟[B],
/// form A[u] + B[u]. Independent of the Cayley identities.
NonnegRelation form_sum_oracle(const NonnegRelation& a, const NonnegRelation& b, const Tolerance& tol = {});

/// h(A, B): Cayley transform I − h(I − T_A, I − T_B).
NonnegRelation harmonic(const NonnegRelation& a, const NonnegRelation& b, const Tolerance& tol = {});
/// (A ∔ B)/2: Cayley transform h(I + T_A, I + T_B) − I.
NonnegRelation arithmetic(const NonnegRelation& a, const NonnegRelation& b, const Tolerance& tol = {});
/// Cayley transform (T_A + T_B)/2.
NonnegRelation c0_mean(const NonnegRelation& a, const NonnegRelation& b, const Tolerance& tol = {});

/// A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}; both strictly PD.
HermMatrix geometric_mean_pd(const HermMatrix& a, const HermMatrix& b, const Tolerance& tol = {});

struct AhStep {
  int step = 0;
  double gap_ab = 0.0;  // resolvent distance A_n ↔ B_n
  double move_a = 0.0;  // resolvent distance A_n ↔ A_{n−1}
  double move_b = 0.0;
  bool monotone_ok = true;
};

struct MeanPair {
  NonnegRelation upper;  // A_∞
  NonnegRelation lower;  // B_∞
  bool coincide = false;
  bool converged = false;
  std::vector<AhStep> trace;
};

struct AhOptions {
  int max_iter = 200;
  /// Cauchy threshold on the step-to-step movement of each sequence.
  double step_tol = 1e-12;
};

/// A_n = (A_{n−1} ∔ B_{n−1})/2, B_n = h(A_{n−1}, B_{n−1}). Throws
/// NonMonotoneStep when an order certificate fails; `coincide` compares the
/// two limits at tol.limit.
MeanPair ah_iterate(const NonnegRelation& a, const NonnegRelation& b, const AhOptions& opts = {},
                    const Tolerance& tol = {});

/// Predicted ah pairs for the configurations (0, A), ({0}⊕H, A) and (A, A^{-1}).
struct AhClosedForms {
  MeanPair zero_first;         // ah(0, A) = ⟨A′, 0⟩
  MeanPair multivalued_first;  // ah({0}⊕H, A) = ⟨{0}⊕H, A″⟩
  MeanPair with_inverse;       // ah(A, A^{-1}) = ⟨(P_{M⊥})^{-1}, P_{M⊥}⟩, M = mul A ⊕ ker A
  /// max_n ‖𝔆(B_n) − T^{2^n}‖ along the (A, A^{-1}) iteration.
  double cayley_power_residual = 0.0;
  int cayley_power_steps = 0;
};

AhClosedForms ah_closed_forms(const NonnegRelation& a, const AhOptions& opts = {}, const Tolerance& tol = {});

struct RegularizedResult {
  NonnegRelation relation;  // final H_ε
  std::vector<double> eps;
  std::vector<double> gap_to_previous;
  std::vector<bool> step_monotone;  // order certificate per schedule point
  bool monotone = true;
};

/// H_ε = ((A + ε)^{-1} + (B + ε)^{-1})^{-1} for ε = 10^{−k}.
RegularizedResult regularized_parallel_oracle(const NonnegRelation& a, const NonnegRelation& b,
                                              const std::vector<int>& eps_schedule, const Tolerance& tol = {});

}  // namespace relcalc
