#pragma once

// Nonnegative selfadjoint extensions of a nonnegative symmetric relation S,
// worked out on Cayley transforms: the Hermitian contraction Q on ran(S + I),
// its interval [Q_μ, Q_M] of selfadjoint contractive extensions, the
// Friedrichs and Kreĭn extensions, the interval parameterization and the
// scalar boundary-parameter calculus of the half-line example.

#include <optional>
#include <utility>

#include "relcalc/means.hpp"

namespace relcalc {

/// Hermitian contraction defined on a subspace: Q f for f ∈ dom, given as the
/// n×dim(dom) matrix of images of dom's basis vectors.
struct PartialContraction {
  Eigen::Index n = 0;
  Subspace dom;
  Matrix action;

  /// Throws DimensionMismatch, NotHermitian or NotContraction.
  void validate(const Tolerance& tol = {}) const;
};

struct ExtensionInterval {
  PartialContraction q;
  HermMatrix q_mu;  // Cayley transform of the Friedrichs extension
  HermMatrix q_M;   // Cayley transform of the Kreĭn extension
  Subspace n_def;   // 𝔑 = C^n ⊖ dom Q
  Subspace n0;      // 𝔑₀ = cran(Q_M − Q_μ)
  HermMatrix half_gap_sqrt;  // (Q_M − Q_μ)^{1/2}
};

/// dom Q = ran(S + I), Q(f + f′) = f − f′. Throws NotSymmetric, NotNonnegative.
PartialContraction symmetric_to_Q(const LinearRelation& s, const Tolerance& tol = {});

/// Extreme selfadjoint contractive extensions of Q (block choices X = ∓I).
/// Throws NotContractive when the block factor N has norm > 1.
ExtensionInterval extreme_extensions(const PartialContraction& q, const Tolerance& tol = {});

/// ‖(I + Q_μ)_𝔑‖ and ‖(I − Q_M)_𝔑‖; both vanish for a correct interval.
std::pair<double, double> interval_residuals(const ExtensionInterval& iv, const Tolerance& tol = {});

NonnegRelation friedrichs(const LinearRelation& s, const Tolerance& tol = {});
NonnegRelation krein(const LinearRelation& s, const Tolerance& tol = {});
/// S_K computed as ((S^{-1})_F)^{-1}.
NonnegRelation krein_via_inverse(const LinearRelation& s, const Tolerance& tol = {});

/// Q̃ = (Q_μ + Q_M)/2 + ½ G Z G with G = (Q_M − Q_μ)^{1/2}; Z is given in the
/// coordinates of iv.n0's basis. Throws ParamOutOfInterval unless −I ≤ Z ≤ I.
NonnegRelation param_to_extension(const ExtensionInterval& iv, const HermMatrix& z, const Tolerance& tol = {});
/// Inverse of param_to_extension. Throws NotAnExtension when 𝔆(S̃) does not
/// restrict to Q or has a component outside 𝔑₀, ParamOutOfInterval when the
/// recovered Z is not a contraction.
HermMatrix extension_to_param(const ExtensionInterval& iv, const NonnegRelation& ext, const Tolerance& tol = {});

struct ExtremalityCheck {
  bool extremal = false;
  double unitary_residual = 0.0;  // ‖Z² − I‖
  double short_residual = 0.0;    // ‖(I − Q̃²)_𝔑‖
};

/// Evaluates both extremality criteria; throws CriteriaDisagree when they differ.
ExtremalityCheck extremality(const ExtensionInterval& iv, const NonnegRelation& ext, const Tolerance& tol = {});
bool is_extremal(const ExtensionInterval& iv, const NonnegRelation& ext, const Tolerance& tol = {});

struct ParamMeans {
  HermMatrix arith;
  HermMatrix harm;
  HermMatrix c0;
};

/// Parameters of the arithmetic, harmonic and c₀ means of two extensions.
ParamMeans means_param_map(const HermMatrix& z1, const HermMatrix& z2, const Tolerance& tol = {});

struct AhExtensionResult {
  MeanPair pair;
  bool extremal_inputs = false;
  /// Extremal inputs: max resolvent movement from step 1 to step 2.
  double stabilization_residual = 0.0;
  /// dim 𝔑₀ = 1, non-extremal inputs: predicted and measured parameters.
  std::optional<double> w_predicted;
  std::optional<double> w_upper;
  std::optional<double> w_lower;
};

AhExtensionResult ah_extensions(const ExtensionInterval& iv, const NonnegRelation& s1, const NonnegRelation& s2,
                                const AhOptions& opts = {}, const Tolerance& tol = {});

/// Closed form of the arithmetic–harmonic parameter for deficiency one.
/// Throws ExtremalPair for (−1, 1) and (1, −1), InvalidArgument outside [−1, 1].
double scalar_w(double z1, double z2);

struct ScalarRecursion {
  double w = 0.0;
  int steps = 0;
  bool monotone = true;
};

/// Iterates 1 + z1′ = h(1 + z1, 1 + z2), 1 − z2′ = h(1 − z1, 1 − z2).
ScalarRecursion scalar_w_by_recursion(double z1, double z2, double tol = 1e-15, int max_steps = 2000);

/// Extended nonnegative real; +∞ is a regular value.
struct BoundaryParam {
  double value = 0.0;

  static BoundaryParam inf();
  bool is_inf() const;
  /// Throws InvalidArgument unless value ≥ 0 or value = +∞.
  void validate() const;
  /// Accepts decimal numbers and "inf"/"∞"; throws Parse.
  static BoundaryParam parse(const std::string& text);
  std::string str() const;
};

enum class BcKind { Arith, Harm, C0, Ah };

struct BcResult {
  BoundaryParam value;
  /// Set when the arithmetic–harmonic mean is a pair ⟨upper, lower⟩.
  std::optional<std::pair<BoundaryParam, BoundaryParam>> pair;
  bool is_pair() const { return pair.has_value(); }
};

BcResult bc_mean(BoundaryParam c, BoundaryParam d, BcKind kind);

/// z = (1 − c)/(1 + c), z(∞) = −1.
double z_of_c(BoundaryParam c);
BoundaryParam c_of_z(double z);

}  // namespace relcalc
