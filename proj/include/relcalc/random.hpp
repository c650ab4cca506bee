#pragma once

// Seeded instance generators. Every stream is mt19937_64 seeded through
// splitmix64 from (seed, stream index); normals use Box–Muller so that the
// output bytes do not depend on the standard library's distributions.

#include <cstdint>
#include <random>

#include "relcalc/extensions.hpp"

namespace relcalc {

inline constexpr const char* kPrngName = "mt19937_64+splitmix64/v1";

class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  /// Independent stream for (seed, index).
  static Rng substream(std::uint64_t seed, std::uint64_t index);

  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  int integer(int lo, int hi);            // inclusive range
  double normal();
  cplx cnormal();                         // E|z|² = 1
  bool bernoulli(double p);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

Matrix random_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols);
Matrix random_unitary(Rng& rng, Eigen::Index n);
Subspace random_subspace(Rng& rng, Eigen::Index n, Eigen::Index k);
/// Wishart-style PSD matrix G G* / r with G n×r; rank r < n gives a singular matrix.
HermMatrix random_psd(Rng& rng, Eigen::Index n, Eigen::Index rank);
/// PSD with eigenvalues log-uniform in [1/cond, 1].
HermMatrix random_pd(Rng& rng, Eigen::Index n, double cond = 1e3);
/// Hermitian matrix with spectrum uniform in [lo, hi].
HermMatrix random_hermitian_spectrum(Rng& rng, Eigen::Index n, double lo, double hi);

struct RelationShape {
  double p_mul = 0.2;  // probability an eigenvalue of T is exactly −1
  double p_ker = 0.2;  // probability an eigenvalue of T is exactly +1
};

/// Random nonnegative selfadjoint relation via a random Hermitian contraction.
NonnegRelation random_nonneg(Rng& rng, Eigen::Index n, const RelationShape& shape = {});
/// Bounded PSD operator (no multivalued part), possibly singular.
NonnegRelation random_bounded(Rng& rng, Eigen::Index n, double p_ker = 0.2);

/// Nonnegative symmetric relation with dim 𝔑 = deficiency, built as the
/// restriction of a random nonnegative selfadjoint relation whose Cayley
/// transform has norm ≤ 0.9, so that 𝔑₀ = 𝔑.
LinearRelation random_symmetric(Rng& rng, Eigen::Index n, Eigen::Index deficiency);
/// Symmetric relation whose interval is a single point (𝔑₀ = {0}).
LinearRelation random_symmetric_unique(Rng& rng, Eigen::Index n, Eigen::Index deficiency);
/// Symmetric relation S with ran(S + I) = dom Q and Q as given.
LinearRelation symmetric_from_Q(const PartialContraction& q, const Tolerance& tol = {});

/// Random Hermitian contraction with spectrum in [−1, 1] on C^k.
HermMatrix random_contraction(Rng& rng, Eigen::Index k);
/// Random selfadjoint unitary on C^k.
HermMatrix random_fundamental_symmetry(Rng& rng, Eigen::Index k);

}  // namespace relcalc
