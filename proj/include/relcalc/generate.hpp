#pragma once

// Seeded instance sets for the `gen` command: PSD matrices, nonnegative
// selfadjoint relations, subspaces and symmetric relations with a prescribed
// deficiency, written as one JSON document whose bytes depend only on the
// configuration.

#include "relcalc/verify.hpp"

namespace relcalc {

struct GenOptions {
  int count = 1;               // instances of each kind
  bool rank_deficient = false; // PSD matrices of rank < n (n ≥ 2)
  int deficiency = 1;          // dim 𝔑 of the symmetric relations, 1 ≤ d < n
};

/// {"prng", "seed", "n", "psd": [{"rank", "matrix"}], "relations": [relation],
///  "subspaces": [subspace], "symmetric": [{"deficiency", "relation"}]}.
/// Throws InvalidArgument on out-of-range options.
Json generate_instances(const RunConfig& cfg, const GenOptions& opts = {});

}  // namespace relcalc
