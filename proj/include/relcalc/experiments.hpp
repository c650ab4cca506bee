#pragma once

// Convergence-trace experiments: the arithmetic–harmonic iteration, the Weyl
// function limits, the A : tP_L limit and the regularized parallel sum, each
// written as a CSV trace closed by summary rows with the final residuals.

#include <optional>
#include <string>

#include "relcalc/verify.hpp"

namespace relcalc {

enum class ExperimentKind { AhTrace, WeylLimits, ShortLimit, Regularized };

/// "ah-trace", "weyl-limits", "short-limit", "regularized"; throws InvalidArgument.
ExperimentKind parse_experiment_kind(const std::string& name);
std::string to_string(ExperimentKind kind);

struct ExperimentInput {
  NonnegRelation a;
  std::optional<NonnegRelation> b;  // ah-trace, regularized
  std::optional<Subspace> l;        // weyl-limits, short-limit
};

/// {"A": relation, "B": relation, "L": subspace}; relations in either the
/// graph or the Cayley ("T") encoding. Throws Parse on missing members.
ExperimentInput experiment_input_from_json(const Json& j, ExperimentKind kind, const Tolerance& tol = {});

/// Seeded instance: a positive definite pair for ah-trace, a bounded relation
/// with a proper subspace for the limit experiments, a relation pair for the
/// regularized oracle.
ExperimentInput random_experiment_input(ExperimentKind kind, const RunConfig& cfg);

struct ExperimentResult {
  std::string csv;
  std::string summary;  // human-readable lines for the terminal
  bool ok = false;
};

ExperimentResult run_experiment(ExperimentKind kind, const ExperimentInput& input, const RunConfig& cfg);

}  // namespace relcalc
