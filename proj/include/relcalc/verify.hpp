#pragma once

// Property campaigns: every invariant of the library is registered under a
// short id and checked on seeded random instances. Each trial draws from its
// own substream of (seed, property, trial), so a campaign is reproducible in
// isolation and independent of which other campaigns run alongside it.

#include <cstdint>
#include <string>
#include <vector>

#include "relcalc/io.hpp"

namespace relcalc {

struct RunConfig {
  std::uint64_t seed = 20240601;
  int n = 6;
  int trials = 200;
  Tolerance tol;
  int k_max = 8;
  std::string out;
  std::string format = "json";

  /// Throws InvalidArgument (or InvalidTolerance) on out-of-range fields.
  void validate() const;
};

struct Verdict {
  std::string property;
  int trials = 0;
  int pass = 0;
  int fail = 0;
  double worst_residual = 0.0;
  std::string trace_path;
  std::string first_failure;  // diagnostic of the first failing trial

  bool ok() const { return fail == 0; }
};

struct PropertyInfo {
  std::string id;
  std::string description;
};

/// All registered properties in registration order.
std::vector<PropertyInfo> list_properties();

/// Ids matching any of the glob patterns (fnmatch syntax), in registration
/// order without duplicates. Throws UnknownProperty when a pattern matches
/// nothing.
std::vector<std::string> match_properties(const std::vector<std::string>& patterns);

/// Runs one campaign of cfg.trials trials. Throws UnknownProperty.
Verdict run_property(const std::string& id, const RunConfig& cfg);

std::vector<Verdict> verify(const RunConfig& cfg, const std::vector<std::string>& patterns);

bool all_pass(const std::vector<Verdict>& verdicts);

/// {"prng", "seed", "n", "trials", "tolerance", "results": [{property, trials,
/// pass, fail, worst_residual, seed, ...}]}
Json verify_report(const RunConfig& cfg, const std::vector<Verdict>& verdicts);

}  // namespace relcalc
