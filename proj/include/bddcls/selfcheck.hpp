#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bddcls/formula.hpp"
#include "bddcls/rng.hpp"

namespace bddcls {

/// Random constraint over distinct variables of 1..n with 1..max_len literals.
Constraint random_constraint(Rng &rng, int n, int max_len,
                             std::optional<ConstraintKind> kind = std::nullopt);

/// m random constraints of mixed kinds.
Formula random_hybrid_formula(Rng &rng, int n, int m, int max_len);

/// Uniform point of the cube; with probability vertex_bias a coordinate is
/// snapped to +-1 or 0 so boundary cases are exercised.
std::vector<double> random_point(Rng &rng, int n, double vertex_bias = 0.0);

struct SelfCheckOptions {
  std::uint64_t seed = 0;
  int cases = 50;
  bool inject_fault = false; // perturbs the gradient; the run must then fail
};

struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
};

/// Oracle-equivalence suites on random small instances.
std::vector<SuiteResult> run_selfcheck(const SelfCheckOptions &opt);

} // namespace bddcls
