#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>

#include "bddcls/engine.hpp"
#include "bddcls/formula.hpp"
#include "bddcls/optimizer.hpp"
#include "bddcls/rng.hpp"

namespace bddcls {

enum class Mode { Sat, MaxSat };
enum class Status { SatFound, Unknown };

const char *to_string(Mode m);
const char *to_string(Status s);

struct SolverConfig {
  int restarts = 100;          // J
  int trials_per_restart = 8;  // T
  double weight_factor = 2.0;  // r
  std::uint64_t seed = 0;
  double timeout = std::numeric_limits<double>::infinity(); // seconds
  Mode mode = Mode::Sat;
  int roundings = 10; // K randomized roundings per trial, besides the sign rounding
  int threads = 1;
  OptimizerConfig optimizer;

  void validate() const;
};

struct Solution {
  Status status = Status::Unknown;
  std::optional<Assignment> assignment;
  double best_objective = 0.0; // best satisfied initial weight among verified candidates
  double best_cost = std::numeric_limits<double>::infinity(); // MaxSAT soft cost
  int trials_used = 0;
  int restarts_used = 0;
  double wall_time = 0.0;
  bool timed_out = false;

  std::uint64_t gradient_calls = 0;
  std::uint64_t value_calls = 0;
  std::size_t bdd_nodes = 0;
  // Trials whose ascent reached F = sum w, and how many of those did not
  // sign-round to a full solution (expected 0).
  int target_hits = 0;
  int target_rounding_failures = 0;
};

// Per-trial record. The re-ascent after reweighting starts from the previous
// local optimum; start_from_optimum says which start point a trial used.
struct TrialLog {
  int restart = 0;
  int trial = 0;
  bool start_from_optimum = false;
  double value = 0.0;
  double target = 0.0;
  int iters = 0;
  StopReason reason = StopReason::Gradient;
  std::size_t unsatisfied = 0;
};

struct SolveCallbacks {
  /// MaxSAT: called with each strictly better hard-feasible cost.
  std::function<void(double cost, const Assignment &)> on_improvement;
  std::function<void(const TrialLog &)> on_trial;
};

WeightMap init_weights(const Formula &f, Mode mode);

/// Multiplies unsatisfied constraint weights by r, then divides every weight
/// by the maximum if it exceeds kWeightCap.
void reweight(WeightMap &w, std::span<const int> unsatisfied, double r);
inline constexpr double kWeightCap = 1e12;

Assignment round_randomized(std::span<const double> a, Rng &rng);
Assignment round_sign(std::span<const double> a, Rng &rng);

Solution solve_sat(const Formula &f, const SolverConfig &cfg, const SolveCallbacks &cb = {});
Solution solve_maxsat(const Formula &f, const SolverConfig &cfg, const SolveCallbacks &cb = {});
Solution solve(const Formula &f, const SolverConfig &cfg, const SolveCallbacks &cb = {});

/// (best_known + 1) / (found + 1); 0 when found is infinite (no feasible assignment).
double incomplete_score(double found_cost, double best_known_cost);

} // namespace bddcls
