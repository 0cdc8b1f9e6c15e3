#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "bddcls/engine.hpp"

namespace bddcls {

struct OptimizerConfig {
  int max_iters = 0; // 0 selects 10*n capped at 5000
  double step_init = 1.0;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  double grad_tol = 1e-8;  // infinity norm of the projected ascent step
  double value_tol = 1e-9; // successive objective change
  int check_interval = 32; // iterations between stop-predicate polls

  void validate() const;
  int iteration_budget(std::size_t n) const;
};

enum class StopReason { Gradient, Value, Iterations, TargetReached, Cancelled };

const char *to_string(StopReason r);

struct TrialResult {
  RealPoint x_star;
  double value = 0.0;
  int iters = 0;
  StopReason reason = StopReason::Gradient;
};

// What the ascent sees of the objective. value_and_gradient writes the
// ascent direction into its second argument.
struct Objective {
  std::function<double(std::span<const double>)> value;
  std::function<double(std::span<const double>, std::span<double>)> value_and_gradient;
};

Objective make_objective(BddObjective &obj);

class NonFiniteObjective : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Clamps into [-1,1]^n. Throws std::domain_error on NaN.
RealPoint project_box(std::span<const double> x);

// Strategy seam for the local maximizer.
class AscentStrategy {
public:
  virtual ~AscentStrategy() = default;
  virtual TrialResult ascend(const Objective &objective, std::span<const double> x0, double target,
                             const OptimizerConfig &cfg,
                             const std::function<bool()> &should_stop = {}) const = 0;
};

/// Projected gradient ascent with Armijo backtracking; the step resets to
/// step_init after every accepted move.
class ProjectedGradientAscent final : public AscentStrategy {
public:
  TrialResult ascend(const Objective &objective, std::span<const double> x0, double target,
                     const OptimizerConfig &cfg,
                     const std::function<bool()> &should_stop = {}) const override;
};

TrialResult ascend(const Objective &objective, std::span<const double> x0, double target,
                   const OptimizerConfig &cfg, const std::function<bool()> &should_stop = {});

} // namespace bddcls
