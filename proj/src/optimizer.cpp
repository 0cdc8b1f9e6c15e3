#include "bddcls/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bddcls {

void OptimizerConfig::validate() const {
  if (!(shrink > 0.0 && shrink < 1.0))
    throw std::invalid_argument("optimizer: shrink must lie in (0,1)");
  if (!(armijo_c > 0.0 && armijo_c < 1.0))
    throw std::invalid_argument("optimizer: armijo_c must lie in (0,1)");
  if (!(grad_tol > 0.0) || !(value_tol > 0.0))
    throw std::invalid_argument("optimizer: tolerances must be positive");
  if (!(step_init > 0.0))
    throw std::invalid_argument("optimizer: step_init must be positive");
  if (max_iters < 0 || check_interval < 1)
    throw std::invalid_argument("optimizer: bad iteration limits");
}

int OptimizerConfig::iteration_budget(std::size_t n) const {
  if (max_iters > 0)
    return max_iters;
  return static_cast<int>(std::min<std::size_t>(10 * std::max<std::size_t>(n, 1), 5000));
}

const char *to_string(StopReason r) {
  switch (r) {
  case StopReason::Gradient:
    return "gradient";
  case StopReason::Value:
    return "value";
  case StopReason::Iterations:
    return "iterations";
  case StopReason::TargetReached:
    return "target_reached";
  case StopReason::Cancelled:
    return "cancelled";
  }
  return "?";
}

Objective make_objective(BddObjective &obj) {
  return {[&obj](std::span<const double> a) { return obj.value(a); },
          [&obj](std::span<const double> a, std::span<double> g) {
            return obj.value_and_gradient(a, g);
          }};
}

RealPoint project_box(std::span<const double> x) {
  RealPoint out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i]))
      throw std::domain_error("project_box: NaN coordinate " + std::to_string(i));
    out[i] = std::clamp(x[i], -1.0, 1.0);
  }
  return out;
}

namespace {

double checked(double v) {
  if (!std::isfinite(v))
    throw NonFiniteObjective("objective is not finite");
  return v;
}

} // namespace

TrialResult ProjectedGradientAscent::ascend(const Objective &objective,
                                            std::span<const double> x0, double target,
                                            const OptimizerConfig &cfg,
                                            const std::function<bool()> &should_stop) const {
  cfg.validate();
  const std::size_t n = x0.size();
  const int budget = cfg.iteration_budget(n);

  TrialResult r;
  r.x_star = project_box(x0);
  std::vector<double> g(n), trial(n);
  double fx = checked(objective.value_and_gradient(r.x_star, g));

  for (;;) {
    if (fx >= target - cfg.value_tol) {
      r.reason = StopReason::TargetReached;
      break;
    }
    if (r.iters >= budget) {
      r.reason = StopReason::Iterations;
      break;
    }
    if (should_stop && r.iters % cfg.check_interval == 0 && should_stop()) {
      r.reason = StopReason::Cancelled;
      break;
    }

    // The step is measured along g / |g|_inf, so step bounds the largest
    // coordinate move regardless of the weight scale.
    double gmax = 0.0;
    for (double gi : g)
      gmax = std::max(gmax, std::abs(gi));
    double step = gmax > 0.0 ? cfg.step_init / gmax : 0.0;
    double f_trial = fx;
    bool accepted = false;
    for (;;) {
      double slope = 0.0, dmax = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        trial[i] = std::clamp(r.x_star[i] + step * g[i], -1.0, 1.0);
        const double d = trial[i] - r.x_star[i];
        slope += g[i] * d;
        dmax = std::max(dmax, std::abs(d));
      }
      if (dmax <= cfg.grad_tol)
        break; // no feasible ascent left at this resolution
      f_trial = checked(objective.value(trial));
      if (f_trial >= fx + cfg.armijo_c * slope) {
        accepted = true;
        break;
      }
      step *= cfg.shrink;
    }
    if (!accepted) {
      r.reason = StopReason::Gradient;
      break;
    }

    ++r.iters;
    const double gain = f_trial - fx;
    r.x_star.swap(trial);
    fx = checked(objective.value_and_gradient(r.x_star, g));
    if (gain < cfg.value_tol) {
      r.reason = fx >= target - cfg.value_tol ? StopReason::TargetReached : StopReason::Value;
      break;
    }
  }
  r.value = fx;
  return r;
}

TrialResult ascend(const Objective &objective, std::span<const double> x0, double target,
                   const OptimizerConfig &cfg, const std::function<bool()> &should_stop) {
  return ProjectedGradientAscent{}.ascend(objective, x0, target, cfg, should_stop);
}

} // namespace bddcls
