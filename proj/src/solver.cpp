#include "bddcls/solver.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "bddcls/bdd.hpp"

namespace bddcls {

const char *to_string(Mode m) { return m == Mode::Sat ? "sat" : "maxsat"; }
const char *to_string(Status s) { return s == Status::SatFound ? "sat_found" : "unknown"; }

void SolverConfig::validate() const {
  if (!(weight_factor > 1.0))
    throw std::invalid_argument("solver: weight factor r must exceed 1");
  if (trials_per_restart < 1)
    throw std::invalid_argument("solver: trials per restart T must be >= 1");
  if (roundings < 1)
    throw std::invalid_argument("solver: roundings K must be >= 1");
  if (restarts < 0)
    throw std::invalid_argument("solver: restarts J must be >= 0");
  if (threads < 1)
    throw std::invalid_argument("solver: threads must be >= 1");
  if (!(timeout >= 0.0))
    throw std::invalid_argument("solver: timeout must be >= 0");
  optimizer.validate();
}

WeightMap init_weights(const Formula &f, Mode mode) {
  std::vector<double> w(f.size());
  if (mode == Mode::Sat) {
    for (const auto &c : f.constraints)
      w[static_cast<std::size_t>(c.id)] = constraint_length(c);
    return WeightMap(std::move(w));
  }
  if (!f.has_soft())
    throw std::invalid_argument("maxsat mode requires at least one soft constraint");
  double soft_total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.soft[i])
      soft_total += f.soft_weights[i];
  for (std::size_t i = 0; i < f.size(); ++i)
    w[i] = f.soft[i] ? f.soft_weights[i] : soft_total + 1.0;
  return WeightMap(std::move(w));
}

void reweight(WeightMap &w, std::span<const int> unsatisfied, double r) {
  for (int id : unsatisfied)
    w.scale(static_cast<std::size_t>(id), r);
  const double top = w.max();
  if (top > kWeightCap)
    w.scale_all(1.0 / top);
}

Assignment round_randomized(std::span<const double> a, Rng &rng) {
  Assignment b(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    b[i] = rng.bernoulli((1.0 - a[i]) / 2.0) ? -1 : 1;
  return b;
}

Assignment round_sign(std::span<const double> a, Rng &rng) {
  Assignment b(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0.0)
      b[i] = -1;
    else if (a[i] > 0.0)
      b[i] = 1;
    else
      b[i] = rng.coin() ? -1 : 1;
  }
  return b;
}

double incomplete_score(double found_cost, double best_known_cost) {
  if (!std::isfinite(found_cost))
    return 0.0;
  return (best_known_cost + 1.0) / (found_cost + 1.0);
}

namespace {

using Clock = std::chrono::steady_clock;

// State shared by all workers; everything but the atomics is guarded by mu.
struct Shared {
  std::mutex mu;
  std::atomic<bool> stop{false};
  std::atomic<bool> timed_out{false};
  std::atomic<int> next_restart{0};

  bool found = false;
  Assignment found_assignment;

  double best_objective = -1.0;
  Assignment best_by_weight;

  // MaxSAT bookkeeping.
  bool have_feasible = false;
  double best_cost = std::numeric_limits<double>::infinity();
  Assignment best_feasible;
  int fewest_hard_violations = std::numeric_limits<int>::max();
  double fewest_violations_cost = std::numeric_limits<double>::infinity();
  Assignment best_infeasible;

  int trials = 0;
  int restarts = 0;
  int target_hits = 0;
  int target_rounding_failures = 0;
  std::uint64_t gradient_calls = 0;
  std::uint64_t value_calls = 0;
};

class Search {
public:
  Search(const Formula &f, const SolverConfig &cfg, const SolveCallbacks &cb)
      : f_(f), cfg_(cfg), cb_(cb), bdd_(build_formula(f)), init_(init_weights(f, cfg.mode)),
        start_(Clock::now()) {
    if (std::isfinite(cfg.timeout))
      deadline_ = start_ + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(cfg.timeout));
    else
      deadline_ = Clock::time_point::max();
  }

  Solution run() {
    for (std::int8_t v : {std::int8_t{1}, std::int8_t{-1}}) {
      consider(Assignment(static_cast<std::size_t>(f_.num_vars), v));
      if (shared_.stop)
        return finish();
    }
    if (cfg_.threads == 1) {
      work(cfg_.seed);
    } else {
      std::vector<std::thread> pool;
      for (int k = 0; k < cfg_.threads; ++k)
        pool.emplace_back([this, k] { work(cfg_.seed ^ static_cast<std::uint64_t>(k)); });
      for (auto &t : pool)
        t.join();
    }
    return finish();
  }

private:
  bool past_deadline() const { return Clock::now() >= deadline_; }

  bool should_stop() {
    if (shared_.stop.load(std::memory_order_relaxed))
      return true;
    if (past_deadline()) {
      shared_.timed_out = true;
      return true;
    }
    return false;
  }

  // Verifies one discrete candidate against the formula and merges it into
  // the shared best. Returns its violated constraint ids.
  std::vector<int> consider(const Assignment &b) {
    auto check = check_formula(f_, b, init_.values());
    std::lock_guard lock(shared_.mu);
    if (check.satisfied_weight > shared_.best_objective) {
      shared_.best_objective = check.satisfied_weight;
      shared_.best_by_weight = b;
    }
    if (cfg_.mode == Mode::Sat) {
      if (check.unsatisfied.empty() && !shared_.found) {
        shared_.found = true;
        shared_.found_assignment = b;
        shared_.stop = true;
      }
      return check.unsatisfied;
    }

    auto cost = maxsat_cost(f_, b);
    if (cost.hard_violations == 0) {
      if (!shared_.have_feasible || cost.soft_cost < shared_.best_cost) {
        shared_.have_feasible = true;
        shared_.best_cost = cost.soft_cost;
        shared_.best_feasible = b;
        if (cb_.on_improvement)
          cb_.on_improvement(cost.soft_cost, b);
      }
    } else if (cost.hard_violations < shared_.fewest_hard_violations ||
               (cost.hard_violations == shared_.fewest_hard_violations &&
                cost.soft_cost < shared_.fewest_violations_cost)) {
      shared_.fewest_hard_violations = cost.hard_violations;
      shared_.fewest_violations_cost = cost.soft_cost;
      shared_.best_infeasible = b;
    }
    if (check.unsatisfied.empty())
      shared_.stop = true;
    return check.unsatisfied;
  }

  void work(std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n = static_cast<std::size_t>(f_.num_vars);
    WeightMap w = init_;
    BddObjective objective(bdd_, w);
    const Objective fn = make_objective(objective);
    const ProjectedGradientAscent strategy;
    const std::function<bool()> stop = [this] { return should_stop(); };

    int trials = 0, restarts = 0, hits = 0, failures = 0;
    RealPoint x(n);
    while (!should_stop()) {
      const int j = shared_.next_restart.fetch_add(1);
      if (j >= cfg_.restarts)
        break;
      ++restarts;
      for (auto &xi : x)
        xi = rng.uniform(-1.0, 1.0);
      w = init_;

      for (int t = 0; t < cfg_.trials_per_restart; ++t) {
        if (should_stop())
          break;
        const double target = w.total();
        TrialResult res = strategy.ascend(fn, x, target, cfg_.optimizer, stop);
        ++trials;

        const Assignment sign = round_sign(res.x_star, rng);
        const auto unsat = consider(sign);
        if (res.reason == StopReason::TargetReached) {
          ++hits;
          if (!unsat.empty())
            ++failures;
        }
        for (int k = 0; k < cfg_.roundings && !shared_.stop.load(); ++k)
          consider(round_randomized(res.x_star, rng));

        if (cb_.on_trial) {
          TrialLog log{j, t, t > 0, res.value, target, res.iters, res.reason, unsat.size()};
          std::lock_guard lock(shared_.mu);
          cb_.on_trial(log);
        }
        if (shared_.stop.load())
          break;
        reweight(w, unsat, cfg_.weight_factor);
        x = std::move(res.x_star);
      }
    }

    std::lock_guard lock(shared_.mu);
    shared_.trials += trials;
    shared_.restarts += restarts;
    shared_.target_hits += hits;
    shared_.target_rounding_failures += failures;
    shared_.gradient_calls += objective.gradient_calls();
    shared_.value_calls += objective.value_calls();
  }

  Solution finish() {
    Solution s;
    s.best_objective = std::max(0.0, shared_.best_objective);
    s.trials_used = shared_.trials;
    s.restarts_used = shared_.restarts;
    s.timed_out = shared_.timed_out && !shared_.found;
    s.gradient_calls = shared_.gradient_calls;
    s.value_calls = shared_.value_calls;
    s.bdd_nodes = bdd_.node_count();
    s.target_hits = shared_.target_hits;
    s.target_rounding_failures = shared_.target_rounding_failures;

    if (cfg_.mode == Mode::Sat) {
      if (shared_.found) {
        s.status = Status::SatFound;
        s.assignment = shared_.found_assignment;
        s.best_cost = 0.0;
      } else if (!shared_.best_by_weight.empty() || f_.num_vars == 0) {
        s.assignment = shared_.best_by_weight;
      }
    } else if (shared_.have_feasible) {
      s.status = Status::SatFound;
      s.assignment = shared_.best_feasible;
      s.best_cost = shared_.best_cost;
    } else if (!shared_.best_infeasible.empty()) {
      s.assignment = shared_.best_infeasible;
    }

    // Final answers are re-verified without the BDD.
    if (s.status == Status::SatFound && maxsat_cost(f_, *s.assignment).hard_violations != 0 &&
        cfg_.mode == Mode::MaxSat)
      throw std::logic_error("solver: reported assignment violates a hard constraint");
    if (s.status == Status::SatFound && cfg_.mode == Mode::Sat &&
        !check_formula(f_, *s.assignment, init_.values()).unsatisfied.empty())
      throw std::logic_error("solver: reported assignment is not a solution");

    s.wall_time = std::chrono::duration<double>(Clock::now() - start_).count();
    return s;
  }

  const Formula &f_;
  const SolverConfig &cfg_;
  const SolveCallbacks &cb_;
  MrBdd bdd_;
  WeightMap init_;
  Clock::time_point start_;
  Clock::time_point deadline_;
  Shared shared_;
};

} // namespace

Solution solve_sat(const Formula &f, const SolverConfig &cfg, const SolveCallbacks &cb) {
  if (cfg.mode != Mode::Sat)
    throw std::invalid_argument("solve_sat: config mode must be sat");
  cfg.validate();
  return Search(f, cfg, cb).run();
}

Solution solve_maxsat(const Formula &f, const SolverConfig &cfg, const SolveCallbacks &cb) {
  if (cfg.mode != Mode::MaxSat)
    throw std::invalid_argument("solve_maxsat: config mode must be maxsat");
  cfg.validate();
  return Search(f, cfg, cb).run();
}

Solution solve(const Formula &f, const SolverConfig &cfg, const SolveCallbacks &cb) {
  return cfg.mode == Mode::Sat ? solve_sat(f, cfg, cb) : solve_maxsat(f, cfg, cb);
}

} // namespace bddcls
