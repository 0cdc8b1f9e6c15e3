#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bddcls/bdd.hpp"
#include "bddcls/formula.hpp"

namespace bddcls {

/// A point of [-1,1]^n. Entry i belongs to variable i+1.
using RealPoint = std::vector<double>;

// Positive per-constraint weights with a cached total.
class WeightMap {
public:
  WeightMap() = default;
  explicit WeightMap(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  double total() const { return total_; }
  double max() const;
  std::span<const double> values() const { return weights_; }

  void set(std::size_t i, double w);
  void scale(std::size_t i, double factor) { set(i, weights_[i] * factor); }
  /// Multiplies every weight by factor (> 0).
  void scale_all(double factor);

private:
  void recompute_total();

  std::vector<double> weights_;
  double total_ = 0.0;
};

// Per-node messages, indexed by NodeId. One instance per worker.
struct MessageBuffers {
  std::vector<double> m_td;
  std::vector<double> m_bu;
};

/// Forward (reach-probability) sweep. Returns F_{f,w}(a) = m_td[ONE].
double top_down(const MrBdd &bdd, std::span<const double> a, const WeightMap &w,
                MessageBuffers &buf);

/// Backward (sub-function probability) sweep. Returns sum_c w(c) * m_bu[entry(c)].
double bottom_up(const MrBdd &bdd, std::span<const double> a, const WeightMap &w,
                 MessageBuffers &buf);

/// Gradient by message passing: both sweeps, with the per-node accumulation
/// fused into the backward sweep. g[i] = F(a, a_i = +1) - F(a, a_i = -1),
/// which is twice the analytic partial derivative. Returns F_{f,w}(a).
double discrete_gradient(const MrBdd &bdd, std::span<const double> a, const WeightMap &w,
                         MessageBuffers &buf, std::span<double> g);

/// Probability that the sub-function at root is True when variable i is True
/// with probability p[i-1].
double cop(const MrBdd &bdd, NodeId root, std::span<const double> p);

/// p_i = (1 - a_i) / 2.
std::vector<double> true_probabilities(std::span<const double> a);

// Objective and gradient bound to one forest and weight map, with call counters.
class BddObjective {
public:
  BddObjective(const MrBdd &bdd, const WeightMap &w) : bdd_(&bdd), w_(&w) {}

  void set_weights(const WeightMap &w) { w_ = &w; }
  const WeightMap &weights() const { return *w_; }
  std::size_t dimension() const { return static_cast<std::size_t>(bdd_->num_vars()); }

  double value(std::span<const double> a);
  double value_and_gradient(std::span<const double> a, std::span<double> g);

  std::uint64_t value_calls() const { return value_calls_; }
  std::uint64_t gradient_calls() const { return gradient_calls_; }

private:
  const MrBdd *bdd_;
  const WeightMap *w_;
  MessageBuffers buf_;
  std::uint64_t value_calls_ = 0;
  std::uint64_t gradient_calls_ = 0;
};

} // namespace bddcls
