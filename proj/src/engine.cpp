#include "bddcls/engine.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bddcls {

WeightMap::WeightMap(std::vector<double> weights) : weights_(std::move(weights)) {
  for (double x : weights_)
    if (!(x > 0.0))
      throw std::invalid_argument("WeightMap: weights must be positive");
  recompute_total();
}

double WeightMap::max() const {
  return weights_.empty() ? 0.0 : *std::max_element(weights_.begin(), weights_.end());
}

void WeightMap::set(std::size_t i, double w) {
  if (!(w > 0.0))
    throw std::invalid_argument("WeightMap: weights must be positive");
  total_ += w - weights_[i];
  weights_[i] = w;
}

void WeightMap::scale_all(double factor) {
  for (double &x : weights_)
    x *= factor;
  recompute_total();
}

void WeightMap::recompute_total() {
  total_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

namespace {

void seed_top_down(const MrBdd &bdd, const WeightMap &w, std::vector<double> &td) {
  td.assign(bdd.node_count(), 0.0);
  const auto entries = bdd.entries();
  for (std::size_t c = 0; c < entries.size(); ++c)
    td[entries[c]] += w[c];
}

} // namespace

double top_down(const MrBdd &bdd, std::span<const double> a, const WeightMap &w,
                MessageBuffers &buf) {
  auto &td = buf.m_td;
  seed_top_down(bdd, w, td);
  const auto nodes = bdd.manager().nodes();
  // Parents have larger ids than their children.
  for (std::size_t v = nodes.size(); v-- > 2;) {
    const BddNode &nd = nodes[v];
    const double ai = a[static_cast<std::size_t>(nd.var - 1)];
    const double m = td[v];
    td[nd.hi] += (1.0 - ai) / 2.0 * m;
    td[nd.lo] += (1.0 + ai) / 2.0 * m;
  }
  return td[kOne];
}

double bottom_up(const MrBdd &bdd, std::span<const double> a, const WeightMap &w,
                 MessageBuffers &buf) {
  auto &bu = buf.m_bu;
  const auto nodes = bdd.manager().nodes();
  bu.resize(nodes.size());
  bu[kZero] = 0.0;
  bu[kOne] = 1.0;
  for (std::size_t v = 2; v < nodes.size(); ++v) {
    const BddNode &nd = nodes[v];
    const double ai = a[static_cast<std::size_t>(nd.var - 1)];
    bu[v] = (1.0 - ai) / 2.0 * bu[nd.hi] + (1.0 + ai) / 2.0 * bu[nd.lo];
  }
  double value = 0.0;
  const auto entries = bdd.entries();
  for (std::size_t c = 0; c < entries.size(); ++c)
    value += bu[entries[c]] * w[c];
  return value;
}

double discrete_gradient(const MrBdd &bdd, std::span<const double> a, const WeightMap &w,
                         MessageBuffers &buf, std::span<double> g) {
  const double value = top_down(bdd, a, w, buf);
  std::fill(g.begin(), g.end(), 0.0);

  const auto &td = buf.m_td;
  auto &bu = buf.m_bu;
  const auto nodes = bdd.manager().nodes();
  bu.resize(nodes.size());
  bu[kZero] = 0.0;
  bu[kOne] = 1.0;
  for (std::size_t v = 2; v < nodes.size(); ++v) {
    const BddNode &nd = nodes[v];
    const auto i = static_cast<std::size_t>(nd.var - 1);
    const double ai = a[i];
    const double hi = bu[nd.hi];
    const double lo = bu[nd.lo];
    bu[v] = (1.0 - ai) / 2.0 * hi + (1.0 + ai) / 2.0 * lo;
    g[i] += td[v] * (lo - hi);
  }
  return value;
}

double cop(const MrBdd &bdd, NodeId root, std::span<const double> p) {
  if (BddManager::is_terminal(root))
    return root == kOne ? 1.0 : 0.0;
  const auto nodes = bdd.manager().nodes();
  std::vector<double> bu(static_cast<std::size_t>(root) + 1);
  bu[kZero] = 0.0;
  bu[kOne] = 1.0;
  for (std::size_t v = 2; v <= root; ++v) {
    const BddNode &nd = nodes[v];
    const double pi = p[static_cast<std::size_t>(nd.var - 1)];
    bu[v] = pi * bu[nd.hi] + (1.0 - pi) * bu[nd.lo];
  }
  return bu[root];
}

std::vector<double> true_probabilities(std::span<const double> a) {
  std::vector<double> p(a.size());
  std::transform(a.begin(), a.end(), p.begin(), [](double x) { return (1.0 - x) / 2.0; });
  return p;
}

double BddObjective::value(std::span<const double> a) {
  ++value_calls_;
  return top_down(*bdd_, a, *w_, buf_);
}

double BddObjective::value_and_gradient(std::span<const double> a, std::span<double> g) {
  ++gradient_calls_;
  return discrete_gradient(*bdd_, a, *w_, buf_, g);
}

} // namespace bddcls
