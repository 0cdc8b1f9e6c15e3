#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "bddcls/formula.hpp"

namespace bddcls {

using NodeId = std::uint32_t;

inline constexpr NodeId kZero = 0;
inline constexpr NodeId kOne = 1;

/// hi is the child taken when the variable is True (-1), lo when False (+1).
struct BddNode {
  int var = 0;
  NodeId hi = 0;
  NodeId lo = 0;
};

class BddOrderError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// Reduced ordered BDD store with a unique table. Variable order is the
// natural order 1..n; terminals sit at level kTerminalLevel. Children are
// always allocated before their parents, so increasing NodeId is a reverse
// topological order of every sub-graph.
class BddManager {
public:
  static constexpr int kTerminalLevel = INT32_MAX;

  BddManager();

  NodeId make_node(int var, NodeId hi, NodeId lo);

  const BddNode &node(NodeId id) const { return nodes_[id]; }
  int level(NodeId id) const { return nodes_[id].var; }
  static bool is_terminal(NodeId id) { return id <= kOne; }
  std::size_t size() const { return nodes_.size(); }
  std::span<const BddNode> nodes() const { return nodes_; }

  NodeId build(const Constraint &c);
  NodeId build_symmetric(const Constraint &c);
  NodeId build_pb(const Constraint &c);
  NodeId apply_and(NodeId a, NodeId b);

  /// Path-following evaluation of root under the assignment b.
  bool eval(NodeId root, const Assignment &b) const;

  /// Reachable nodes (terminals included), ascending NodeId.
  std::vector<NodeId> reachable(std::span<const NodeId> roots) const;
  std::size_t count_reachable(NodeId root) const;

private:
  struct Key {
    int var;
    NodeId hi, lo;
    friend bool operator==(const Key &, const Key &) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key &k) const noexcept {
      std::uint64_t h = static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.var));
      h = h * 0x9e3779b97f4a7c15ULL ^ k.hi;
      h = h * 0x9e3779b97f4a7c15ULL ^ k.lo;
      return static_cast<std::size_t>(h ^ (h >> 29));
    }
  };

  std::vector<BddNode> nodes_;
  std::unordered_map<Key, NodeId, KeyHash> unique_;
};

/// Truth value of a symmetric constraint with exactly k true literals, k = 0..n_c.
std::vector<bool> symmetric_value_vector(const Constraint &c);

struct BddStats {
  std::size_t shared_nodes = 0;
  std::size_t sum_individual_nodes = 0;
  double reduction_ratio = 1.0;
};

// Shared forest for a whole formula. Only nodes reachable from some entry
// are kept, renumbered densely with children before parents.
class MrBdd {
public:
  int num_vars() const { return num_vars_; }
  const BddManager &manager() const { return manager_; }
  std::size_t node_count() const { return manager_.size(); }
  std::span<const NodeId> entries() const { return entries_; }
  NodeId entry(int constraint_id) const { return entries_[static_cast<std::size_t>(constraint_id)]; }
  const BddNode &node(NodeId id) const { return manager_.node(id); }

  /// |V| + |E| of the stored forest.
  std::size_t size_measure() const { return node_count() + 2 * (node_count() - 2); }

  bool eval_vertex(NodeId root, const Assignment &b) const { return manager_.eval(root, b); }

  /// Graphviz rendering of the forest.
  std::string to_dot() const;

  friend MrBdd build_formula(const Formula &f);

private:
  int num_vars_ = 0;
  BddManager manager_;
  std::vector<NodeId> entries_;
};

MrBdd build_formula(const Formula &f);

BddStats stats(const MrBdd &bdd);

/// Shared/individual counts restricted to constraints of one kind.
BddStats stats_for(const MrBdd &bdd, const Formula &f, ConstraintKind kind);

} // namespace bddcls
