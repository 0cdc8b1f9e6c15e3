#include "bddcls/bdd.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace bddcls {

BddManager::BddManager() {
  nodes_.push_back({kTerminalLevel, kZero, kZero});
  nodes_.push_back({kTerminalLevel, kOne, kOne});
}

NodeId BddManager::make_node(int var, NodeId hi, NodeId lo) {
  if (hi >= nodes_.size() || lo >= nodes_.size())
    throw std::out_of_range("make_node: unknown child");
  if (var < 1 || var >= level(hi) || var >= level(lo))
    throw BddOrderError("make_node: variable " + std::to_string(var) +
                        " must precede both children");
  if (hi == lo)
    return hi;
  Key key{var, hi, lo};
  auto [it, inserted] = unique_.try_emplace(key, static_cast<NodeId>(nodes_.size()));
  if (inserted)
    nodes_.push_back({var, hi, lo});
  return it->second;
}

std::vector<bool> symmetric_value_vector(const Constraint &c) {
  if (!c.is_symmetric())
    throw std::invalid_argument("symmetric_value_vector: pseudo-Boolean constraint");
  const int n = static_cast<int>(c.literals.size());
  std::vector<bool> v(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    bool val = false;
    switch (c.kind) {
    case ConstraintKind::Clause:
      val = k >= 1;
      break;
    case ConstraintKind::Xor:
      val = k % 2 == 1;
      break;
    case ConstraintKind::Nae:
      val = k > 0 && k < n;
      break;
    case ConstraintKind::Card:
      val = compare(k, c.comparator, c.threshold);
      break;
    case ConstraintKind::Pb:
      break;
    }
    v[static_cast<std::size_t>(k)] = val;
  }
  return v;
}

namespace {

std::vector<std::size_t> order_by_var(const std::vector<Literal> &lits) {
  std::vector<std::size_t> idx(lits.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return lits[a].var < lits[b].var; });
  return idx;
}

} // namespace

NodeId BddManager::build_symmetric(const Constraint &c) {
  const auto values = symmetric_value_vector(c);
  const auto order = order_by_var(c.literals);
  const std::size_t n = order.size();

  // layer[k]: node for "k literals true among those already decided".
  std::vector<NodeId> layer(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    layer[k] = values[k] ? kOne : kZero;

  for (std::size_t j = n; j-- > 0;) {
    const Literal &lit = c.literals[order[j]];
    for (std::size_t k = 0; k <= j; ++k) {
      NodeId when_true = layer[k + 1];
      NodeId when_false = layer[k];
      layer[k] = lit.negated ? make_node(lit.var, when_false, when_true)
                             : make_node(lit.var, when_true, when_false);
    }
  }
  return layer[0];
}

namespace {

constexpr std::int64_t kInf = std::int64_t{1} << 62;

std::int64_t sat_add(std::int64_t x, std::int64_t d) {
  if (x >= kInf)
    return kInf;
  if (x <= -kInf)
    return -kInf;
  return std::clamp(x + d, -kInf, kInf);
}

// Compiles sum_j coef_j * [lit_j true] >= rhs. Each memo entry records the
// maximal-known interval of right-hand sides that share one sub-function.
class PbCompiler {
public:
  PbCompiler(BddManager &mgr, std::vector<Literal> lits, std::vector<std::int64_t> coefs)
      : mgr_(mgr), lits_(std::move(lits)), coefs_(std::move(coefs)), memo_(lits_.size()) {
    const std::size_t n = lits_.size();
    min_suffix_.assign(n + 1, 0);
    max_suffix_.assign(n + 1, 0);
    for (std::size_t j = n; j-- > 0;) {
      min_suffix_[j] = min_suffix_[j + 1] + std::min<std::int64_t>(0, coefs_[j]);
      max_suffix_[j] = max_suffix_[j + 1] + std::max<std::int64_t>(0, coefs_[j]);
    }
  }

  NodeId compile(std::int64_t rhs) { return build(0, rhs).node; }

private:
  struct Result {
    NodeId node;
    std::int64_t lo, hi;
  };

  Result build(std::size_t j, std::int64_t rhs) {
    if (rhs <= min_suffix_[j])
      return {kOne, -kInf, min_suffix_[j]};
    if (rhs > max_suffix_[j])
      return {kZero, max_suffix_[j] + 1, kInf};

    auto &memo = memo_[j];
    auto it = memo.upper_bound(rhs);
    if (it != memo.begin()) {
      --it;
      if (rhs <= it->second.hi)
        return {it->second.node, it->first, it->second.hi};
    }

    const std::int64_t a = coefs_[j];
    Result t = build(j + 1, rhs - a);
    Result f = build(j + 1, rhs);
    const std::int64_t lo = std::max(sat_add(t.lo, a), f.lo);
    const std::int64_t hi = std::min(sat_add(t.hi, a), f.hi);

    const Literal &lit = lits_[j];
    NodeId node = lit.negated ? mgr_.make_node(lit.var, f.node, t.node)
                              : mgr_.make_node(lit.var, t.node, f.node);
    memo.emplace(lo, Entry{hi, node});
    return {node, lo, hi};
  }

  struct Entry {
    std::int64_t hi;
    NodeId node;
  };

  BddManager &mgr_;
  std::vector<Literal> lits_;
  std::vector<std::int64_t> coefs_;
  std::vector<std::int64_t> min_suffix_, max_suffix_;
  std::vector<std::map<std::int64_t, Entry>> memo_;
};

} // namespace

NodeId BddManager::build_pb(const Constraint &c) {
  if (c.kind != ConstraintKind::Pb)
    throw std::invalid_argument("build_pb: not a pseudo-Boolean constraint");
  const auto order = order_by_var(c.literals);
  std::vector<Literal> lits;
  std::vector<std::int64_t> coefs;
  for (auto i : order) {
    lits.push_back(c.literals[i]);
    coefs.push_back(c.coefficients[i]);
  }

  auto at_least = [&] { return PbCompiler(*this, lits, coefs).compile(c.threshold); };
  auto at_most = [&] {
    std::vector<std::int64_t> neg(coefs.size());
    std::transform(coefs.begin(), coefs.end(), neg.begin(), [](std::int64_t a) { return -a; });
    return PbCompiler(*this, lits, std::move(neg)).compile(-c.threshold);
  };

  switch (c.comparator) {
  case Comparator::Ge:
    return at_least();
  case Comparator::Le:
    return at_most();
  case Comparator::Eq:
    return apply_and(at_least(), at_most());
  }
  return kZero;
}

NodeId BddManager::build(const Constraint &c) {
  return c.kind == ConstraintKind::Pb ? build_pb(c) : build_symmetric(c);
}

NodeId BddManager::apply_and(NodeId a, NodeId b) {
  std::unordered_map<std::uint64_t, NodeId> memo;
  auto rec = [&](auto &&self, NodeId x, NodeId y) -> NodeId {
    if (x == kZero || y == kZero)
      return kZero;
    if (x == kOne)
      return y;
    if (y == kOne || x == y)
      return x;
    if (x > y)
      std::swap(x, y);
    const std::uint64_t key = (static_cast<std::uint64_t>(x) << 32) | y;
    if (auto it = memo.find(key); it != memo.end())
      return it->second;
    const BddNode nx = nodes_[x];
    const BddNode ny = nodes_[y];
    const int var = std::min(nx.var, ny.var);
    NodeId xh = nx.var == var ? nx.hi : x, xl = nx.var == var ? nx.lo : x;
    NodeId yh = ny.var == var ? ny.hi : y, yl = ny.var == var ? ny.lo : y;
    NodeId hi = self(self, xh, yh);
    NodeId lo = self(self, xl, yl);
    NodeId r = make_node(var, hi, lo);
    memo.emplace(key, r);
    return r;
  };
  return rec(rec, a, b);
}

bool BddManager::eval(NodeId root, const Assignment &b) const {
  NodeId v = root;
  while (!is_terminal(v)) {
    const BddNode &nd = nodes_[v];
    v = b[static_cast<std::size_t>(nd.var - 1)] < 0 ? nd.hi : nd.lo;
  }
  return v == kOne;
}

std::vector<NodeId> BddManager::reachable(std::span<const NodeId> roots) const {
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<NodeId> stack(roots.begin(), roots.end());
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    if (seen[v])
      continue;
    seen[v] = 1;
    if (!is_terminal(v)) {
      stack.push_back(nodes_[v].hi);
      stack.push_back(nodes_[v].lo);
    }
  }
  std::vector<NodeId> out;
  for (NodeId v = 0; v < nodes_.size(); ++v)
    if (seen[v])
      out.push_back(v);
  return out;
}

std::size_t BddManager::count_reachable(NodeId root) const {
  return reachable(std::span<const NodeId>(&root, 1)).size();
}

MrBdd build_formula(const Formula &f) {
  BddManager scratch;
  std::vector<NodeId> roots;
  roots.reserve(f.size());
  for (const auto &c : f.constraints)
    roots.push_back(scratch.build(c));

  // Compact into a fresh manager. Ascending old ids visit children first.
  MrBdd out;
  out.num_vars_ = f.num_vars;
  const auto keep = scratch.reachable(roots);
  std::vector<NodeId> remap(scratch.size(), kZero);
  remap[kOne] = kOne;
  for (NodeId v : keep) {
    if (BddManager::is_terminal(v))
      continue;
    const BddNode &nd = scratch.node(v);
    remap[v] = out.manager_.make_node(nd.var, remap[nd.hi], remap[nd.lo]);
  }
  out.entries_.reserve(roots.size());
  for (NodeId r : roots)
    out.entries_.push_back(remap[r]);
  return out;
}

std::string MrBdd::to_dot() const {
  std::ostringstream os;
  os << "digraph mrbdd {\n";
  os << "  n0 [shape=box,label=\"0\"];\n  n1 [shape=box,label=\"1\"];\n";
  for (NodeId v = 2; v < node_count(); ++v) {
    const BddNode &nd = node(v);
    os << "  n" << v << " [label=\"x" << nd.var << "\"];\n";
    os << "  n" << v << " -> n" << nd.hi << ";\n";
    os << "  n" << v << " -> n" << nd.lo << " [style=dashed];\n";
  }
  for (std::size_t c = 0; c < entries_.size(); ++c)
    os << "  c" << c << " [shape=plaintext,label=\"c" << c << "\"];\n  c" << c << " -> n"
       << entries_[c] << ";\n";
  os << "}\n";
  return os.str();
}

namespace {

BddStats stats_of(const BddManager &mgr, std::span<const NodeId> roots) {
  BddStats s;
  if (roots.empty())
    return s;
  s.shared_nodes = mgr.reachable(roots).size();
  for (NodeId r : roots)
    s.sum_individual_nodes += mgr.count_reachable(r);
  s.reduction_ratio =
      static_cast<double>(s.sum_individual_nodes) / static_cast<double>(s.shared_nodes);
  return s;
}

} // namespace

BddStats stats(const MrBdd &bdd) { return stats_of(bdd.manager(), bdd.entries()); }

BddStats stats_for(const MrBdd &bdd, const Formula &f, ConstraintKind kind) {
  std::vector<NodeId> roots;
  for (const auto &c : f.constraints)
    if (c.kind == kind)
      roots.push_back(bdd.entry(c.id));
  return stats_of(bdd.manager(), roots);
}

} // namespace bddcls
