#include "bddcls/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bddcls/bdd.hpp"
#include "bddcls/engine.hpp"
#include "bddcls/oracle.hpp"

namespace bddcls {

Constraint random_constraint(Rng &rng, int n, int max_len, std::optional<ConstraintKind> kind) {
  const auto k = kind ? *kind : static_cast<ConstraintKind>(rng.below(5));
  const int len = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(max_len, n))));

  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<Literal> lits;
  for (int i = 0; i < len; ++i) {
    auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(n - i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    lits.push_back({pool[static_cast<std::size_t>(i)], rng.coin()});
  }
  auto cmp = static_cast<Comparator>(rng.below(3));
  switch (k) {
  case ConstraintKind::Clause:
    return Constraint::clause(std::move(lits));
  case ConstraintKind::Xor:
    return Constraint::xor_of(std::move(lits));
  case ConstraintKind::Nae:
    return Constraint::nae(std::move(lits));
  case ConstraintKind::Card: {
    auto t = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(len + 3))) - 1;
    return Constraint::card(std::move(lits), cmp, t);
  }
  case ConstraintKind::Pb: {
    std::vector<std::int64_t> coefs;
    std::int64_t span = 0;
    for (int i = 0; i < len; ++i) {
      auto a = static_cast<std::int64_t>(rng.below(5)) + 1;
      if (rng.coin())
        a = -a;
      coefs.push_back(a);
      span += a < 0 ? -a : a;
    }
    auto t = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(2 * span + 3))) - span - 1;
    return Constraint::pb(std::move(lits), std::move(coefs), cmp, t);
  }
  }
  return Constraint::clause(std::move(lits));
}

Formula random_hybrid_formula(Rng &rng, int n, int m, int max_len) {
  Formula f;
  f.num_vars = n;
  for (int i = 0; i < m; ++i)
    f.add(random_constraint(rng, n, max_len));
  return f;
}

std::vector<double> random_point(Rng &rng, int n, double vertex_bias) {
  std::vector<double> a(static_cast<std::size_t>(n));
  for (auto &x : a) {
    if (vertex_bias > 0 && rng.bernoulli(vertex_bias)) {
      static constexpr double snaps[] = {-1.0, 0.0, 1.0};
      x = snaps[rng.below(3)];
    } else {
      x = rng.uniform(-1.0, 1.0);
    }
  }
  return a;
}

namespace {

WeightMap random_weights(Rng &rng, std::size_t m) {
  std::vector<double> w(m);
  for (auto &x : w)
    x = rng.uniform(0.5, 4.0);
  return WeightMap(std::move(w));
}

void record(SuiteResult &s, double err) {
  ++s.cases;
  s.max_error = std::max(s.max_error, err);
  if (!(err <= s.tolerance))
    ++s.failures;
}

} // namespace

std::vector<SuiteResult> run_selfcheck(const SelfCheckOptions &opt) {
  Rng rng(opt.seed);
  SuiteResult grad{"gradient-vs-difference", 0, 0, 0.0, 1e-10};
  SuiteResult counting{"cop-vs-enumeration", 0, 0, 0.0, 1e-9};
  SuiteResult dual{"top-down-vs-bottom-up", 0, 0, 0.0, 1e-12};
  SuiteResult vertex{"vertex-consistency", 0, 0, 0.0, 1e-9};

  for (int it = 0; it < opt.cases; ++it) {
    const int n = 2 + static_cast<int>(rng.below(9));
    const int m = 1 + static_cast<int>(rng.below(8));
    Formula f = random_hybrid_formula(rng, n, m, 8);
    WeightMap w = random_weights(rng, f.size());
    MrBdd bdd = build_formula(f);
    MessageBuffers buf;
    auto a = random_point(rng, n, 0.2);

    std::vector<double> g(static_cast<std::size_t>(n));
    discrete_gradient(bdd, a, w, buf, g);
    if (opt.inject_fault)
      g[0] += 1e-3;
    for (std::size_t i = 0; i < g.size(); ++i) {
      auto up = a, down = a;
      up[i] = 1.0;
      down[i] = -1.0;
      const double diff = top_down(bdd, up, w, buf) - top_down(bdd, down, w, buf);
      record(grad, std::abs(g[i] - diff));
    }

    const double td = top_down(bdd, a, w, buf);
    const double bu = bottom_up(bdd, a, w, buf);
    record(dual, std::abs(td - bu));

    const auto p = true_probabilities(a);
    for (const auto &c : f.constraints)
      record(counting, std::abs(cop(bdd, bdd.entry(c.id), p) - oracle::brute_cop(c, p)));

    Assignment b(static_cast<std::size_t>(n));
    std::vector<double> vb(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < b.size(); ++i) {
      b[i] = rng.coin() ? -1 : 1;
      vb[i] = b[i];
    }
    const double sat = check_formula(f, b, w.values()).satisfied_weight;
    record(vertex, std::abs(top_down(bdd, vb, w, buf) - sat));
  }
  return {grad, counting, dual, vertex};
}

} // namespace bddcls
