#include "bddcls/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "bddcls/rng.hpp"

namespace bddcls {

const char *to_string(Family f) {
  switch (f) {
  case Family::CnfXor:
    return "cnf_xor";
  case Family::XorCard:
    return "xor_card";
  case Family::Cards:
    return "cards";
  case Family::Pbs:
    return "pbs";
  }
  return "?";
}

Family parse_family(const std::string &s) {
  for (Family f : {Family::CnfXor, Family::XorCard, Family::Cards, Family::Pbs})
    if (s == to_string(f))
      return f;
  throw std::invalid_argument("unknown family '" + s + "'");
}

namespace {

// Counts like r * n are floored; the epsilon absorbs products such as
// 0.7 * 100 landing just below an integer.
int floor_count(double x) { return static_cast<int>(std::floor(x + 1e-9)); }

} // namespace

void GenSpec::validate() const {
  if (n < 1)
    throw std::invalid_argument("generator: n must be >= 1");
  if (r_c < 0 || r_x < 0 || r_p < 0)
    throw std::invalid_argument("generator: densities must be >= 0");
  if (!(delta > 0 && delta < 1))
    throw std::invalid_argument("generator: delta must lie in (0,1)");
  if (!(r_v > 0 && r_v < 1))
    throw std::invalid_argument("generator: r_V must lie in (0,1)");
  if (count < 1)
    throw std::invalid_argument("generator: count must be >= 1");
  if (family == Family::CnfXor && r_c > 0 && (clause_len < 1 || clause_len > n))
    throw std::invalid_argument("generator: clause length must lie in [1, n]");
  if ((family == Family::Cards || family == Family::Pbs) && floor_count(r_v * n) < 1)
    throw std::invalid_argument("generator: r_V * n must be at least 1");
}

namespace {

Assignment uniform_assignment(int n, Rng &rng) {
  Assignment b(static_cast<std::size_t>(n));
  for (auto &x : b)
    x = rng.coin() ? -1 : 1;
  return b;
}

// k distinct variables in increasing order (partial Fisher-Yates).
std::vector<int> sample_vars(int n, int k, Rng &rng) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 1);
  for (int i = 0; i < k; ++i) {
    auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(n - i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(k));
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<Literal> positive(const std::vector<int> &vars) {
  std::vector<Literal> lits;
  for (int v : vars)
    lits.push_back({v, false});
  return lits;
}

// Variables join with probability 1/2; empty draws are redrawn.
Constraint random_xor(int n, Rng &rng, const Assignment *hidden) {
  std::vector<Literal> lits;
  while (lits.empty())
    for (int v = 1; v <= n; ++v)
      if (rng.coin())
        lits.push_back({v, false});
  Constraint c = Constraint::xor_of(std::move(lits));
  if (hidden) {
    if (!check_constraint(c, *hidden))
      c.literals.front().negated = true;
  } else if (rng.coin()) {
    c.literals.front().negated = true;
  }
  return c;
}

Comparator random_direction(Rng &rng) { return rng.coin() ? Comparator::Le : Comparator::Ge; }

} // namespace

Formula gen_cnf_xor(const GenSpec &spec, std::uint64_t seed, Assignment *hidden) {
  spec.validate();
  Rng rng(seed);
  Formula f;
  f.num_vars = spec.n;
  Assignment planted;
  if (spec.plant)
    planted = uniform_assignment(spec.n, rng);
  const Assignment *target = spec.plant ? &planted : nullptr;

  const int clauses = floor_count(spec.r_c * spec.n);
  for (int i = 0; i < clauses; ++i) {
    for (;;) {
      std::vector<Literal> lits;
      for (int v : sample_vars(spec.n, spec.clause_len, rng))
        lits.push_back({v, rng.coin()});
      Constraint c = Constraint::clause(std::move(lits));
      if (!target || check_constraint(c, *target)) {
        f.add(std::move(c));
        break;
      }
    }
  }
  const int xors = floor_count(spec.r_x * spec.n);
  for (int i = 0; i < xors; ++i)
    f.add(random_xor(spec.n, rng, target));

  if (hidden && spec.plant)
    *hidden = planted;
  return f;
}

Formula gen_xor_card(const GenSpec &spec, std::uint64_t seed, Assignment *hidden) {
  spec.validate();
  Rng rng(seed);
  Formula f;
  f.num_vars = spec.n;
  const int bound = floor_count(spec.delta * spec.n);
  Assignment planted;
  if (spec.plant) {
    planted.assign(static_cast<std::size_t>(spec.n), 1);
    for (int v : sample_vars(spec.n, bound, rng))
      planted[static_cast<std::size_t>(v - 1)] = -1;
  }
  const Assignment *target = spec.plant ? &planted : nullptr;

  const int xors = floor_count(spec.r_x * spec.n);
  for (int i = 0; i < xors; ++i)
    f.add(random_xor(spec.n, rng, target));
  std::vector<int> all(static_cast<std::size_t>(spec.n));
  std::iota(all.begin(), all.end(), 1);
  f.add(Constraint::card(positive(all), Comparator::Le, bound));

  if (hidden && spec.plant)
    *hidden = planted;
  return f;
}

Formula gen_cards(const GenSpec &spec, std::uint64_t seed, Assignment *hidden) {
  spec.validate();
  Rng rng(seed);
  Formula f;
  f.num_vars = spec.n;
  Assignment planted;
  if (spec.plant)
    planted = uniform_assignment(spec.n, rng);

  const int count = floor_count(spec.r_p * spec.n);
  const int width = floor_count(spec.r_v * spec.n);
  const std::int64_t k = floor_count(spec.r_v * spec.n / 2.0);
  for (int i = 0; i < count; ++i) {
    for (;;) {
      auto vars = sample_vars(spec.n, width, rng);
      Constraint c = Constraint::card(positive(vars), random_direction(rng), k);
      if (!spec.plant || check_constraint(c, planted)) {
        f.add(std::move(c));
        break;
      }
    }
  }
  if (hidden && spec.plant)
    *hidden = planted;
  return f;
}

Formula gen_pbs(const GenSpec &spec, std::uint64_t seed, Assignment *hidden) {
  spec.validate();
  Rng rng(seed);
  Formula f;
  f.num_vars = spec.n;
  Assignment planted;
  if (spec.plant)
    planted = uniform_assignment(spec.n, rng);

  auto draw_coef = [&] { return static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(spec.n))) + 1; };
  std::vector<std::int64_t> per_var;
  if (spec.coef_mode == CoefMode::PerVariable)
    for (int v = 0; v < spec.n; ++v)
      per_var.push_back(draw_coef());

  const int count = floor_count(spec.r_p * spec.n);
  const int width = floor_count(spec.r_v * spec.n);
  for (int i = 0; i < count; ++i) {
    for (;;) {
      auto vars = sample_vars(spec.n, width, rng);
      std::vector<std::int64_t> coefs;
      for (int v : vars)
        coefs.push_back(spec.coef_mode == CoefMode::PerVariable
                            ? per_var[static_cast<std::size_t>(v - 1)]
                            : draw_coef());
      const std::int64_t sum = std::accumulate(coefs.begin(), coefs.end(), std::int64_t{0});
      Constraint c = Constraint::pb(positive(vars), std::move(coefs), random_direction(rng), sum / 2);
      if (!spec.plant || check_constraint(c, planted)) {
        f.add(std::move(c));
        break;
      }
    }
  }
  if (hidden && spec.plant)
    *hidden = planted;
  return f;
}

Instance generate(const GenSpec &spec, int idx) {
  Instance inst;
  inst.seed = mix_seed(spec.seed ^ mix_seed(static_cast<std::uint64_t>(idx) + 1));
  Assignment hidden;
  switch (spec.family) {
  case Family::CnfXor:
    inst.formula = gen_cnf_xor(spec, inst.seed, &hidden);
    break;
  case Family::XorCard:
    inst.formula = gen_xor_card(spec, inst.seed, &hidden);
    break;
  case Family::Cards:
    inst.formula = gen_cards(spec, inst.seed, &hidden);
    break;
  case Family::Pbs:
    inst.formula = gen_pbs(spec, inst.seed, &hidden);
    break;
  }
  if (spec.plant) {
    std::vector<double> ones(inst.formula.size(), 1.0);
    if (!check_formula(inst.formula, hidden, ones).unsatisfied.empty())
      throw std::logic_error("generator: planted assignment does not satisfy the instance");
    inst.hidden = std::move(hidden);
  }
  return inst;
}

std::string instance_file_name(const GenSpec &spec, int idx) {
  char buf[160];
  switch (spec.family) {
  case Family::CnfXor:
    std::snprintf(buf, sizeof buf, "cnf_xor_n%d_rc%g_rx%g_k%d_%d.hbf", spec.n, spec.r_c, spec.r_x,
                  spec.clause_len, idx);
    break;
  case Family::XorCard:
    std::snprintf(buf, sizeof buf, "xor_card_n%d_rx%g_d%g_%d.hbf", spec.n, spec.r_x, spec.delta,
                  idx);
    break;
  case Family::Cards:
    std::snprintf(buf, sizeof buf, "cards_n%d_rp%g_rv%g_%d.hbf", spec.n, spec.r_p, spec.r_v, idx);
    break;
  case Family::Pbs:
    std::snprintf(buf, sizeof buf, "pbs_t%d_n%d_rp%g_rv%g_%d.hbf",
                  spec.coef_mode == CoefMode::PerOccurrence ? 1 : 2, spec.n, spec.r_p, spec.r_v,
                  idx);
    break;
  }
  return buf;
}

std::vector<GenSpec> appendix_grid(Family family) {
  std::vector<GenSpec> grid;
  const int sizes[] = {50, 100, 150};
  auto base = [&](int n) {
    GenSpec s;
    s.family = family;
    s.n = n;
    s.count = 10;
    return s;
  };
  switch (family) {
  case Family::CnfXor: {
    const std::pair<double, double> pairs[] = {{1, 0.2},  {2, 0.2},  {3, 0.2},  {1, 0.4},
                                               {2, 0.4},  {1, 0.6},  {5, 0.2},  {5, 0.4},
                                               {5, 0.6},  {10, 0.2}, {10, 0.4}, {15, 0.2}};
    for (int n : sizes)
      for (auto [rc, rx] : pairs) {
        auto s = base(n);
        s.r_c = rc;
        s.r_x = rx;
        grid.push_back(s);
      }
    break;
  }
  case Family::XorCard:
    for (int n : sizes)
      for (double rx : {0.2, 0.3, 0.4})
        for (double d : {0.2, 0.3, 0.4}) {
          auto s = base(n);
          s.r_x = rx;
          s.delta = d;
          grid.push_back(s);
        }
    break;
  case Family::Cards:
  case Family::Pbs:
    for (CoefMode mode : {CoefMode::PerOccurrence, CoefMode::PerVariable}) {
      if (family == Family::Cards && mode == CoefMode::PerVariable)
        break;
      for (int n : sizes)
        for (double rp : {0.5, 0.6, 0.7})
          for (double rv : {0.2, 0.3, 0.4, 0.5}) {
            auto s = base(n);
            s.r_p = rp;
            s.r_v = rv;
            s.coef_mode = mode;
            grid.push_back(s);
          }
    }
    break;
  }
  return grid;
}

} // namespace bddcls
