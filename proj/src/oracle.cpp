#include "bddcls/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace bddcls::oracle {

namespace {

std::vector<int> vars_of(const Constraint &c) {
  std::vector<int> v;
  for (const auto &l : c.literals)
    v.push_back(l.var);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void guard(std::size_t n) {
  if (n > static_cast<std::size_t>(kMaxVars))
    throw std::length_error("oracle: too many variables for enumeration");
}

// Truth table of c over vars: bit j of the index set means vars[j] is True.
std::vector<char> truth_table(const Constraint &c, const std::vector<int> &vars) {
  guard(vars.size());
  const int width = std::max(c.max_var(), vars.empty() ? 0 : vars.back());
  Assignment b(static_cast<std::size_t>(width), 1);
  const std::uint32_t count = 1u << vars.size();
  std::vector<char> table(count);
  for (std::uint32_t x = 0; x < count; ++x) {
    for (std::size_t j = 0; j < vars.size(); ++j)
      b[static_cast<std::size_t>(vars[j] - 1)] = (x >> j) & 1u ? -1 : 1;
    table[x] = check_constraint(c, b) ? 1 : 0;
  }
  return table;
}

} // namespace

double brute_cop(const Constraint &c, std::span<const double> p) {
  const auto vars = vars_of(c);
  const auto table = truth_table(c, vars);
  double total = 0.0;
  for (std::uint32_t x = 0; x < table.size(); ++x) {
    if (!table[x])
      continue;
    double prob = 1.0;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      const double pj = p[static_cast<std::size_t>(vars[j] - 1)];
      prob *= (x >> j) & 1u ? pj : 1.0 - pj;
    }
    total += prob;
  }
  return total;
}

double wf_coefficient(const Constraint &c, std::span<const int> subset) {
  auto vars = vars_of(c);
  vars.insert(vars.end(), subset.begin(), subset.end());
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  std::uint32_t mask = 0;
  for (int s : subset)
    mask |= 1u << (std::lower_bound(vars.begin(), vars.end(), s) - vars.begin());

  const auto table = truth_table(c, vars);
  double sum = 0.0;
  for (std::uint32_t x = 0; x < table.size(); ++x) {
    if (!table[x])
      continue;
    // Each True variable in S contributes a factor -1.
    sum += std::popcount(x & mask) % 2 ? -1.0 : 1.0;
  }
  return sum / static_cast<double>(table.size());
}

double wfe_eval(const Constraint &c, std::span<const double> a) {
  const auto vars = vars_of(c);
  const auto table = truth_table(c, vars);
  const std::size_t count = table.size();

  // Fast Walsh-Hadamard transform gives every coefficient at once.
  std::vector<double> coef(count);
  for (std::size_t x = 0; x < count; ++x)
    coef[x] = table[x];
  for (std::size_t h = 1; h < count; h <<= 1)
    for (std::size_t i = 0; i < count; i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const double u = coef[j], v = coef[j + h];
        coef[j] = u + v;
        coef[j + h] = u - v;
      }

  std::vector<double> monomial(count);
  monomial[0] = 1.0;
  double value = coef[0];
  for (std::size_t s = 1; s < count; ++s) {
    const auto low = static_cast<std::size_t>(std::countr_zero(s));
    monomial[s] = monomial[s & (s - 1)] * a[static_cast<std::size_t>(vars[low] - 1)];
    value += coef[s] * monomial[s];
  }
  return value / static_cast<double>(count);
}

double wfe_objective(const Formula &f, const WeightMap &w, std::span<const double> a) {
  double total = 0.0;
  for (const auto &c : f.constraints)
    total += w[static_cast<std::size_t>(c.id)] * wfe_eval(c, a);
  return total;
}

namespace {

template <class Fn> void for_each_vertex(int n, Fn &&fn) {
  guard(static_cast<std::size_t>(n));
  Assignment b(static_cast<std::size_t>(n), 1);
  const std::uint32_t count = 1u << n;
  for (std::uint32_t x = 0; x < count; ++x) {
    for (int i = 0; i < n; ++i)
      b[static_cast<std::size_t>(i)] = (x >> i) & 1u ? -1 : 1;
    fn(b);
  }
}

} // namespace

double rounding_expectation(const Formula &f, const WeightMap &w, std::span<const double> a) {
  double expectation = 0.0;
  for_each_vertex(f.num_vars, [&](const Assignment &b) {
    double prob = 1.0;
    for (std::size_t i = 0; i < b.size(); ++i)
      prob *= b[i] < 0 ? (1.0 - a[i]) / 2.0 : (1.0 + a[i]) / 2.0;
    if (prob == 0.0)
      return;
    expectation += prob * check_formula(f, b, w.values()).satisfied_weight;
  });
  return expectation;
}

double max_satisfied_weight(const Formula &f, std::span<const double> w, Assignment *argmax) {
  double best = -1.0;
  for_each_vertex(f.num_vars, [&](const Assignment &b) {
    double s = check_formula(f, b, w).satisfied_weight;
    if (s > best) {
      best = s;
      if (argmax)
        *argmax = b;
    }
  });
  return best;
}

double min_maxsat_cost(const Formula &f, Assignment *argmin) {
  double best = std::numeric_limits<double>::infinity();
  for_each_vertex(f.num_vars, [&](const Assignment &b) {
    auto cost = maxsat_cost(f, b);
    if (cost.hard_violations == 0 && cost.soft_cost < best) {
      best = cost.soft_cost;
      if (argmin)
        *argmin = b;
    }
  });
  return best;
}

} // namespace bddcls::oracle
