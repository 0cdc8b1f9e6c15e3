#include <gtest/gtest.h>

#include <cmath>

#include "bddcls/engine.hpp"
#include "bddcls/oracle.hpp"
#include "bddcls/selfcheck.hpp"

using namespace bddcls;

namespace {

WeightMap ones(const Formula &f) { return WeightMap(std::vector<double>(f.size(), 1.0)); }

WeightMap random_weights(Rng &rng, std::size_t m) {
  std::vector<double> w(m);
  for (auto &x : w)
    x = rng.uniform(0.1, 5.0);
  return WeightMap(std::move(w));
}

double td(const MrBdd &bdd, std::span<const double> a, const WeightMap &w) {
  MessageBuffers buf;
  return top_down(bdd, a, w, buf);
}

} // namespace

TEST(TopDown, Examples) {
  Formula clause = parse_hybrid("p hbf 2 1\n1 2 0\n");
  MrBdd b1 = build_formula(clause);
  EXPECT_NEAR(td(b1, std::vector<double>{0, 0}, ones(clause)), 0.75, 1e-15);
  EXPECT_NEAR(td(b1, std::vector<double>{-1, 0.37}, ones(clause)), 1.0, 1e-15);

  Formula x = parse_hybrid("p hbf 3 1\nx 1 2 3 0\n");
  MrBdd b2 = build_formula(x);
  EXPECT_NEAR(td(b2, std::vector<double>{0, 0, 0}, ones(x)), 0.5, 1e-15);
}

TEST(BottomUp, Examples) {
  Formula nae = parse_hybrid("p hbf 3 1\nn 1 2 3 0\n");
  MrBdd bdd = build_formula(nae);
  MessageBuffers buf;
  EXPECT_NEAR(bottom_up(bdd, std::vector<double>{0, 0, 0}, ones(nae), buf), 0.75, 1e-15);
  EXPECT_EQ(buf.m_bu[kOne], 1.0);
  EXPECT_EQ(buf.m_bu[kZero], 0.0);

  Rng rng(31);
  for (int it = 0; it < 50; ++it) {
    Formula f = random_hybrid_formula(rng, 8, 6, 6);
    MrBdd fb = build_formula(f);
    WeightMap w = random_weights(rng, f.size());
    Assignment b(8);
    std::vector<double> a(8);
    for (int i = 0; i < 8; ++i) {
      b[static_cast<std::size_t>(i)] = rng.coin() ? -1 : 1;
      a[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)];
    }
    auto expect = check_formula(f, b, w.values()).satisfied_weight;
    EXPECT_NEAR(bottom_up(fb, a, w, buf), expect, 1e-12);
  }
}

TEST(Cop, Examples) {
  Formula clause = parse_hybrid("p hbf 2 1\n1 2 0\n");
  MrBdd bdd = build_formula(clause);
  EXPECT_NEAR(cop(bdd, bdd.entry(0), std::vector<double>{0.5, 0.5}), 0.75, 1e-15);
  EXPECT_EQ(cop(bdd, kOne, std::vector<double>{0.1, 0.9}), 1.0);
  EXPECT_EQ(cop(bdd, kZero, std::vector<double>{0.1, 0.9}), 0.0);
}

TEST(DiscreteGradient, Examples) {
  Formula clause = parse_hybrid("p hbf 2 1\n1 2 0\n");
  MrBdd b1 = build_formula(clause);
  MessageBuffers buf;
  std::vector<double> g(2);
  double v = discrete_gradient(b1, std::vector<double>{0, 0}, ones(clause), buf, g);
  EXPECT_NEAR(v, 0.75, 1e-15);
  EXPECT_NEAR(g[0], -0.5, 1e-15);
  EXPECT_NEAR(g[1], -0.5, 1e-15);

  Formula x = parse_hybrid("p hbf 3 1\nx 1 2 3 0\n");
  MrBdd b2 = build_formula(x);
  std::vector<double> g3(3);
  discrete_gradient(b2, std::vector<double>{0, 0, 0}, ones(x), buf, g3);
  for (double gi : g3)
    EXPECT_NEAR(gi, 0.0, 1e-15);
}

TEST(DiscreteGradient, UntestedVariablesHaveZeroGradient) {
  Formula f = parse_hybrid("p hbf 5 2\n1 2 0\nx 2 4 0\n");
  MrBdd bdd = build_formula(f);
  MessageBuffers buf;
  std::vector<double> g(5, 7.0);
  discrete_gradient(bdd, std::vector<double>{0.3, -0.2, 0.5, 0.1, 0.9}, ones(f), buf, g);
  EXPECT_EQ(g[2], 0.0);
  EXPECT_EQ(g[4], 0.0);
}

TEST(Oracles, BruteCopExamples) {
  auto unit = Constraint::clause({{1, false}});
  EXPECT_NEAR(oracle::brute_cop(unit, std::vector<double>{0.3}), 0.3, 1e-15);
  auto x = Constraint::xor_of({{1, false}, {2, false}, {3, false}});
  EXPECT_NEAR(oracle::brute_cop(x, std::vector<double>{0.5, 0.5, 0.5}), 0.5, 1e-15);
  auto cl = Constraint::clause({{1, false}, {2, false}});
  EXPECT_NEAR(oracle::brute_cop(cl, std::vector<double>{0.5, 0.5}), 0.75, 1e-15);
}

TEST(Oracles, WalshFourierCoefficients) {
  auto cl = Constraint::clause({{1, false}, {2, false}});
  std::vector<int> none, s1{1}, s2{2}, s12{1, 2};
  EXPECT_EQ(oracle::wf_coefficient(cl, none), 0.75);
  EXPECT_EQ(oracle::wf_coefficient(cl, s1), -0.25);
  EXPECT_EQ(oracle::wf_coefficient(cl, s2), -0.25);
  EXPECT_EQ(oracle::wf_coefficient(cl, s12), -0.25);
  auto x = Constraint::xor_of({{1, false}, {2, false}, {3, false}});
  std::vector<int> s123{1, 2, 3};
  EXPECT_EQ(oracle::wf_coefficient(x, none), 0.5);
  EXPECT_EQ(oracle::wf_coefficient(x, s123), -0.5);
  EXPECT_EQ(oracle::wf_coefficient(x, s12), 0.0);
}

TEST(Oracles, WfeEvalExamples) {
  auto cl = Constraint::clause({{1, false}, {2, false}});
  EXPECT_NEAR(oracle::wfe_eval(cl, std::vector<double>{0, 0}), 0.75, 1e-15);
  auto nae = Constraint::nae({{1, false}, {2, false}, {3, false}});
  EXPECT_NEAR(oracle::wfe_eval(nae, std::vector<double>{1, 1, 1}), 0.0, 1e-15);
  Rng rng(32);
  for (int it = 0; it < 100; ++it) {
    Formula f;
    f.num_vars = 10;
    f.add(random_constraint(rng, 10, 10));
    MrBdd bdd = build_formula(f);
    auto a = random_point(rng, 10);
    auto p = true_probabilities(a);
    EXPECT_NEAR(oracle::wfe_eval(f.constraints[0], a), cop(bdd, bdd.entry(0), p), 1e-9);
  }
}

TEST(Oracles, SizeGuard) {
  std::vector<Literal> lits;
  for (int i = 1; i <= 21; ++i)
    lits.push_back({i, false});
  auto c = Constraint::clause(lits);
  std::vector<double> p(21, 0.5);
  EXPECT_THROW(oracle::brute_cop(c, p), std::length_error);
}

TEST(WeightMapTest, Validation) {
  EXPECT_THROW(WeightMap(std::vector<double>{1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(WeightMap(std::vector<double>{-1.0}), std::invalid_argument);
  WeightMap w(std::vector<double>{1, 2, 3});
  EXPECT_EQ(w.total(), 6.0);
  w.scale(0, 4.0);
  EXPECT_EQ(w.total(), 9.0);
  EXPECT_EQ(w.max(), 4.0);
  w.scale_all(0.5);
  EXPECT_EQ(w.total(), 4.5);
  EXPECT_THROW(w.set(1, std::nan("")), std::invalid_argument);
}

TEST(EngineProperties, RoundingExpectation) {
  Rng rng(33);
  for (int it = 0; it < 100; ++it) {
    const int n = 1 + static_cast<int>(rng.below(12));
    Formula f = random_hybrid_formula(rng, n, 1 + static_cast<int>(rng.below(6)), 8);
    MrBdd bdd = build_formula(f);
    WeightMap w = random_weights(rng, f.size());
    auto a = random_point(rng, n, 0.2);
    EXPECT_NEAR(td(bdd, a, w), oracle::rounding_expectation(f, w, a), 1e-9);
  }
}

TEST(EngineProperties, MultilinearityAndGradientIdentity) {
  Rng rng(34);
  for (int it = 0; it < 100; ++it) {
    const int n = 1 + static_cast<int>(rng.below(15));
    Formula f = random_hybrid_formula(rng, n, 1 + static_cast<int>(rng.below(8)), 8);
    MrBdd bdd = build_formula(f);
    WeightMap w = random_weights(rng, f.size());
    auto a = random_point(rng, n, 0.2);
    MessageBuffers buf;
    std::vector<double> g(static_cast<std::size_t>(n));
    const double v = discrete_gradient(bdd, a, w, buf, g);
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto lo = a, hi = a;
      lo[i] = -1;
      hi[i] = 1;
      const double f_lo = td(bdd, lo, w), f_hi = td(bdd, hi, w);
      EXPECT_NEAR(v, (1 - a[i]) / 2 * f_lo + (1 + a[i]) / 2 * f_hi, 1e-12);
      EXPECT_NEAR(g[i], f_hi - f_lo, 1e-12);
    }
  }
}

TEST(EngineProperties, FiniteDifference) {
  Rng rng(35);
  const double h = 1e-4;
  for (int it = 0; it < 50; ++it) {
    const int n = 2 + static_cast<int>(rng.below(12));
    Formula f = random_hybrid_formula(rng, n, 6, 6);
    MrBdd bdd = build_formula(f);
    WeightMap w = ones(f);
    std::vector<double> a(static_cast<std::size_t>(n));
    for (auto &x : a)
      x = rng.uniform(-0.9, 0.9);
    MessageBuffers buf;
    std::vector<double> g(a.size());
    discrete_gradient(bdd, a, w, buf, g);
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto p = a, m = a;
      p[i] += h;
      m[i] -= h;
      // slope times the length of the [-1, 1] span
      const double fd = 2.0 * (td(bdd, p, w) - td(bdd, m, w)) / (2 * h);
      EXPECT_LE(std::abs(fd - g[i]), 1e-6 * std::max(1.0, std::abs(g[i])));
    }
  }
}

TEST(EngineProperties, VertexConsistencyBoundsAndMass) {
  Rng rng(36);
  for (int it = 0; it < 100; ++it) {
    const int n = 1 + static_cast<int>(rng.below(20));
    Formula f = random_hybrid_formula(rng, n, 1 + static_cast<int>(rng.below(10)), 10);
    MrBdd bdd = build_formula(f);
    WeightMap w = random_weights(rng, f.size());
    Assignment b(static_cast<std::size_t>(n));
    std::vector<double> a(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
      a[i] = b[i] = rng.coin() ? -1 : 1;
    // exact with integer weights; real weights only differ by summation order
    WeightMap iw = WeightMap(std::vector<double>(f.size(), 1.0));
    for (std::size_t c = 0; c < f.size(); ++c)
      iw.set(c, static_cast<double>(constraint_length(f.constraints[c])));
    EXPECT_EQ(td(bdd, a, iw), check_formula(f, b, iw.values()).satisfied_weight);
    EXPECT_NEAR(td(bdd, a, w), check_formula(f, b, w.values()).satisfied_weight,
                1e-12 * w.total());

    auto x = random_point(rng, n, 0.1);
    MessageBuffers buf;
    const double v = top_down(bdd, x, w, buf);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, w.total() * (1 + 1e-15));
    EXPECT_NEAR(buf.m_td[kOne] + buf.m_td[kZero], w.total(), 1e-12 * w.total());
    auto p = true_probabilities(x);
    for (NodeId e : bdd.entries()) {
      const double c = cop(bdd, e, p);
      EXPECT_GE(c, 0.0);
      EXPECT_LE(c, 1.0);
    }
  }
}

TEST(BddObjectiveTest, CountsCalls) {
  Formula f = parse_hybrid("p hbf 2 1\n1 2 0\n");
  MrBdd bdd = build_formula(f);
  WeightMap w = ones(f);
  BddObjective obj(bdd, w);
  std::vector<double> a{0, 0}, g(2);
  EXPECT_NEAR(obj.value(a), 0.75, 1e-15);
  EXPECT_NEAR(obj.value_and_gradient(a, g), 0.75, 1e-15);
  EXPECT_EQ(obj.value_calls(), 1u);
  EXPECT_EQ(obj.gradient_calls(), 1u);
}
