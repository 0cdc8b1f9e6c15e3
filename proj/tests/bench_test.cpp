#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "bddcls/bench.hpp"

using namespace bddcls;

namespace {

GenSpec spec_of(Family family, int n) {
  GenSpec s;
  s.family = family;
  s.n = n;
  s.plant = true;
  s.seed = 77;
  return s;
}

bool satisfies_all(const Formula &f, const Assignment &b) {
  for (const auto &c : f.constraints)
    if (!check_constraint(c, b))
      return false;
  return true;
}

std::size_t count_kind(const Formula &f, ConstraintKind k) {
  std::size_t n = 0;
  for (const auto &c : f.constraints)
    n += c.kind == k;
  return n;
}

} // namespace

TEST(GenCnfXor, CountsAndPlanting) {
  auto s = spec_of(Family::CnfXor, 50);
  s.r_c = 2;
  s.r_x = 0.2;
  for (int idx = 0; idx < 5; ++idx) {
    auto inst = generate(s, idx);
    EXPECT_EQ(count_kind(inst.formula, ConstraintKind::Xor), 10u);
    EXPECT_EQ(count_kind(inst.formula, ConstraintKind::Clause), 100u);
    ASSERT_TRUE(inst.hidden);
    EXPECT_TRUE(satisfies_all(inst.formula, *inst.hidden));
    for (const auto &c : inst.formula.constraints)
      if (c.kind == ConstraintKind::Clause)
        EXPECT_EQ(c.literals.size(), 3u);
  }
}

TEST(GenCnfXor, XorLengthIsHalfOfN) {
  auto s = spec_of(Family::CnfXor, 50);
  s.r_x = 2.0; // 100 XORs
  auto f = generate(s).formula;
  ASSERT_EQ(f.size(), 100u);
  double sum = 0;
  for (const auto &c : f.constraints)
    sum += static_cast<double>(c.literals.size());
  // Binomial(50, 1/2): mean 25, variance 12.5
  const double sigma = std::sqrt(12.5 / 100.0);
  EXPECT_LE(std::abs(sum / 100.0 - 25.0), 3 * sigma);
}

TEST(GenXorCard, ThresholdAndSingleCard) {
  auto s = spec_of(Family::XorCard, 50);
  s.r_x = 0.2;
  s.delta = 0.2;
  for (int idx = 0; idx < 5; ++idx) {
    auto inst = generate(s, idx);
    ASSERT_EQ(count_kind(inst.formula, ConstraintKind::Card), 1u);
    EXPECT_EQ(count_kind(inst.formula, ConstraintKind::Xor), 10u);
    const auto &card = inst.formula.constraints.back();
    EXPECT_EQ(card.threshold, 10);
    EXPECT_EQ(card.comparator, Comparator::Le);
    EXPECT_EQ(card.literals.size(), 50u);
    EXPECT_TRUE(satisfies_all(inst.formula, *inst.hidden));
    int trues = 0;
    for (auto v : *inst.hidden)
      trues += v == -1;
    EXPECT_EQ(trues, 10);
  }
}

TEST(GenCards, ShapeAndPositiveLiterals) {
  auto s = spec_of(Family::Cards, 100);
  s.r_p = 0.5;
  s.r_v = 0.2;
  auto inst = generate(s);
  ASSERT_EQ(inst.formula.size(), 50u);
  int le = 0;
  for (const auto &c : inst.formula.constraints) {
    EXPECT_EQ(c.kind, ConstraintKind::Card);
    EXPECT_EQ(c.literals.size(), 20u);
    EXPECT_EQ(c.threshold, 10);
    le += c.comparator == Comparator::Le;
    for (const auto &l : c.literals)
      EXPECT_FALSE(l.negated);
  }
  EXPECT_GT(le, 0);
  EXPECT_LT(le, 50);
  EXPECT_TRUE(satisfies_all(inst.formula, *inst.hidden));
}

TEST(GenPbs, ThresholdIsHalfTheCoefficientSum) {
  auto s = spec_of(Family::Pbs, 50);
  s.r_p = 0.6;
  s.r_v = 0.3;
  auto inst = generate(s);
  ASSERT_EQ(inst.formula.size(), 30u);
  for (const auto &c : inst.formula.constraints) {
    EXPECT_EQ(c.literals.size(), 15u);
    std::int64_t sum = 0;
    for (auto a : c.coefficients) {
      EXPECT_GE(a, 1);
      EXPECT_LE(a, 50);
      sum += a;
    }
    EXPECT_EQ(c.threshold, sum / 2);
  }
  EXPECT_TRUE(satisfies_all(inst.formula, *inst.hidden));
}

TEST(GenPbs, PerVariableCoefficientsAgree) {
  auto s = spec_of(Family::Pbs, 50);
  s.r_p = 0.7;
  s.r_v = 0.5;
  s.coef_mode = CoefMode::PerVariable;
  auto inst = generate(s);
  std::map<int, std::int64_t> seen;
  for (const auto &c : inst.formula.constraints)
    for (std::size_t i = 0; i < c.literals.size(); ++i) {
      auto [it, fresh] = seen.emplace(c.literals[i].var, c.coefficients[i]);
      EXPECT_EQ(it->second, c.coefficients[i]);
    }
  EXPECT_GT(seen.size(), 1u);
}

TEST(GenPbs, PerOccurrenceCoefficientsVary) {
  auto s = spec_of(Family::Pbs, 50);
  s.r_p = 0.7;
  s.r_v = 0.5;
  auto inst = generate(s);
  std::map<int, std::int64_t> seen;
  bool differs = false;
  for (const auto &c : inst.formula.constraints)
    for (std::size_t i = 0; i < c.literals.size(); ++i) {
      auto [it, fresh] = seen.emplace(c.literals[i].var, c.coefficients[i]);
      differs = differs || it->second != c.coefficients[i];
    }
  EXPECT_TRUE(differs);
}

TEST(Generate, UnplantedHasNoHiddenAssignment) {
  auto s = spec_of(Family::Cards, 50);
  s.plant = false;
  s.r_p = 0.5;
  EXPECT_FALSE(generate(s).hidden);
}

TEST(Generate, Deterministic) {
  for (Family fam : {Family::CnfXor, Family::XorCard, Family::Cards, Family::Pbs}) {
    auto s = spec_of(fam, 50);
    s.r_c = 1;
    s.r_x = 0.4;
    s.r_p = 0.5;
    EXPECT_EQ(to_hybrid(generate(s, 3).formula), to_hybrid(generate(s, 3).formula));
    EXPECT_NE(to_hybrid(generate(s, 3).formula), to_hybrid(generate(s, 4).formula));
    auto other = s;
    other.seed = 78;
    EXPECT_NE(to_hybrid(generate(s, 3).formula), to_hybrid(generate(other, 3).formula));
  }
}

TEST(Generate, GridCounts) {
  auto total = [](Family f) {
    int n = 0;
    for (const auto &s : appendix_grid(f))
      n += s.count;
    return n;
  };
  EXPECT_EQ(total(Family::CnfXor), 360);
  EXPECT_EQ(total(Family::XorCard), 270);
  EXPECT_EQ(total(Family::Cards), 360);
  EXPECT_EQ(total(Family::Pbs), 720);
}

TEST(Generate, ValidationErrors) {
  auto s = spec_of(Family::Cards, 50);
  s.r_p = -1;
  EXPECT_THROW(generate(s), std::invalid_argument);
  s = spec_of(Family::Cards, 50);
  s.r_v = 1.0;
  EXPECT_THROW(generate(s), std::invalid_argument);
  s = spec_of(Family::XorCard, 50);
  s.delta = 0;
  EXPECT_THROW(generate(s), std::invalid_argument);
  s = spec_of(Family::Cards, 0);
  EXPECT_THROW(generate(s), std::invalid_argument);
  EXPECT_THROW(parse_family("sudoku"), std::invalid_argument);
}

TEST(Generate, FileNames) {
  auto s = spec_of(Family::Cards, 50);
  s.r_p = 0.5;
  s.r_v = 0.2;
  EXPECT_EQ(instance_file_name(s, 3), "cards_n50_rp0.5_rv0.2_3.hbf");
  s.family = Family::Pbs;
  s.coef_mode = CoefMode::PerVariable;
  EXPECT_EQ(instance_file_name(s, 0), "pbs_t2_n50_rp0.5_rv0.2_0.hbf");
  s.family = Family::CnfXor;
  s.r_c = 2;
  s.r_x = 0.4;
  EXPECT_EQ(instance_file_name(s, 1), "cnf_xor_n50_rc2_rx0.4_k3_1.hbf");
}
