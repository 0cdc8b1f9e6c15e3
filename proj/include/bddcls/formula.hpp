#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bddcls {

// Variables are 1-based. Assignments use the +-1 encoding: -1 is True and
// +1 is False.

struct Literal {
  int var = 0;
  bool negated = false;

  /// DIMACS-style signed integer (negative = negated).
  int to_signed() const { return negated ? -var : var; }
  static Literal from_signed(int lit) { return {lit < 0 ? -lit : lit, lit < 0}; }

  friend bool operator==(const Literal &, const Literal &) = default;
};

enum class ConstraintKind { Clause, Xor, Nae, Card, Pb };
enum class Comparator { Le, Ge, Eq };

const char *to_string(ConstraintKind kind);
const char *to_string(Comparator cmp);

/// Returns (lhs cmp rhs).
inline bool compare(std::int64_t lhs, Comparator cmp, std::int64_t rhs) {
  switch (cmp) {
  case Comparator::Le:
    return lhs <= rhs;
  case Comparator::Ge:
    return lhs >= rhs;
  case Comparator::Eq:
    return lhs == rhs;
  }
  return false;
}

struct Constraint {
  ConstraintKind kind = ConstraintKind::Clause;
  std::vector<Literal> literals;
  // Card and Pb only.
  Comparator comparator = Comparator::Ge;
  std::int64_t threshold = 0;
  // Pb only; aligned with literals.
  std::vector<std::int64_t> coefficients;
  int id = 0;

  static Constraint clause(std::vector<Literal> lits);
  static Constraint xor_of(std::vector<Literal> lits);
  static Constraint nae(std::vector<Literal> lits);
  static Constraint card(std::vector<Literal> lits, Comparator cmp, std::int64_t k);
  static Constraint pb(std::vector<Literal> lits, std::vector<std::int64_t> coefs, Comparator cmp,
                       std::int64_t k);

  bool is_symmetric() const { return kind != ConstraintKind::Pb; }

  /// Coefficient-magnitude bound M = max |coef| (1 for non-Pb kinds).
  std::int64_t coefficient_bound() const;

  /// Cardinality constraints as unit-coefficient Pb. Throws for other kinds.
  Constraint as_pb() const;

  /// Largest variable index referenced, 0 if empty.
  int max_var() const;

  friend bool operator==(const Constraint &, const Constraint &) = default;
};

struct Formula {
  int num_vars = 0;
  std::vector<Constraint> constraints;
  // true = soft (MaxSAT mode only).
  std::vector<bool> soft;
  std::vector<double> soft_weights;

  std::size_t size() const { return constraints.size(); }
  bool has_soft() const;

  /// Appends with a fresh id; returns that id.
  int add(Constraint c, bool is_soft = false, double weight = 1.0);

  /// Throws std::invalid_argument when a literal is out of range or a
  /// variable repeats inside one constraint.
  void validate() const;

  friend bool operator==(const Formula &, const Formula &) = default;
};

using Assignment = std::vector<std::int8_t>;

class ParseError : public std::runtime_error {
public:
  ParseError(int line, const std::string &what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

Formula parse_hybrid(std::string_view text);
Formula parse_dimacs_cnf(std::string_view text);
Formula parse_wcnf(std::string_view text);

/// Inverse of parse_hybrid (hard constraints only).
std::string to_hybrid(const Formula &f);

/// Number of literals set to True by b.
int count_true(std::span<const Literal> lits, const Assignment &b);

bool check_constraint(const Constraint &c, const Assignment &b);

struct CheckResult {
  double satisfied_weight = 0.0;
  std::vector<int> unsatisfied;
};

CheckResult check_formula(const Formula &f, const Assignment &b, std::span<const double> weights);

int constraint_length(const Constraint &c);

/// Sum of soft weights violated by b, plus the number of violated hard constraints.
struct MaxSatCost {
  double soft_cost = 0.0;
  int hard_violations = 0;
};
MaxSatCost maxsat_cost(const Formula &f, const Assignment &b);

} // namespace bddcls
