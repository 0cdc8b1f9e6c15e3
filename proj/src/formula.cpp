#include "bddcls/formula.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace bddcls {

const char *to_string(ConstraintKind kind) {
  switch (kind) {
  case ConstraintKind::Clause:
    return "clause";
  case ConstraintKind::Xor:
    return "xor";
  case ConstraintKind::Nae:
    return "nae";
  case ConstraintKind::Card:
    return "card";
  case ConstraintKind::Pb:
    return "pb";
  }
  return "?";
}

const char *to_string(Comparator cmp) {
  switch (cmp) {
  case Comparator::Le:
    return "<=";
  case Comparator::Ge:
    return ">=";
  case Comparator::Eq:
    return "=";
  }
  return "?";
}

Constraint Constraint::clause(std::vector<Literal> lits) {
  Constraint c;
  c.kind = ConstraintKind::Clause;
  c.literals = std::move(lits);
  return c;
}

Constraint Constraint::xor_of(std::vector<Literal> lits) {
  Constraint c;
  c.kind = ConstraintKind::Xor;
  c.literals = std::move(lits);
  return c;
}

Constraint Constraint::nae(std::vector<Literal> lits) {
  Constraint c;
  c.kind = ConstraintKind::Nae;
  c.literals = std::move(lits);
  return c;
}

Constraint Constraint::card(std::vector<Literal> lits, Comparator cmp, std::int64_t k) {
  Constraint c;
  c.kind = ConstraintKind::Card;
  c.literals = std::move(lits);
  c.comparator = cmp;
  c.threshold = k;
  return c;
}

Constraint Constraint::pb(std::vector<Literal> lits, std::vector<std::int64_t> coefs,
                          Comparator cmp, std::int64_t k) {
  if (coefs.size() != lits.size())
    throw std::invalid_argument("pb: coefficient count does not match literal count");
  for (auto a : coefs)
    if (a == 0)
      throw std::invalid_argument("pb: zero coefficient");
  Constraint c;
  c.kind = ConstraintKind::Pb;
  c.literals = std::move(lits);
  c.coefficients = std::move(coefs);
  c.comparator = cmp;
  c.threshold = k;
  return c;
}

std::int64_t Constraint::coefficient_bound() const {
  if (kind != ConstraintKind::Pb)
    return 1;
  std::int64_t m = 0;
  for (auto a : coefficients)
    m = std::max(m, a < 0 ? -a : a);
  return m;
}

Constraint Constraint::as_pb() const {
  if (kind != ConstraintKind::Card)
    throw std::invalid_argument("as_pb: only cardinality constraints convert");
  Constraint c = pb(literals, std::vector<std::int64_t>(literals.size(), 1), comparator, threshold);
  c.id = id;
  return c;
}

int Constraint::max_var() const {
  int m = 0;
  for (const auto &l : literals)
    m = std::max(m, l.var);
  return m;
}

bool Formula::has_soft() const { return std::find(soft.begin(), soft.end(), true) != soft.end(); }

int Formula::add(Constraint c, bool is_soft, double weight) {
  c.id = static_cast<int>(constraints.size());
  constraints.push_back(std::move(c));
  soft.push_back(is_soft);
  soft_weights.push_back(weight);
  return constraints.back().id;
}

namespace {

// Empty string when fine, otherwise the reason.
std::string literal_problem(const std::vector<Literal> &lits, int num_vars) {
  std::vector<int> vars;
  vars.reserve(lits.size());
  for (const auto &l : lits) {
    if (l.var < 1 || l.var > num_vars)
      return "literal " + std::to_string(l.to_signed()) + " out of range 1.." +
             std::to_string(num_vars);
    vars.push_back(l.var);
  }
  std::sort(vars.begin(), vars.end());
  auto dup = std::adjacent_find(vars.begin(), vars.end());
  if (dup != vars.end())
    return "variable " + std::to_string(*dup) + " repeated in one constraint";
  return {};
}

} // namespace

void Formula::validate() const {
  if (soft.size() != constraints.size() || soft_weights.size() != constraints.size())
    throw std::invalid_argument("formula: soft flags/weights misaligned with constraints");
  for (const auto &c : constraints) {
    if (c.literals.empty())
      throw std::invalid_argument("constraint " + std::to_string(c.id) + ": zero length");
    auto why = literal_problem(c.literals, num_vars);
    if (!why.empty())
      throw std::invalid_argument("constraint " + std::to_string(c.id) + ": " + why);
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i)
      out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class F> void for_each_line(std::string_view text, F &&fn) {
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    ++line_no;
    if (!fn(line_no, text.substr(pos, end - pos)))
      return;
    if (end == text.size())
      break;
    pos = end + 1;
  }
}

std::int64_t parse_int(std::string_view tok, int line) {
  std::int64_t v = 0;
  const char *first = tok.data();
  if (!tok.empty() && tok.front() == '+')
    ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "expected integer, got '" + std::string(tok) + "'");
  return v;
}

double parse_real(std::string_view tok, int line) {
  std::string s(tok);
  char *end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw ParseError(line, "expected number, got '" + s + "'");
  return v;
}

Comparator parse_comparator(std::string_view tok, int line) {
  if (tok == "<=")
    return Comparator::Le;
  if (tok == ">=")
    return Comparator::Ge;
  if (tok == "=" || tok == "==")
    return Comparator::Eq;
  throw ParseError(line, "unknown comparator '" + std::string(tok) + "'");
}

int to_literal_int(std::int64_t v, int line) {
  if (v == 0 || v > std::numeric_limits<int>::max() || v < -std::numeric_limits<int>::max())
    throw ParseError(line, "invalid literal " + std::to_string(v));
  return static_cast<int>(v);
}

// Reads "<lit> ... 0" from toks[from..]; the terminating zero must be last.
std::vector<Literal> read_literals(std::span<const std::string_view> toks, int line) {
  std::vector<Literal> lits;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    std::int64_t v = parse_int(toks[i], line);
    if (v == 0) {
      if (i + 1 != toks.size())
        throw ParseError(line, "tokens after terminating 0");
      return lits;
    }
    lits.push_back(Literal::from_signed(to_literal_int(v, line)));
  }
  throw ParseError(line, "constraint not terminated by 0");
}

void check_literals(const std::vector<Literal> &lits, int num_vars, int line) {
  if (lits.empty())
    throw ParseError(line, "zero-length constraint");
  auto why = literal_problem(lits, num_vars);
  if (!why.empty())
    throw ParseError(line, why);
}

struct Header {
  int num_vars = 0;
  std::int64_t num_constraints = 0;
  bool has_top = false;
  double top = 0.0;
};

Header parse_header(std::span<const std::string_view> toks, std::string_view fmt, int line) {
  if (toks.size() < 4 || toks[1] != fmt)
    throw ParseError(line, "malformed header, expected 'p " + std::string(fmt) + " <n> <m>'");
  Header h;
  std::int64_t n = parse_int(toks[2], line);
  h.num_constraints = parse_int(toks[3], line);
  if (n < 0 || n > std::numeric_limits<int>::max() || h.num_constraints < 0)
    throw ParseError(line, "malformed header, negative or oversized counts");
  h.num_vars = static_cast<int>(n);
  if (fmt == "wcnf" && toks.size() >= 5) {
    h.has_top = true;
    h.top = parse_real(toks[4], line);
    if (toks.size() > 5)
      throw ParseError(line, "malformed header, trailing tokens");
  } else if (toks.size() != 4) {
    throw ParseError(line, "malformed header, trailing tokens");
  }
  return h;
}

} // namespace

Formula parse_hybrid(std::string_view text) {
  Formula f;
  bool have_header = false;
  std::int64_t declared = 0;
  int last_line = 0;
  for_each_line(text, [&](int line, std::string_view raw) {
    last_line = line;
    auto toks = split_tokens(raw);
    if (toks.empty() || toks[0] == "c")
      return true;
    if (toks[0] == "p") {
      if (have_header)
        throw ParseError(line, "duplicate header");
      auto h = parse_header(toks, "hbf", line);
      f.num_vars = h.num_vars;
      declared = h.num_constraints;
      have_header = true;
      return true;
    }
    if (!have_header)
      throw ParseError(line, "constraint before header");

    std::span<const std::string_view> rest(toks);
    const std::string_view tag = toks[0];
    Constraint c;
    if (tag == "x" || tag == "n") {
      auto lits = read_literals(rest.subspan(1), line);
      check_literals(lits, f.num_vars, line);
      c = tag == "x" ? Constraint::xor_of(std::move(lits)) : Constraint::nae(std::move(lits));
    } else if (tag == "d") {
      if (toks.size() < 3)
        throw ParseError(line, "card needs '<op> <k>'");
      auto cmp = parse_comparator(toks[1], line);
      auto k = parse_int(toks[2], line);
      auto lits = read_literals(rest.subspan(3), line);
      check_literals(lits, f.num_vars, line);
      c = Constraint::card(std::move(lits), cmp, k);
    } else if (tag == "b") {
      if (toks.size() < 3)
        throw ParseError(line, "pb needs '<op> <k>'");
      auto cmp = parse_comparator(toks[1], line);
      auto k = parse_int(toks[2], line);
      std::vector<Literal> lits;
      std::vector<std::int64_t> coefs;
      std::size_t i = 3;
      bool terminated = false;
      while (i < toks.size()) {
        auto a = parse_int(toks[i], line);
        if (a == 0) {
          if (i + 1 != toks.size())
            throw ParseError(line, "tokens after terminating 0");
          terminated = true;
          break;
        }
        if (i + 1 >= toks.size())
          throw ParseError(line, "coefficient without literal");
        coefs.push_back(a);
        lits.push_back(Literal::from_signed(to_literal_int(parse_int(toks[i + 1], line), line)));
        i += 2;
      }
      if (!terminated)
        throw ParseError(line, "constraint not terminated by 0");
      check_literals(lits, f.num_vars, line);
      c = Constraint::pb(std::move(lits), std::move(coefs), cmp, k);
    } else {
      std::int64_t probe = 0;
      auto [ptr, ec] = std::from_chars(tag.data(), tag.data() + tag.size(), probe);
      if (ec != std::errc() || ptr != tag.data() + tag.size())
        throw ParseError(line, "unknown line tag '" + std::string(tag) + "'");
      auto lits = read_literals(rest, line);
      check_literals(lits, f.num_vars, line);
      c = Constraint::clause(std::move(lits));
    }
    f.add(std::move(c));
    return true;
  });
  if (!have_header)
    throw ParseError(last_line, "missing 'p hbf' header");
  if (static_cast<std::int64_t>(f.size()) != declared)
    throw ParseError(last_line, "header declares " + std::to_string(declared) +
                                    " constraints, found " + std::to_string(f.size()));
  return f;
}

Formula parse_dimacs_cnf(std::string_view text) {
  Formula f;
  bool have_header = false;
  std::vector<Literal> pending;
  int pending_line = 0;
  int last_line = 0;
  for_each_line(text, [&](int line, std::string_view raw) {
    last_line = line;
    auto toks = split_tokens(raw);
    if (toks.empty() || toks[0].front() == 'c')
      return true;
    if (toks[0] == "%")
      return false;
    if (toks[0] == "p") {
      if (have_header)
        throw ParseError(line, "duplicate header");
      f.num_vars = parse_header(toks, "cnf", line).num_vars;
      have_header = true;
      return true;
    }
    if (!have_header)
      throw ParseError(line, "clause before header");
    for (auto tok : toks) {
      auto v = parse_int(tok, line);
      if (pending.empty())
        pending_line = line;
      if (v == 0) {
        check_literals(pending, f.num_vars, pending_line);
        f.add(Constraint::clause(std::move(pending)));
        pending.clear();
        continue;
      }
      pending.push_back(Literal::from_signed(to_literal_int(v, line)));
    }
    return true;
  });
  if (!have_header)
    throw ParseError(last_line, "missing 'p cnf' header");
  if (!pending.empty())
    throw ParseError(pending_line, "clause not terminated by 0");
  return f;
}

Formula parse_wcnf(std::string_view text) {
  struct Row {
    bool hard;
    double weight;
    std::vector<Literal> lits;
    int line;
  };
  std::vector<Row> rows;
  bool have_header = false;
  Header header;
  int header_line = 0;
  int last_line = 0;
  bool saw_h = false;
  for_each_line(text, [&](int line, std::string_view raw) {
    last_line = line;
    auto toks = split_tokens(raw);
    if (toks.empty() || toks[0] == "c")
      return true;
    if (toks[0] == "p") {
      if (have_header)
        throw ParseError(line, "duplicate header");
      header = parse_header(toks, "wcnf", line);
      have_header = true;
      header_line = line;
      return true;
    }
    std::span<const std::string_view> rest(toks);
    if (toks[0] == "h") {
      saw_h = true;
      rows.push_back({true, 0.0, read_literals(rest.subspan(1), line), line});
      return true;
    }
    double w = parse_real(toks[0], line);
    if (!(w > 0.0))
      throw ParseError(line, "nonpositive weight");
    rows.push_back({false, w, read_literals(rest.subspan(1), line), line});
    return true;
  });

  if (have_header && !header.has_top && !saw_h)
    throw ParseError(header_line, "missing top in 'p wcnf' header");
  if (have_header && header.has_top && saw_h)
    throw ParseError(header_line, "'h' lines cannot be mixed with a top weight");

  Formula f;
  if (have_header) {
    f.num_vars = header.num_vars;
  } else {
    for (const auto &r : rows)
      for (const auto &l : r.lits)
        f.num_vars = std::max(f.num_vars, l.var);
  }
  for (auto &r : rows) {
    check_literals(r.lits, f.num_vars, r.line);
    bool hard = r.hard || (header.has_top && r.weight >= header.top);
    f.add(Constraint::clause(std::move(r.lits)), !hard, hard ? 1.0 : r.weight);
  }
  (void)last_line;
  return f;
}

std::string to_hybrid(const Formula &f) {
  std::ostringstream os;
  os << "p hbf " << f.num_vars << ' ' << f.size() << '\n';
  for (const auto &c : f.constraints) {
    switch (c.kind) {
    case ConstraintKind::Clause:
      break;
    case ConstraintKind::Xor:
      os << "x ";
      break;
    case ConstraintKind::Nae:
      os << "n ";
      break;
    case ConstraintKind::Card:
      os << "d " << to_string(c.comparator) << ' ' << c.threshold << ' ';
      break;
    case ConstraintKind::Pb:
      os << "b " << to_string(c.comparator) << ' ' << c.threshold << ' ';
      break;
    }
    for (std::size_t i = 0; i < c.literals.size(); ++i) {
      if (c.kind == ConstraintKind::Pb)
        os << c.coefficients[i] << ' ';
      os << c.literals[i].to_signed() << ' ';
    }
    os << "0\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Semantics

int count_true(std::span<const Literal> lits, const Assignment &b) {
  int k = 0;
  for (const auto &l : lits) {
    bool var_true = b[static_cast<std::size_t>(l.var - 1)] < 0;
    k += var_true != l.negated ? 1 : 0;
  }
  return k;
}

bool check_constraint(const Constraint &c, const Assignment &b) {
  const int n = static_cast<int>(c.literals.size());
  switch (c.kind) {
  case ConstraintKind::Clause:
    return count_true(c.literals, b) >= 1;
  case ConstraintKind::Xor:
    return count_true(c.literals, b) % 2 == 1;
  case ConstraintKind::Nae: {
    int k = count_true(c.literals, b);
    return k > 0 && k < n;
  }
  case ConstraintKind::Card:
    return compare(count_true(c.literals, b), c.comparator, c.threshold);
  case ConstraintKind::Pb: {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < c.literals.size(); ++i) {
      const auto &l = c.literals[i];
      bool var_true = b[static_cast<std::size_t>(l.var - 1)] < 0;
      if (var_true != l.negated)
        sum += c.coefficients[i];
    }
    return compare(sum, c.comparator, c.threshold);
  }
  }
  return false;
}

CheckResult check_formula(const Formula &f, const Assignment &b, std::span<const double> weights) {
  CheckResult r;
  for (const auto &c : f.constraints) {
    if (check_constraint(c, b))
      r.satisfied_weight += weights[static_cast<std::size_t>(c.id)];
    else
      r.unsatisfied.push_back(c.id);
  }
  return r;
}

int constraint_length(const Constraint &c) { return static_cast<int>(c.literals.size()); }

MaxSatCost maxsat_cost(const Formula &f, const Assignment &b) {
  MaxSatCost cost;
  for (const auto &c : f.constraints) {
    if (check_constraint(c, b))
      continue;
    auto i = static_cast<std::size_t>(c.id);
    if (f.soft[i])
      cost.soft_cost += f.soft_weights[i];
    else
      ++cost.hard_violations;
  }
  return cost;
}

} // namespace bddcls
