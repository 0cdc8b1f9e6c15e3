#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bddcls/formula.hpp"

namespace bddcls {

enum class Family { CnfXor, XorCard, Cards, Pbs };
enum class CoefMode { PerOccurrence, PerVariable };

const char *to_string(Family f);
Family parse_family(const std::string &s);

struct GenSpec {
  Family family = Family::Cards;
  int n = 50;
  double r_c = 0.0; // clauses per variable
  double r_x = 0.0; // XORs per variable
  double r_p = 0.0; // cardinality / PB constraints per variable
  double delta = 0.2;
  double r_v = 0.2; // fraction of variables per cardinality / PB constraint
  int clause_len = 3;
  CoefMode coef_mode = CoefMode::PerOccurrence;
  int count = 1;
  std::uint64_t seed = 0;
  bool plant = false;

  /// Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
};

struct Instance {
  Formula formula;
  std::optional<Assignment> hidden; // planted solution
  std::uint64_t seed = 0;
};

/// Instance idx of a batch; its seed is derived from (spec.seed, idx).
Instance generate(const GenSpec &spec, int idx = 0);

Formula gen_cnf_xor(const GenSpec &spec, std::uint64_t seed, Assignment *hidden = nullptr);
Formula gen_xor_card(const GenSpec &spec, std::uint64_t seed, Assignment *hidden = nullptr);
Formula gen_cards(const GenSpec &spec, std::uint64_t seed, Assignment *hidden = nullptr);
Formula gen_pbs(const GenSpec &spec, std::uint64_t seed, Assignment *hidden = nullptr);

/// "<family>_n<k>_<params>_<idx>.hbf"
std::string instance_file_name(const GenSpec &spec, int idx);

/// The full parameter grid of one family (count = 10 per grid point).
std::vector<GenSpec> appendix_grid(Family family);

} // namespace bddcls
