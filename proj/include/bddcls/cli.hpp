#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bddcls/formula.hpp"

namespace bddcls::cli {

inline constexpr int kExitSat = 10;
inline constexpr int kExitUnknown = 0;
inline constexpr int kExitError = 1;

/// Runs the command line (args excludes the program name).
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Reads a file and parses it as "hbf", "cnf" or "wcnf"; an empty format
/// is inferred from the extension.
Formula load_formula(const std::string &path, std::string format = {});

/// "v" line body for hybrid/CNF output: signed literals terminated by 0.
std::string format_literals(const Assignment &b);
/// "v" line body for MaxSAT output: '1' for True, '0' for False.
std::string format_bits(const Assignment &b);

} // namespace bddcls::cli
