#pragma once

#include <span>
#include <vector>

#include "bddcls/engine.hpp"
#include "bddcls/formula.hpp"

// Enumeration-based reference computations. They never touch a BDD, so they
// serve as independent checks of the message-passing engine. All of them
// are exponential in the number of variables involved.
namespace bddcls::oracle {

inline constexpr int kMaxVars = 20;

/// Direct summation of Pr[c True] with variable i True w.p. p[i-1].
double brute_cop(const Constraint &c, std::span<const double> p);

/// Walsh-Fourier coefficient of c at the variable set S (1-based indices).
double wf_coefficient(const Constraint &c, std::span<const int> vars);

/// The Walsh-Fourier polynomial of c evaluated at the real point a.
double wfe_eval(const Constraint &c, std::span<const double> a);

/// sum_c w(c) * wfe_eval(c, a).
double wfe_objective(const Formula &f, const WeightMap &w, std::span<const double> a);

/// E_{b ~ S_a}[satisfied weight of b] by enumerating all 2^n vertices.
double rounding_expectation(const Formula &f, const WeightMap &w, std::span<const double> a);

/// Maximum satisfied weight over all vertices, and a vertex achieving it.
double max_satisfied_weight(const Formula &f, std::span<const double> w, Assignment *argmax = nullptr);

/// Minimum soft cost among hard-feasible vertices; +inf when none exists.
double min_maxsat_cost(const Formula &f, Assignment *argmin = nullptr);

} // namespace bddcls::oracle
