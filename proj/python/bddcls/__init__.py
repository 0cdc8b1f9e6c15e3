"""Continuous local search for hybrid SAT and MaxSAT over shared BDDs."""

from ._core import (
    Formula,
    MrBdd,
    ParseError,
    build_formula,
    check_formula,
    generate,
    incomplete_score,
    parse_dimacs_cnf,
    parse_hybrid,
    parse_wcnf,
    selfcheck,
    solve,
)

__all__ = [
    "Formula",
    "MrBdd",
    "ParseError",
    "build_formula",
    "check_formula",
    "generate",
    "incomplete_score",
    "parse_dimacs_cnf",
    "parse_hybrid",
    "parse_wcnf",
    "selfcheck",
    "solve",
]
