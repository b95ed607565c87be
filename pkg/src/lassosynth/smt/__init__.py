"""SMT-LIB emission and solver interaction."""

from .emit import emit_smtlib, numeral, term
from .solver import (
    SAT, UNKNOWN, UNSAT, AlgebraicTerm, SolveResult, SolverConfig, SolverModel, parse_answer, parse_model,
    recheck_model, solve,
)

__all__ = [
    "SAT", "UNKNOWN", "UNSAT", "AlgebraicTerm", "SolveResult", "SolverConfig", "SolverModel",
    "emit_smtlib", "numeral", "parse_answer", "parse_model", "recheck_model", "solve", "term",
]
