"""Lasso programs: data model, input format and execution."""

from .execution import ExecutionResult, adheres, execute, symbolic_execute
from .model import (
    DETERMINISTIC, GENERAL, DeterministicView, LassoProgram, SynthesisProblem, TestCase,
    Transition, Update, classify_transition,
)
from .parser import format_problem, parse_file, parse_polynomial, parse_program, parse_valuation

__all__ = [
    "DETERMINISTIC", "GENERAL", "DeterministicView", "ExecutionResult", "LassoProgram",
    "SynthesisProblem", "TestCase", "Transition", "Update", "adheres", "classify_transition",
    "execute", "format_problem", "parse_file", "parse_polynomial", "parse_program",
    "parse_valuation", "symbolic_execute",
]
