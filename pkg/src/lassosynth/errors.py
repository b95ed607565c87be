"""Exception hierarchy shared by every layer of the toolkit."""

from __future__ import annotations


class LassoError(Exception):
    """Base class for all errors raised by lassosynth."""


class UnknownVariableError(LassoError):
    """A monomial mentions a variable that has no precedence in the order."""


class ParametricCoefficientError(LassoError):
    """A divisor's leading coefficient is not a nonzero rational.

    Raised when Gröbner machinery would have to divide by a polynomial in the
    unknowns, which would require a case split on that polynomial vanishing.
    """


class ResidualPrimedError(LassoError):
    """Division by a transition left next-state variables behind."""


class DSLSyntaxError(LassoError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class ProgramError(LassoError):
    """A structurally invalid lasso program or synthesis problem."""


class ExecutionError(LassoError):
    def __init__(self, message: str, step: int):
        self.step = step
        super().__init__(f"step {step}: {message}")


class DivisionByZeroError(ExecutionError):
    pass


class GuardViolationError(ExecutionError):
    pass


class NonDeterministicError(LassoError):
    """An operation that needs a deterministic transition got a general one."""


class SolverError(LassoError):
    """The external solver crashed, is missing, or produced unparsable output."""


class IncompleteModelError(LassoError):
    """A model does not assign every unknown the operation needs."""
