"""Concrete runs of deterministic lassos and their symbolic counterpart."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from ..constraints import STATE, ConstraintSystem
from ..errors import (
    DivisionByZeroError, GuardViolationError, NonDeterministicError, ProgramError,
)
from ..polyring import Poly
from .model import LassoProgram, SynthesisProblem, TestCase


@dataclass
class ExecutionResult:
    states: list[dict[str, Fraction]]
    stem_ok: bool
    exit_flags: list[bool]
    exit_empty: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def final(self) -> dict[str, Fraction]:
        return self.states[-1]

    @property
    def valid(self) -> bool:
        """Stem holds initially, exit holds exactly at the last state.

        With an empty exit condition every state satisfies exit, so only the
        stem is checked (see ``notes``).
        """
        if not self.stem_ok:
            return False
        if self.exit_empty:
            return True
        return self.exit_flags[-1] and not any(self.exit_flags[:-1])


def _holds(gens: Sequence[Poly], state: Mapping[str, Fraction]) -> bool:
    return all(g.evaluate(state) == 0 for g in gens)


def execute(lasso: LassoProgram, init: Mapping[str, Fraction], path: Sequence[str]) -> ExecutionResult:
    if not lasso.is_parameter_free:
        raise ProgramError("cannot simulate a parametric program")
    missing = [v for v in lasso.vars if v not in init]
    if missing:
        raise ProgramError(f"initial state lacks {', '.join(missing)}")
    state = {v: Fraction(init[v]) for v in lasso.vars}
    states = [state]
    for step, name in enumerate(path, start=1):
        t = lasso.transition(name)
        view = t.deterministic_view
        if view is None:
            raise NonDeterministicError(f"transition {name} is not deterministic")
        for h in view.guards:
            if h.evaluate(state) != 0:
                raise GuardViolationError(f"guard {h} = 0 of {name} fails", step)
        nxt = {}
        for u in view.updates:
            den = u.denominator.evaluate(state)
            if den == 0:
                raise DivisionByZeroError(f"denominator {u.denominator} of {name} vanishes", step)
            nxt[u.target] = u.numerator.evaluate(state) / den
        state = nxt
        states.append(state)
    notes = []
    if not lasso.exit:
        notes.append("exit condition is empty; termination behaviour not checked")
    return ExecutionResult(
        states=states,
        stem_ok=_holds(lasso.stem, states[0]),
        exit_flags=[_holds(lasso.exit, s) for s in states],
        exit_empty=not lasso.exit,
        notes=notes)


def adheres(lasso: LassoProgram, tc: TestCase) -> tuple[bool, ExecutionResult | None, str]:
    """Whether the parameter-free ``lasso`` reproduces ``tc``."""
    try:
        run = execute(lasso, tc.init, tc.path)
    except (DivisionByZeroError, GuardViolationError) as e:
        return False, None, str(e)
    wrong = [v for v, val in tc.final.items() if run.final[v] != val]
    if wrong:
        got = ", ".join(f"{v}={run.final[v]}" for v in wrong)
        return False, run, f"final state differs: {got}"
    if not run.valid:
        return False, run, "not an execution (stem or exit pattern violated)"
    return True, run, "ok"


def state_name(case: int, step: int, var: str) -> str:
    return f"w{case}_{step}_{var}"


def symbolic_execute(problem: SynthesisProblem, tc: TestCase, index: int = 0) -> ConstraintSystem:
    """Constraints over the synthesis variables forcing ``tc`` to be a run.

    Intermediate states (and unspecified final values) become fresh unknowns,
    so every constraint stays polynomial.
    """
    lasso = problem.lasso
    k = len(tc.path)
    cs = ConstraintSystem()
    states: list[dict[str, Poly]] = [{v: Poly.const(tc.init[v]) for v in lasso.vars}]
    for i in range(1, k + 1):
        state = {}
        for v in lasso.vars:
            if i == k and v in tc.final:
                state[v] = Poly.const(tc.final[v])
            else:
                name = state_name(index, i, v)
                cs.declare([name], STATE)
                state[v] = Poly.var(name)
        states.append(state)

    tag = f"testcase({index},0)"
    for g in lasso.stem:
        cs.add_equality(g.substitute(states[0]), tag)
    for i, name in enumerate(tc.path, start=1):
        view = lasso.transition(name).deterministic_view
        if view is None:
            raise NonDeterministicError(f"transition {name} on a test-case path is not deterministic")
        pre, post = states[i - 1], states[i]
        tag = f"testcase({index},{i})"
        for h in view.guards:
            cs.add_equality(h.substitute(pre), tag)
        for u in view.updates:
            cs.add_equality(post[u.target] * u.denominator.substitute(pre)
                            - u.numerator.substitute(pre), tag)
        # division is only meaningful where the denominator is nonzero
        for u in view.updates:
            if not u.denominator.is_constant():
                cs.add_disequality([u.denominator.substitute(pre)], tag)
    if not lasso.exit:
        cs.warnings.append(f"test case {index}: exit condition is empty, "
                           "non-termination constraints skipped")
        return cs
    for i in range(k):
        cs.add_disequality([g.substitute(states[i]) for g in lasso.exit], f"testcase({index},{i})")
    for g in lasso.exit:
        cs.add_equality(g.substitute(states[k]), f"testcase({index},{k})")
    return cs
