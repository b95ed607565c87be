"""Lasso programs, synthesis problems and test cases."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from ..errors import ProgramError
from ..polyring import MonomialOrder, Poly, is_primed, prime, unprime

Valuation = Mapping[str, Fraction]


@dataclass(frozen=True)
class Update:
    """The update ``target' * denominator - numerator = 0``."""

    target: str
    numerator: Poly
    denominator: Poly

    @property
    def generator(self) -> Poly:
        return Poly.var(prime(self.target)) * self.denominator - self.numerator


@dataclass(frozen=True)
class DeterministicView:
    guards: tuple[Poly, ...]
    updates: tuple[Update, ...]

    def update_for(self, name: str) -> Update:
        for u in self.updates:
            if u.target == name:
                return u
        raise KeyError(name)

    @property
    def denominators(self) -> tuple[Poly, ...]:
        return tuple(u.denominator for u in self.updates)


@dataclass(frozen=True)
class Transition:
    name: str
    generators: tuple[Poly, ...]
    deterministic_view: DeterministicView | None = None

    @property
    def is_deterministic(self) -> bool:
        return self.deterministic_view is not None

    def substitute(self, bindings: Mapping[str, Poly | Fraction]) -> Transition:
        view = self.deterministic_view
        if view is not None:
            view = DeterministicView(
                tuple(g.substitute(bindings) for g in view.guards),
                tuple(Update(u.target, u.numerator.substitute(bindings),
                             u.denominator.substitute(bindings)) for u in view.updates))
        return Transition(self.name, tuple(g.substitute(bindings) for g in self.generators), view)


@dataclass(frozen=True)
class LassoProgram:
    vars: tuple[str, ...]
    stem: tuple[Poly, ...]
    transitions: tuple[Transition, ...]
    exit: tuple[Poly, ...] = ()

    def __post_init__(self):
        if not self.transitions:
            raise ProgramError("a lasso program needs at least one transition")
        names = [t.name for t in self.transitions]
        if len(set(names)) != len(names):
            raise ProgramError("duplicate transition name")
        for label, gens in (("stem", self.stem), ("exit", self.exit)):
            for g in gens:
                if any(is_primed(v) for v in g.variables()):
                    raise ProgramError(f"{label} mentions a next-state variable: {g}")

    @property
    def order(self) -> MonomialOrder:
        """Prime-first lexicographic order following declaration order."""
        return MonomialOrder.prime_first(self.vars)

    @property
    def symbols(self) -> frozenset[str]:
        return frozenset(self.vars) | frozenset(prime(v) for v in self.vars)

    def transition(self, name: str) -> Transition:
        for t in self.transitions:
            if t.name == name:
                return t
        raise KeyError(f"no transition named {name!r}")

    def parameters(self) -> frozenset[str]:
        """Symbols other than program variables that occur in the lasso."""
        occurring: set[str] = set()
        for g in self.stem + self.exit:
            occurring |= g.variables()
        for t in self.transitions:
            for g in t.generators:
                occurring |= g.variables()
        return frozenset(occurring - self.symbols)

    @property
    def is_parameter_free(self) -> bool:
        return not self.parameters()

    def substitute(self, bindings: Mapping[str, Poly | Fraction]) -> LassoProgram:
        return LassoProgram(
            self.vars,
            tuple(g.substitute(bindings) for g in self.stem),
            tuple(t.substitute(bindings) for t in self.transitions),
            tuple(g.substitute(bindings) for g in self.exit))


@dataclass(frozen=True)
class TestCase:
    """Initial state, expected final state and the transitions taken."""

    init: Mapping[str, Fraction]
    final: Mapping[str, Fraction]
    path: tuple[str, ...]

    __test__ = False  # not a pytest class


@dataclass(frozen=True)
class SynthesisProblem:
    name: str
    lasso: LassoProgram
    synth_vars: tuple[str, ...] = ()
    post: tuple[Poly, ...] = ()
    testcases: tuple[TestCase, ...] = ()
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        symbols = self.lasso.symbols
        undeclared = self.lasso.parameters() - set(self.synth_vars)
        if undeclared:
            raise ProgramError(f"undeclared symbols in lasso: {', '.join(sorted(undeclared))}")
        for p in self.post:
            extra = p.variables() - frozenset(self.lasso.vars)
            if extra:
                raise ProgramError(f"post condition must be over program variables: {p}")
        if set(self.synth_vars) & symbols:
            raise ProgramError("a synthesis variable shadows a program variable")
        names = {t.name for t in self.lasso.transitions}
        for tc in self.testcases:
            for step in tc.path:
                if step not in names:
                    raise ProgramError(f"test case uses unknown transition {step!r}")

    @property
    def vars(self) -> tuple[str, ...]:
        return self.lasso.vars

    def instantiate(self, values: Mapping[str, Fraction]) -> LassoProgram:
        """The lasso with synthesis variables replaced by ``values``."""
        missing = [c for c in self.synth_vars if c not in values]
        if missing:
            raise ProgramError(f"no value for synthesis variables {', '.join(missing)}")
        return self.lasso.substitute({c: Poly.const(values[c]) for c in self.synth_vars})


# -- classification ----------------------------------------------------------

DETERMINISTIC = "deterministic"
GENERAL = "general"


def _as_update(g: Poly, primed: str) -> Update | None:
    """Read ``g`` as ``primed * den - num`` with ``den`` and ``num`` primed-free."""
    coeffs = g.coefficients_in([primed])
    if set(coeffs) - {(), ((primed, 1),)}:
        return None
    den = coeffs.get(((primed, 1),))
    if den is None:
        return None
    num = -coeffs.get((), Poly())
    if any(is_primed(v) for v in den.variables() | num.variables()):
        return None
    if den.is_constant():
        c = den.constant_value()
        num, den = num.scale(1 / c), Poly.const(1)
    return Update(unprime(primed), num, den)


def classify_transition(t: Transition, variables: Sequence[str],
                        exit: Sequence[Poly] = ()) -> tuple[str, DeterministicView | None, list[str]]:
    """Decide whether ``t`` has the deterministic shape.

    Returns ``(kind, view, warnings)``.  The semantic requirement that every
    denominator is nonzero outside the exit condition is approximated: a
    constant denominator or a rational multiple of a single exit generator is
    accepted, anything else produces a warning.
    """
    guards: list[Poly] = []
    updates: dict[str, Update] = {}
    for g in t.generators:
        primed_vars = [v for v in g.variables() if is_primed(v)]
        if not primed_vars:
            guards.append(g)
            continue
        if len(primed_vars) != 1:
            return GENERAL, None, []
        (pv,) = primed_vars
        target = unprime(pv)
        u = _as_update(g, pv)
        if u is None or target in updates:
            return GENERAL, None, []
        updates[target] = u
    if set(updates) != set(variables):
        return GENERAL, None, []
    warnings = []
    for u in updates.values():
        if u.denominator.is_constant():
            continue
        if not _multiple_of_exit(u.denominator, exit):
            warnings.append(
                f"transition {t.name}: cannot show denominator {u.denominator} "
                f"is nonzero outside the exit condition")
    view = DeterministicView(
        tuple(sorted(guards, key=str)),
        tuple(updates[v] for v in variables))
    return DETERMINISTIC, view, warnings


def _multiple_of_exit(g: Poly, exit: Sequence[Poly]) -> bool:
    if len(exit) != 1 or exit[0].is_zero():
        return False
    (s,) = exit
    m, c = next(iter(s.items()))
    k = g.coefficient(m) / c
    return bool(k) and g == s.scale(k)
