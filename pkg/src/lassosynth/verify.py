"""Exact certification of invariants and synthesized programs.

Nothing here calls the solver: invariants are certified by ideal reasoning
(stem membership plus a polynomial consecution witness) and programs by
exact simulation of their test cases.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .conditions import consecution_residue, denominator_product, exit_factor
from .errors import IncompleteModelError, LassoError
from .groebner import buchberger, normal_form, transition_basis
from .polyring import MonomialOrder, Poly, divide, prime
from .program.execution import adheres
from .program.model import LassoProgram, SynthesisProblem
from .template import TemplateSpec


@dataclass
class Consecution:
    transition: str
    ok: bool
    exponent: int
    residue: Poly
    witness: Poly | None

    def to_dict(self) -> dict:
        return {"transition": self.transition, "ok": self.ok, "exponent": self.exponent,
                "witness": None if self.witness is None else str(self.witness)}


@dataclass
class InvariantReport:
    invariant: Poly
    stem_ok: bool
    consecution: list[Consecution]

    @property
    def ok(self) -> bool:
        return self.stem_ok and all(c.ok for c in self.consecution)

    def witnesses(self) -> dict[str, Poly | None]:
        return {c.transition: c.witness for c in self.consecution}

    def to_dict(self) -> dict:
        return {"invariant": str(self.invariant), "ok": self.ok, "stem_ok": self.stem_ok,
                "consecution": [c.to_dict() for c in self.consecution]}


def _consecution(lasso: LassoProgram, p: Poly, t, exponent: int) -> Consecution:
    r = consecution_residue(t, lasso, p, exponent)
    quotients, rem = divide(r, [p], lasso.order)
    ok = rem.is_zero()
    return Consecution(t.name, ok, exponent, r, quotients[0] if ok else None)


def check_invariant(lasso: LassoProgram, p: Poly, exponent: int | None = None) -> InvariantReport:
    """Certify ``p = 0`` as an invariant of the parameter-free ``lasso``.

    The denominator power defaults to ``deg p``; if that fails for a
    transition and ``exponent`` is given, that power is tried as well
    (a template of declared degree d uses q^d).
    """
    if p.is_zero():
        raise LassoError("the zero polynomial is not a useful invariant")
    if not lasso.is_parameter_free:
        raise LassoError("check_invariant needs a parameter-free lasso")
    extra = p.variables() - set(lasso.vars)
    if extra:
        raise LassoError(f"invariant mentions non-program symbols {sorted(extra)}")
    stem_ok = normal_form(p, buchberger(list(lasso.stem), lasso.order)).is_zero()
    results = []
    for t in lasso.transitions:
        c = _consecution(lasso, p, t, p.degree())
        if not c.ok and exponent is not None and exponent != p.degree():
            c = _consecution(lasso, p, t, exponent)
        results.append(c)
    return InvariantReport(p, stem_ok, results)


def check_post(p: Poly, exit: Sequence[Poly], post: Sequence[Poly],
               variables: Sequence[str] | None = None) -> bool:
    """Whether ``p = 0 ∧ exit`` entails every post generator (ideal membership)."""
    gens = [p, *exit]
    if variables is None:
        names = set()
        for g in gens + list(post):
            names |= g.variables()
        variables = sorted(names)
    basis = buchberger(gens, MonomialOrder(tuple(variables)))
    return all(normal_form(g, basis).is_zero() for g in post)


# ---------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    ok: bool | None      # None: not decided here
    detail: str = ""

    def to_dict(self) -> dict:
        return {"check": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class SolutionReport:
    problem: str
    checks: list[Check] = field(default_factory=list)
    invariant: Poly | None = None
    program: LassoProgram | None = None
    witnesses: dict[str, Poly | None] = field(default_factory=dict)
    runs: list = field(default_factory=list)
    algebraic: bool = False

    @property
    def ok(self) -> bool:
        return not self.algebraic and bool(self.checks) and all(c.ok for c in self.checks)

    @property
    def status(self) -> str:
        if self.algebraic:
            return "solver-certified only"
        return "certified" if self.ok else "certification failed"

    def render(self) -> str:
        lines = [f"{self.problem}: {self.status}"]
        if self.invariant is not None:
            lines.append(f"  invariant: {self.invariant} = 0")
        for name, w in self.witnesses.items():
            if w is not None:
                lines.append(f"  witness {name}: {w}")
        for c in self.checks:
            mark = {True: "PASS", False: "FAIL", None: "----"}[c.ok]
            lines.append(f"  [{mark}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "problem": self.problem, "status": self.status, "ok": self.ok,
            "invariant": None if self.invariant is None else str(self.invariant),
            "witnesses": {k: None if v is None else str(v) for k, v in self.witnesses.items()},
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _rational_part(model: Mapping[str, object], names: Sequence[str]) -> tuple[dict, list[str]]:
    values, irrational = {}, []
    for n in names:
        if n not in model:
            continue
        v = model[n]
        if isinstance(v, (int, Fraction)):
            values[n] = Fraction(v)
        else:
            irrational.append(n)
    return values, irrational


def check_solution(problem: SynthesisProblem, model: Mapping[str, object],
                   spec: TemplateSpec) -> SolutionReport:
    """Instantiate the program and invariant from ``model`` and certify both."""
    report = SolutionReport(problem.name)
    needed = list(problem.synth_vars) + list(spec.coeff_vars)
    missing = [n for n in needed if n not in model]
    if missing:
        raise IncompleteModelError(f"model lacks {', '.join(missing)}")
    values, irrational = _rational_part(model, needed)
    if irrational:
        report.algebraic = True
        report.checks.append(Check(
            "exact certification", None,
            f"irrational values for {', '.join(irrational)}; rely on the solver recheck"))
        return report

    lasso = problem.instantiate(values)
    psi = spec.polynomial.substitute(values)
    report.program = lasso
    report.invariant = psi
    if psi.is_zero():
        report.checks.append(Check("invariant", False, "instantiated template is zero"))
    else:
        inv = check_invariant(lasso, psi, exponent=spec.degree)
        report.witnesses = inv.witnesses()
        report.checks.append(Check("stem", inv.stem_ok))
        for c in inv.consecution:
            report.checks.append(Check(
                f"consecution({c.transition})", c.ok,
                "" if c.ok else "residue is not a polynomial multiple of the invariant"))
        if problem.post:
            ok = check_post(psi, lasso.exit, problem.post, lasso.vars)
            report.checks.append(Check("post", ok, "" if ok else "exit and invariant do not entail post"))
    for j, tc in enumerate(problem.testcases):
        ok, run, detail = adheres(lasso, tc)
        report.runs.append(run)
        report.checks.append(Check(f"testcase({j})", ok, detail))
    return report


def witness_identity(lasso: LassoProgram, p: Poly, t, witness: Poly, exponent: int) -> bool:
    """``q^e * s * p(V') - witness * p`` lies in the transition's ideal."""
    lhs = denominator_product(t) ** exponent * exit_factor(lasso) * p.rename(
        {v: prime(v) for v in lasso.vars})
    return normal_form(lhs - witness * p, transition_basis(t, lasso.order)).is_zero()
