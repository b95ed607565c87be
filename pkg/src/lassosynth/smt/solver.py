"""Running an external SMT solver and reading its models."""

from __future__ import annotations

import os
import shlex
import subprocess
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

import numpy as np

from ..constraints import ConstraintSystem
from ..errors import IncompleteModelError, SolverError
from .emit import emit_smtlib, numeral
from .sexpr import NotRational, parse_all, rational_value, to_text

SAT, UNSAT, UNKNOWN = "sat", "unsat", "unknown"
ENV_SOLVER = "LASSOSYNTH_SOLVER"


@dataclass(frozen=True)
class SolverConfig:
    command: tuple[str, ...] = ("z3", "-in")
    timeout: float = 600.0
    logic: str = "QF_NRA"
    seed: int | None = None

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if not self.command:
            raise ValueError("empty solver command")

    @classmethod
    def from_env(cls, command: str | None = None, **kwargs) -> SolverConfig:
        """Command from the argument, else ``$LASSOSYNTH_SOLVER``, else ``z3 -in``."""
        text = command or os.environ.get(ENV_SOLVER)
        if text:
            kwargs["command"] = tuple(shlex.split(text))
        return cls(**kwargs)


@dataclass(frozen=True)
class AlgebraicTerm:
    """A solver value that is not rational, kept verbatim (e.g. ``root-obj``)."""

    text: str

    def approximate(self) -> float:
        """Floating-point value for display only."""
        return _approx(parse_all(self.text)[0])

    def __str__(self) -> str:
        return self.text


Value = Union[Fraction, AlgebraicTerm]


def value_term(v: Value) -> str:
    return v.text if isinstance(v, AlgebraicTerm) else numeral(v)


def _approx(e) -> float:
    if isinstance(e, str):
        return float(Fraction(e))
    head, args = e[0], e[1:]
    if head == "root-obj":
        coeffs = _univariate(args[0])
        roots = np.roots(coeffs[::-1])
        real = sorted(r.real for r in roots if abs(r.imag) < 1e-9)
        return real[int(args[1]) - 1]
    vals = [_approx(a) for a in args]
    if head == "+":
        return sum(vals)
    if head == "-":
        return -vals[0] if len(vals) == 1 else vals[0] - sum(vals[1:])
    if head == "*":
        return float(np.prod(vals))
    if head == "/":
        out = vals[0]
        for v in vals[1:]:
            out /= v
        return out
    raise SolverError(f"cannot approximate {to_text(e)}")


def _univariate(e) -> list[float]:
    """Coefficients (constant first) of a root-obj polynomial in ``x``."""
    if isinstance(e, str):
        if e == "x":
            return [0.0, 1.0]
        return [float(Fraction(e))]
    head, args = e[0], e[1:]
    if head == "^":
        base = _univariate(args[0])
        out = [1.0]
        for _ in range(int(args[1])):
            out = list(np.polynomial.polynomial.polymul(out, base))
        return out
    polys = [_univariate(a) for a in args]
    P = np.polynomial.polynomial
    if head == "+":
        out = [0.0]
        for p in polys:
            out = list(P.polyadd(out, p))
        return out
    if head == "-":
        if len(polys) == 1:
            return [-c for c in polys[0]]
        out = polys[0]
        for p in polys[1:]:
            out = list(P.polysub(out, p))
        return out
    if head == "*":
        out = [1.0]
        for p in polys:
            out = list(P.polymul(out, p))
        return out
    if head == "/" and len(polys) == 2 and len(polys[1]) == 1:
        return [c / polys[1][0] for c in polys[0]]
    raise SolverError(f"unexpected root-obj polynomial {to_text(e)}")


@dataclass
class SolverModel:
    values: dict[str, Value]
    completed: tuple[str, ...] = ()    # unknowns the solver left out, set to 0

    @property
    def is_rational(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.values.values())

    def rational(self) -> dict[str, Fraction]:
        bad = [n for n, v in self.values.items() if not isinstance(v, Fraction)]
        if bad:
            raise IncompleteModelError(f"irrational values for {', '.join(bad)}")
        return dict(self.values)

    def __getitem__(self, name: str) -> Value:
        return self.values[name]

    def __contains__(self, name: str) -> bool:
        return name in self.values

    def keys(self):
        return self.values.keys()

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def render(self) -> str:
        lines = []
        for n, v in self.values.items():
            if isinstance(v, AlgebraicTerm):
                lines.append(f"{n} = {v.text}  (approx. {v.approximate():.6g})")
            else:
                lines.append(f"{n} = {v}")
        return "\n".join(lines)

    def to_dict(self) -> dict[str, str]:
        return {n: str(v) for n, v in self.values.items()}


@dataclass
class SolveResult:
    status: str
    model: SolverModel | None = None
    reason: str = ""
    query: str = field(default="", repr=False)


def parse_model(text: str, unknowns) -> SolverModel:
    """Read a ``(get-model)`` answer; missing unknowns are completed with 0."""
    exprs = parse_all(text)
    if len(exprs) != 1 or not isinstance(exprs[0], list):
        raise SolverError("malformed model")
    body = exprs[0]
    if body and body[0] == "model":
        body = body[1:]
    values: dict[str, Value] = {}
    for d in body:
        if not (isinstance(d, list) and len(d) == 5 and d[0] == "define-fun"):
            raise SolverError(f"unexpected model entry {to_text(d)[:60]}")
        _, name, params, sort, val = d
        if params != [] or sort != "Real":
            continue
        name = name.strip("|")
        try:
            values[name] = rational_value(val)
        except NotRational:
            values[name] = AlgebraicTerm(to_text(val))
    completed = tuple(u for u in unknowns if u not in values)
    for u in completed:
        values[u] = Fraction(0)
    ordered = {u: values[u] for u in unknowns}
    ordered.update({k: v for k, v in values.items() if k not in ordered})
    return SolverModel(ordered, completed)


def _split_answer(out: str, returncode: int | None = None, stderr: str = "") -> tuple[str, str]:
    out = out.strip()
    head, _, rest = out.partition("\n")
    head = head.strip()
    if head not in (SAT, UNSAT, UNKNOWN):
        detail = (out or stderr).strip()[:300]
        raise SolverError(f"unexpected solver answer (exit code {returncode}): {detail}")
    if head == SAT and "(error" in rest:
        raise SolverError(f"solver error: {rest.strip()[:300]}")
    return head, rest


def run_solver(text: str, cfg: SolverConfig) -> tuple[str, str]:
    """Feed ``text`` to the solver; returns (status, rest of output) or raises."""
    try:
        proc = subprocess.run(list(cfg.command), input=text, capture_output=True,
                              text=True, timeout=cfg.timeout)
    except FileNotFoundError:
        raise SolverError(f"solver executable not found: {cfg.command[0]}") from None
    except subprocess.TimeoutExpired:
        return UNKNOWN, "timeout"
    return _split_answer(proc.stdout, proc.returncode, proc.stderr)


def parse_answer(output: str, cs: ConstraintSystem, query: str = "") -> SolveResult:
    """Interpret a solver's full answer (``sat`` plus model, ``unsat``, ...)."""
    status, rest = _split_answer(output)
    return _result(status, rest, cs, query)


def _result(status: str, rest: str, cs: ConstraintSystem, query: str) -> SolveResult:
    if status == SAT:
        unknowns = cs.ordered_unknowns()
        model = parse_model(rest, unknowns) if unknowns else SolverModel({})
        return SolveResult(SAT, model, query=query)
    if status == UNKNOWN:
        return SolveResult(UNKNOWN, reason=rest if rest == "timeout" else "solver gave up", query=query)
    return SolveResult(UNSAT, query=query)


def solve(cs: ConstraintSystem, cfg: SolverConfig | None = None) -> SolveResult:
    cfg = cfg or SolverConfig.from_env()
    text = emit_smtlib(cs, cfg.logic, cfg.seed)
    status, rest = run_solver(text, cfg)
    return _result(status, rest, cs, text)


def recheck_model(cs: ConstraintSystem, model: Mapping[str, Value],
                  cfg: SolverConfig | None = None) -> bool:
    """Ask the solver whether the assertions hold with every unknown bound to its value.

    For all-rational models an exact substitution check runs first; the
    two verdicts must agree.
    """
    cfg = cfg or SolverConfig.from_env()
    names = cs.ordered_unknowns()
    missing = [n for n in names if n not in model]
    if missing:
        raise IncompleteModelError(f"model lacks {', '.join(missing)}")
    values = {n: model[n] for n in names}
    exact = None
    if all(isinstance(v, Fraction) for v in values.values()):
        exact = cs.check_exact(values)
    binds = [f"(assert (= {n} {value_term(v)}))" for n, v in values.items()]
    status, _ = run_solver(emit_smtlib(cs, cfg.logic, cfg.seed, binds, get_model=False), cfg)
    if status == UNKNOWN:
        raise SolverError("solver could not decide the model recheck")
    verdict = status == SAT
    if exact is not None and exact != verdict:
        raise SolverError("exact check and solver recheck disagree")
    return verdict
