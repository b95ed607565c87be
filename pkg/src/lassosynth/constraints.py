"""Conjunctions of polynomial equalities and disequalities over unknowns."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import IncompleteModelError, LassoError
from .polyring import Poly

# unknown kinds, in emission order
TEMPLATE = "A"       # invariant template coefficients
WITNESS = "B"        # per-transition consecution multipliers
PARAMETER = "C"      # synthesis variables
POST = "D"           # post-condition multipliers
STATE = "W"          # test-case intermediate states

KIND_ORDER = (TEMPLATE, WITNESS, PARAMETER, POST, STATE)


@dataclass(frozen=True)
class Equality:
    poly: Poly
    tag: str

    def holds(self, model: Mapping[str, Fraction]) -> bool:
        return self.poly.evaluate(model) == 0


@dataclass(frozen=True)
class Disequality:
    """At least one of ``polys`` is nonzero; an empty group is false."""

    polys: tuple[Poly, ...]
    tag: str

    def holds(self, model: Mapping[str, Fraction]) -> bool:
        return any(p.evaluate(model) != 0 for p in self.polys)


@dataclass
class ConstraintSystem:
    unknowns: dict[str, str] = field(default_factory=dict)   # name -> kind
    equalities: list[Equality] = field(default_factory=list)
    disequalities: list[Disequality] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    templates: dict[str, Poly] = field(default_factory=dict)
    specs: dict[str, object] = field(default_factory=dict)   # role -> TemplateSpec

    @property
    def psi_spec(self):
        return self.specs.get("psi")

    def declare(self, names: Iterable[str], kind: str) -> None:
        if kind not in KIND_ORDER:
            raise ValueError(f"unknown kind {kind!r}")
        for n in names:
            if self.unknowns.setdefault(n, kind) != kind:
                raise LassoError(f"unknown {n} declared with two kinds")

    def add_equality(self, poly: Poly, tag: str) -> None:
        if not poly.is_zero():
            self.equalities.append(Equality(poly, tag))

    def add_disequality(self, polys: Iterable[Poly], tag: str) -> None:
        self.disequalities.append(Disequality(tuple(p for p in polys if not p.is_zero()), tag))

    def merge(self, other: ConstraintSystem) -> ConstraintSystem:
        for name, kind in other.unknowns.items():
            self.declare([name], kind)
        self.equalities += other.equalities
        self.disequalities += other.disequalities
        self.warnings += [w for w in other.warnings if w not in self.warnings]
        self.templates.update(other.templates)
        for role, spec in other.specs.items():
            self.specs.setdefault(role, spec)
        return self

    def ordered_unknowns(self) -> list[str]:
        rank = {k: i for i, k in enumerate(KIND_ORDER)}
        names = list(self.unknowns)
        return sorted(names, key=lambda n: (rank[self.unknowns[n]], names.index(n)))

    def of_kind(self, *kinds: str) -> list[str]:
        return [n for n in self.ordered_unknowns() if self.unknowns[n] in kinds]

    def __len__(self) -> int:
        return len(self.equalities) + len(self.disequalities)

    def occurring(self) -> frozenset[str]:
        out: set[str] = set()
        for e in self.equalities:
            out |= e.poly.variables()
        for d in self.disequalities:
            for p in d.polys:
                out |= p.variables()
        return frozenset(out)

    def check_no_program_vars(self, symbols: Iterable[str]) -> None:
        leaked = self.occurring() & frozenset(symbols)
        if leaked:
            raise LassoError(f"program variables left in constraints: {', '.join(sorted(leaked))}")

    def violations(self, model: Mapping[str, Fraction]) -> list[Equality | Disequality]:
        missing = self.occurring() - set(model)
        if missing:
            raise IncompleteModelError(f"no value for {', '.join(sorted(missing))}")
        bad: list[Equality | Disequality] = [e for e in self.equalities if not e.holds(model)]
        bad += [d for d in self.disequalities if not d.holds(model)]
        return bad

    def check_exact(self, model: Mapping[str, Fraction]) -> bool:
        return not self.violations(model)

    def substitute(self, bindings: Mapping[str, Poly | Fraction]) -> ConstraintSystem:
        """Partially instantiate; bound unknowns are dropped from the system."""
        out = ConstraintSystem(
            {n: k for n, k in self.unknowns.items() if n not in bindings},
            warnings=list(self.warnings),
            templates={r: p.substitute(bindings) for r, p in self.templates.items()},
            specs=dict(self.specs))
        for e in self.equalities:
            out.add_equality(e.poly.substitute(bindings), e.tag)
        for d in self.disequalities:
            out.add_disequality((p.substitute(bindings) for p in d.polys), d.tag)
        return out

    # -- dumps ---------------------------------------------------------------

    def dump(self) -> str:
        lines = []
        for e in self.equalities:
            lines.append(f"{e.tag}: {e.poly} = 0")
        for d in self.disequalities:
            body = " ∨ ".join(f"{p} ≠ 0" for p in d.polys) or "false"
            lines.append(f"{d.tag}: {body}")
        return "\n".join(lines)

    def records(self) -> list[dict]:
        out = [{"kind": "eq", "tag": e.tag, "poly": str(e.poly)} for e in self.equalities]
        out += [{"kind": "neq", "tag": d.tag, "polys": [str(p) for p in d.polys]}
                for d in self.disequalities]
        return out

    def summary(self) -> dict[str, int]:
        counts = {k: 0 for k in KIND_ORDER}
        for kind in self.unknowns.values():
            counts[kind] += 1
        return counts
