"""SMT-LIB 2 text for constraint systems."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from ..constraints import ConstraintSystem
from ..polyring import Monomial, Poly


def numeral(c: Fraction) -> str:
    c = Fraction(c)
    if c < 0:
        return f"(- {numeral(-c)})"
    if c.denominator == 1:
        return str(c.numerator)
    return f"(/ {c.numerator} {c.denominator})"


def _monomial_key(m: Monomial, rank: Mapping[str, int]) -> tuple:
    # exponent vector over the unknown order; larger vectors print first
    vec = [0] * len(rank)
    extra = []
    for v, e in m:
        if v in rank:
            vec[rank[v]] = e
        else:
            extra.append((v, e))
    return tuple(vec), tuple(extra)


def term(p: Poly, order: Sequence[str] = (), atoms: Mapping[str, str] | None = None) -> str:
    """S-expression for ``p``; ``atoms`` replaces variable names by terms."""
    atoms = atoms or {}
    rank = {v: i for i, v in enumerate(order)}
    missing = sorted(p.variables() - set(rank))
    for v in missing:
        rank[v] = len(rank)
    items = sorted(p.items(), key=lambda t: _monomial_key(t[0], rank), reverse=True)
    parts = []
    for m, c in items:
        factors = [atoms.get(v, v) for v, e in sorted(m, key=lambda t: rank[t[0]]) for _ in range(e)]
        if not factors:
            parts.append(numeral(c))
        elif c == 1:
            parts.append(factors[0] if len(factors) == 1 else f"(* {' '.join(factors)})")
        elif c == -1:
            inner = factors[0] if len(factors) == 1 else f"(* {' '.join(factors)})"
            parts.append(f"(- {inner})")
        else:
            parts.append(f"(* {numeral(c)} {' '.join(factors)})")
    if not parts:
        return "0"
    return parts[0] if len(parts) == 1 else f"(+ {' '.join(parts)})"


def assertions(cs: ConstraintSystem, atoms: Mapping[str, str] | None = None) -> list[str]:
    order = cs.ordered_unknowns()
    out = [f"(assert (= {term(e.poly, order, atoms)} 0))" for e in cs.equalities]
    for d in cs.disequalities:
        lits = [f"(not (= {term(p, order, atoms)} 0))" for p in d.polys]
        if not lits:
            out.append("(assert false)")
        elif len(lits) == 1:
            out.append(f"(assert {lits[0]})")
        else:
            out.append(f"(assert (or {' '.join(lits)}))")
    return out


def emit_smtlib(cs: ConstraintSystem, logic: str = "QF_NRA", seed: int | None = None,
                extra: Sequence[str] = (), get_model: bool = True) -> str:
    lines = ["(set-option :produce-models true)"]
    if seed is not None:
        lines.append(f"(set-option :random-seed {seed})")
    lines.append(f"(set-logic {logic})")
    names = cs.ordered_unknowns()
    lines += [f"(declare-const {n} Real)" for n in names]
    lines += assertions(cs)
    lines += list(extra)
    lines.append("(check-sat)")
    if get_model and names:
        lines.append("(get-model)")
    return "\n".join(lines) + "\n"
