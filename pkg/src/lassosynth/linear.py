"""Gaussian elimination over the linear part of a constraint system.

Equalities of degree one in the unknowns are solved for one unknown and
substituted everywhere else.  Because substitution can make further
equalities linear, the pass repeats until none is left.  The eliminated
unknowns remain available as affine expressions over the surviving ones,
so a model of the reduced system extends to a model of the original.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .constraints import ConstraintSystem
from .polyring import Poly
from .smt.emit import term
from .smt.solver import AlgebraicTerm, SolverModel, Value, value_term


@dataclass
class Reduction:
    system: ConstraintSystem
    eliminated: dict[str, Poly]     # unknown -> expression over survivors

    def extend(self, model: SolverModel | Mapping[str, Value]) -> SolverModel:
        """Model of the original system from a model of the reduced one."""
        values: dict[str, Value] = dict(model.values if isinstance(model, SolverModel) else model)
        for name, expr in self.eliminated.items():
            for v in expr.variables():
                values.setdefault(v, Fraction(0))
            deps = {v: values[v] for v in expr.variables()}
            if all(isinstance(x, Fraction) for x in deps.values()):
                values[name] = expr.evaluate(deps)
            else:
                atoms = {v: value_term(x) for v, x in deps.items()}
                values[name] = AlgebraicTerm(term(expr, sorted(deps), atoms))
        completed = model.completed if isinstance(model, SolverModel) else ()
        return SolverModel(values, tuple(completed))


def simplify_linear(cs: ConstraintSystem) -> Reduction:
    order = cs.ordered_unknowns()
    rank = {n: i for i, n in enumerate(order)}
    equalities = list(cs.equalities)
    disequalities = list(cs.disequalities)
    eliminated: dict[str, Poly] = {}
    while True:
        pick = None
        for k, e in enumerate(equalities):
            p = e.poly
            if p.degree() == 1:
                pick = k
                break
        if pick is None:
            break
        p = equalities.pop(pick).poly
        # eliminate the latest unknown in emission order
        pivot = max((v for v in p.variables()), key=lambda v: rank.get(v, -1))
        coeff = p.coefficient(((pivot, 1),))
        expr = (Poly.var(pivot) - p.scale(1 / coeff))
        binding = {pivot: expr}
        eliminated = {n: x.substitute(binding) for n, x in eliminated.items()}
        eliminated[pivot] = expr
        equalities = [type(e)(e.poly.substitute(binding), e.tag) for e in equalities]
        equalities = [e for e in equalities if not e.poly.is_zero()]
        disequalities = [type(d)(tuple(q for q in (x.substitute(binding) for x in d.polys)
                                       if not q.is_zero()), d.tag) for d in disequalities]
        if any(e.poly.is_constant() for e in equalities):
            break   # inconsistent; leave it to the solver to report unsat
    reduced = ConstraintSystem(
        {n: k for n, k in cs.unknowns.items() if n not in eliminated},
        equalities, disequalities, list(cs.warnings), dict(cs.templates), dict(cs.specs))
    return Reduction(reduced, eliminated)
