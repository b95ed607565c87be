"""Gröbner bases, normal forms and ideal membership."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import ParametricCoefficientError
from .polyring import (
    Monomial, MonomialOrder, Poly, divide, leading_term, mono_coprime, mono_div,
    mono_divides, mono_lcm, monic, prime, rational_leading_term,
)


@dataclass(frozen=True)
class GroebnerBasis:
    generators: tuple[Poly, ...]
    order: MonomialOrder
    reduced: bool = True

    def normal_form(self, p: Poly) -> Poly:
        return normal_form(p, self)

    def contains(self, p: Poly) -> bool:
        return normal_form(p, self).is_zero()

    def leading_monomials(self) -> list[Monomial]:
        return [rational_leading_term(g, self.order)[0] for g in self.generators]

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)


def s_polynomial(f: Poly, g: Poly, order: MonomialOrder) -> Poly:
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of a zero polynomial")
    lf, cf = rational_leading_term(f, order)
    lg, cg = rational_leading_term(g, order)
    lcm = mono_lcm(lf, lg)
    return f.mul_term(mono_div(lcm, lf), 1 / cf) - g.mul_term(mono_div(lcm, lg), 1 / cg)


def _is_parameter_free(polys: Iterable[Poly], order: MonomialOrder) -> bool:
    return all(v in order for p in polys for v in p.variables())


def interreduce(polys: Sequence[Poly], order: MonomialOrder) -> list[Poly]:
    """Minimalize and fully inter-reduce a Gröbner basis; results are monic."""
    gens = [monic(p, order) for p in polys if not p.is_zero()]
    # drop generators whose leading monomial is divisible by another's
    gens.sort(key=lambda p: order.key(leading_term(p, order)[0]))
    minimal: list[Poly] = []
    lms: list[Monomial] = []
    for g in gens:
        lm = leading_term(g, order)[0]
        if any(mono_divides(other, lm) for other in lms):
            continue
        minimal.append(g)
        lms.append(lm)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        _, r = divide(g, others, order) if others else ([], g)
        reduced.append(monic(r, order))
    reduced.sort(key=lambda p: order.key(leading_term(p, order)[0]), reverse=True)
    return reduced


def _solved_form(polys: list[Poly], order: MonomialOrder) -> GroebnerBasis:
    """Accept parametric generators whose leading terms already certify a basis.

    Nonzero rational leading coefficients and pairwise coprime leading
    monomials make every S-polynomial reduce to zero (Buchberger's first
    criterion), for every value of the parameters.
    """
    lms = []
    for p in polys:
        lm, _ = rational_leading_term(p, order)
        if not lm:
            return GroebnerBasis((Poly.const(1),), order)
        lms.append(lm)
    for a, b in combinations(lms, 2):
        if not mono_coprime(a, b):
            raise ParametricCoefficientError(
                "parametric generators are not in triangular solved form")
    return GroebnerBasis(tuple(interreduce(polys, order)), order, reduced=True)


def buchberger(polys: Sequence[Poly], order: MonomialOrder) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal generated by ``polys``."""
    gens = [p for p in polys if not p.is_zero()]
    if not gens:
        return GroebnerBasis((), order)
    if not _is_parameter_free(gens, order):
        return _solved_form(gens, order)
    basis = [monic(p, order) for p in gens]
    lms = [leading_term(p, order)[0] for p in basis]
    pairs = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    while pairs:
        # normal selection strategy: smallest lcm first
        pairs.sort(key=lambda ij: order.key(mono_lcm(lms[ij[0]], lms[ij[1]])), reverse=True)
        i, j = pairs.pop()
        if mono_coprime(lms[i], lms[j]):
            continue
        _, r = divide(s_polynomial(basis[i], basis[j], order), basis, order)
        if r.is_zero():
            continue
        r = monic(r, order)
        if r.is_constant():
            return GroebnerBasis((Poly.const(1),), order)
        pairs.extend((k, len(basis)) for k in range(len(basis)))
        basis.append(r)
        lms.append(leading_term(r, order)[0])
    return GroebnerBasis(tuple(interreduce(basis, order)), order, reduced=True)


def normal_form(p: Poly, basis: GroebnerBasis) -> Poly:
    if not basis.generators:
        return p
    return divide(p, basis.generators, basis.order)[1]


def ideal_member(p: Poly, polys: Sequence[Poly], order: MonomialOrder) -> bool:
    return buchberger(polys, order).contains(p)


def is_groebner_basis(basis: GroebnerBasis) -> bool:
    gens = basis.generators
    return all(
        divide(s_polynomial(f, g, basis.order), gens, basis.order)[1].is_zero()
        for f, g in combinations(gens, 2))


def transition_basis(transition, order: MonomialOrder) -> GroebnerBasis:
    """Gröbner basis of a transition's ideal under a prime-first order.

    A deterministic transition with unit denominators and at most one guard
    already has the basis ``{h} ∪ {x' - f}``, which is returned without
    running Buchberger.  Anything else goes through :func:`buchberger`.
    """
    view = transition.deterministic_view
    if view is not None and len(view.guards) <= 1 and all(u.denominator == 1 for u in view.updates):
        gens = [h for h in view.guards if not h.is_zero()]
        gens += [Poly.var(prime(u.target)) - u.numerator for u in view.updates]
        return GroebnerBasis(tuple(gens), order, reduced=False)
    return buchberger(list(transition.generators), order)
