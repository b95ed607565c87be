"""Generic template polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Iterable, Mapping, Sequence

from .polyring import Monomial, Poly, monomial


def monomials_up_to(variables: Sequence[str], degree: int) -> list[Monomial]:
    """All monomials of total degree <= ``degree``.

    Lowest degree first; within one degree, lexicographically descending
    with respect to the order of ``variables`` (so ``x^2`` before ``x*y``).
    """
    if degree < 0:
        raise ValueError("template degree must be nonnegative")
    out: list[Monomial] = []
    for k in range(degree + 1):
        # combinations_with_replacement yields index tuples in lex order,
        # which is descending lex on the exponent vectors
        for idx in combinations_with_replacement(range(len(variables)), k):
            exps: dict[str, int] = {}
            for i in idx:
                exps[variables[i]] = exps.get(variables[i], 0) + 1
            out.append(monomial(*exps.items()))
    return out


@dataclass(frozen=True)
class TemplateSpec:
    vars: tuple[str, ...]
    degree: int
    prefix: str
    coeff_vars: tuple[str, ...]
    monomials: tuple[Monomial, ...]

    @property
    def size(self) -> int:
        return len(self.coeff_vars)

    @property
    def polynomial(self) -> Poly:
        terms = Poly()
        for c, m in zip(self.coeff_vars, self.monomials):
            terms = terms + Poly.var(c) * Poly({m: 1})
        return terms

    def coefficient_of(self, m: Monomial) -> str:
        return self.coeff_vars[self.monomials.index(m)]

    def from_polynomial(self, p: Poly) -> dict[str, Fraction]:
        """The coefficient valuation that instantiates this template to ``p``."""
        extra = set(p.terms) - set(self.monomials)
        if extra or p.variables() - set(self.vars):
            raise ValueError(f"{p} is not an instance of this template")
        return {c: p.coefficient(m) for c, m in zip(self.coeff_vars, self.monomials)}


def template_size(n: int, d: int) -> int:
    return comb(n + d, n)


def generic_template(variables: Sequence[str], degree: int, prefix: str = "a",
                     namespace: Iterable[str] = ()) -> tuple[TemplateSpec, Poly]:
    """Template ``sum a_i * m_i`` over every monomial ``m_i`` of degree <= ``degree``.

    Coefficient names are ``prefix + index``; ``prefix`` is extended with
    underscores until no name collides with ``namespace``.
    """
    mons = monomials_up_to(tuple(variables), degree)
    taken = set(namespace) | set(variables)
    while any(f"{prefix}{i}" in taken for i in range(len(mons))):
        prefix += "_"
    spec = TemplateSpec(tuple(variables), degree, prefix,
                        tuple(f"{prefix}{i}" for i in range(len(mons))), tuple(mons))
    return spec, spec.polynomial


def instantiate(p: Poly, alpha: Mapping[str, Fraction | Poly | int]) -> Poly:
    """Replace unknowns by their values; unknowns missing from ``alpha`` stay."""
    return p.substitute(alpha)
