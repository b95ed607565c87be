"""Exact multivariate polynomials over the rationals.

Polynomials are keyed by plain string symbols.  A next-state variable is the
base name followed by an apostrophe (``y'``).  Which symbols are program
variables and which are unknowns is decided by the caller: orderings only rank
the symbols listed in their precedence, and every other symbol is treated as
part of the coefficient ring during division.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import ParametricCoefficientError, UnknownVariableError

# A monomial is a tuple of (symbol, exponent) pairs sorted by symbol, with
# every exponent positive.  The empty tuple is the monomial 1.
Monomial = tuple[tuple[str, int], ...]
Number = Union[int, Fraction]

ONE: Monomial = ()

PROGRAM = "program"
TEMPLATE = "template"
SYNTHESIS = "synthesis"


def prime(name: str) -> str:
    return name + "'"


def unprime(name: str) -> str:
    return name[:-1] if name.endswith("'") else name


def is_primed(name: str) -> bool:
    return name.endswith("'")


@dataclass(frozen=True)
class Variable:
    """A declared symbol together with its role in a problem."""

    name: str
    primed: bool = False
    kind: str = PROGRAM

    def __post_init__(self):
        if self.primed and self.kind != PROGRAM:
            raise ValueError(f"only program variables can be primed: {self.name}")

    @property
    def symbol(self) -> str:
        return prime(self.name) if self.primed else self.name


# -- monomials ---------------------------------------------------------------

def monomial(*pairs: tuple[str, int], **exps: int) -> Monomial:
    d: dict[str, int] = {}
    for v, e in list(pairs) + list(exps.items()):
        d[v] = d.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in d.items() if e))


@lru_cache(maxsize=1 << 18)
def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """Return ``a / b`` if ``b`` divides ``a``, else None."""
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        have = d.get(v, 0)
        if have < e:
            return None
        if have == e:
            del d[v]
        else:
            d[v] = have - e
    return tuple(sorted(d.items()))


def mono_divides(b: Monomial, a: Monomial) -> bool:
    if not b:
        return True
    d = dict(a)
    return all(d.get(v, 0) >= e for v, e in b)


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    d = dict(a)
    for v, e in b:
        if e > d.get(v, 0):
            d[v] = e
    return tuple(sorted(d.items()))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    names = {v for v, _ in a}
    return not any(v in names for v, _ in b)


def mono_degree(m: Monomial, among: frozenset[str] | set[str] | None = None) -> int:
    if among is None:
        return sum(e for _, e in m)
    return sum(e for v, e in m if v in among)


def mono_split(m: Monomial, main: frozenset[str] | set[str]) -> tuple[Monomial, Monomial]:
    """Split ``m`` into the part over ``main`` and the remaining part."""
    inside = tuple((v, e) for v, e in m if v in main)
    if len(inside) == len(m):
        return inside, ONE
    return inside, tuple((v, e) for v, e in m if v not in main)


def mono_str(m: Monomial) -> str:
    if not m:
        return "1"
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)


# -- orderings ---------------------------------------------------------------

LEX = "lex"
GRLEX = "grlex"


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial ordering over the symbols in ``precedence`` (highest first)."""

    precedence: tuple[str, ...]
    strategy: str = LEX
    _index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.strategy not in (LEX, GRLEX):
            raise ValueError(f"unknown monomial order strategy {self.strategy!r}")
        if len(set(self.precedence)) != len(self.precedence):
            raise ValueError("duplicate variable in precedence")
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.precedence)})

    @classmethod
    def prime_first(cls, variables: Sequence[str], strategy: str = LEX) -> MonomialOrder:
        """Order in which every next-state variable outranks every current one."""
        return cls(tuple(prime(v) for v in variables) + tuple(variables), strategy)

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(self.precedence)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def key(self, m: Monomial) -> tuple[int, ...]:
        """Sort key; a larger key is a larger monomial."""
        vec = [0] * len(self.precedence)
        index = self._index
        for v, e in m:
            try:
                vec[index[v]] = e
            except KeyError:
                raise UnknownVariableError(f"variable {v!r} has no precedence") from None
        if self.strategy == GRLEX:
            return (sum(vec), *vec)
        return tuple(vec)


def cmp_monomials(m1: Monomial, m2: Monomial, order: MonomialOrder) -> int:
    """Return -1, 0 or 1 as ``m1`` is less than, equal to or greater than ``m2``."""
    k1, k2 = order.key(m1), order.key(m2)
    return (k1 > k2) - (k1 < k2)


# -- polynomials -------------------------------------------------------------

def _frac(c: Number) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class Poly:
    """Immutable polynomial with exact rational coefficients.

    The mapping from monomials to coefficients never stores a zero
    coefficient, so structural equality is mathematical equality.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None):
        d: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    d[m] = _frac(c)
        self._terms = d
        self._hash: int | None = None

    @classmethod
    def _wrap(cls, d: dict[Monomial, Fraction]) -> Poly:
        p = cls.__new__(cls)
        p._terms = d
        p._hash = None
        return p

    @classmethod
    def var(cls, name: str) -> Poly:
        return cls._wrap({((name, 1),): Fraction(1)})

    @classmethod
    def const(cls, c: Number) -> Poly:
        return cls._wrap({ONE: _frac(c)} if c else {})

    @classmethod
    def coerce(cls, x: Poly | Number) -> Poly:
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot convert {type(x).__name__} to Poly")

    # -- inspection ----------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get(ONE, Fraction(0))

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(m, Fraction(0))

    def variables(self) -> frozenset[str]:
        return frozenset(v for m in self._terms for v, _ in m)

    def degree(self, among: Iterable[str] | None = None) -> int:
        """Total degree (restricted to ``among`` if given); -1 for zero."""
        if not self._terms:
            return -1
        s = None if among is None else frozenset(among)
        return max(mono_degree(m, s) for m in self._terms)

    def degree_in(self, name: str) -> int:
        return max((e for m in self._terms for v, e in m if v == name), default=0)

    def is_linear_in(self, among: Iterable[str]) -> bool:
        s = frozenset(among)
        return all(mono_degree(m, s) <= 1 for m in self._terms)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: Poly | Number) -> Poly:
        if not isinstance(other, Poly):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = Poly.const(other)
        if len(other._terms) > len(self._terms):
            a, b = other, self
        else:
            a, b = self, other
        d = dict(a._terms)
        for m, c in b._terms.items():
            s = d.get(m)
            if s is None:
                d[m] = c
            else:
                s += c
                if s:
                    d[m] = s
                else:
                    del d[m]
        return Poly._wrap(d)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._wrap({m: -c for m, c in self._terms.items()})

    def __pos__(self) -> Poly:
        return self

    def __sub__(self, other: Poly | Number) -> Poly:
        if not isinstance(other, Poly):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other: Number) -> Poly:
        return Poly.coerce(other) - self

    def scale(self, c: Number) -> Poly:
        if not c:
            return Poly()
        c = _frac(c)
        return Poly._wrap({m: k * c for m, k in self._terms.items()})

    def mul_term(self, m: Monomial, c: Number) -> Poly:
        if not c:
            return Poly()
        c = _frac(c)
        return Poly._wrap({mono_mul(k, m): v * c for k, v in self._terms.items()})

    def __mul__(self, other: Poly | Number) -> Poly:
        if not isinstance(other, Poly):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            return self.scale(other)
        d: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                s = d.get(m)
                d[m] = c1 * c2 if s is None else s + c1 * c2
        return Poly._wrap({m: c for m, c in d.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, c: Number) -> Poly:
        if isinstance(c, Poly):
            c = c.constant_value()
        return self.scale(Fraction(1) / _frac(c))

    # -- equality ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Poly.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- substitution and evaluation ----------------------------------------

    def substitute(self, bindings: Mapping[str, Poly | Number]) -> Poly:
        """Simultaneously replace symbols by polynomials."""
        if not bindings:
            return self
        binds = {k: Poly.coerce(v) for k, v in bindings.items()}
        powers: dict[tuple[str, int], Poly] = {}

        def power(v: str, e: int) -> Poly:
            key = (v, e)
            p = powers.get(key)
            if p is None:
                p = binds[v] ** e
                powers[key] = p
            return p

        acc: dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            kept = tuple((v, e) for v, e in m if v not in binds)
            if len(kept) == len(m):
                acc[m] = acc.get(m, 0) + c
                continue
            piece = Poly._wrap({kept: c})
            for v, e in m:
                if v in binds:
                    piece = piece * power(v, e)
            for pm, pc in piece._terms.items():
                acc[pm] = acc.get(pm, 0) + pc
        return Poly._wrap({m: c for m, c in acc.items() if c})

    def rename(self, mapping: Mapping[str, str]) -> Poly:
        return self.substitute({k: Poly.var(v) for k, v in mapping.items()})

    def evaluate(self, valuation: Mapping[str, Number]) -> Fraction:
        """Evaluate at a point; every symbol must be assigned."""
        total = Fraction(0)
        for m, c in self._terms.items():
            t = c
            for v, e in m:
                try:
                    t *= _frac(valuation[v]) ** e
                except KeyError:
                    raise KeyError(f"no value for {v!r}") from None
            total += t
        return total

    def coefficients_in(self, among: Iterable[str]) -> dict[Monomial, Poly]:
        """Rewrite as a polynomial in ``among`` with coefficients over the rest."""
        s = frozenset(among)
        groups: dict[Monomial, dict[Monomial, Fraction]] = {}
        for m, c in self._terms.items():
            inside, outside = mono_split(m, s)
            groups.setdefault(inside, {})[outside] = c
        return {m: Poly._wrap(d) for m, d in groups.items()}

    # -- printing ------------------------------------------------------------

    def sorted_terms(self, order: MonomialOrder | None = None) -> list[tuple[Monomial, Fraction]]:
        if order is not None and all(v in order for m in self._terms for v, _ in m):
            return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)
        return sorted(self._terms.items(), key=_display_key)

    def format(self, order: MonomialOrder | None = None) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for i, (m, c) in enumerate(self.sorted_terms(order)):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not m:
                body = _num_str(a)
            elif a == 1:
                body = mono_str(m)
            else:
                body = f"{_num_str(a)}*{mono_str(m)}"
            if i == 0:
                parts.append(("-" if sign == "-" else "") + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Poly({self.format()!r})"


def _display_key(t: tuple[Monomial, Fraction]):
    m = t[0]
    return (-mono_degree(m), m)


def _num_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def var(name: str) -> Poly:
    return Poly.var(name)


def variables(*names: str) -> tuple[Poly, ...]:
    if len(names) == 1 and " " in names[0]:
        names = tuple(names[0].split())
    return tuple(Poly.var(n) for n in names)


def const(c: Number) -> Poly:
    return Poly.const(c)


def substitute(p: Poly, bindings: Mapping[str, Poly | Number]) -> Poly:
    return p.substitute(bindings)


def coefficients_in(p: Poly, among: Iterable[str]) -> dict[Monomial, Poly]:
    return p.coefficients_in(among)


# -- division ----------------------------------------------------------------

# During division a polynomial is viewed over the order's variables with
# coefficients in the remaining symbols: {main monomial: {coeff monomial: c}}.
_Split = dict[Monomial, dict[Monomial, Fraction]]


def _split_poly(p: Poly, main: frozenset[str]) -> _Split:
    out: _Split = {}
    for m, c in p.terms.items():
        inside, outside = mono_split(m, main)
        out.setdefault(inside, {})[outside] = c
    return out


def _join(inside: Monomial, coeff: dict[Monomial, Fraction]) -> dict[Monomial, Fraction]:
    return {mono_mul(inside, o): c for o, c in coeff.items()}


def leading_term(p: Poly, order: MonomialOrder) -> tuple[Monomial, Poly]:
    """Leading monomial over the order's variables and its coefficient."""
    if p.is_zero():
        raise ValueError("zero polynomial has no leading term")
    split = _split_poly(p, order.variables)
    lm = max(split, key=order.key)
    return lm, Poly(split[lm])


def leading_monomial(p: Poly, order: MonomialOrder) -> Monomial:
    return leading_term(p, order)[0]


def rational_leading_term(p: Poly, order: MonomialOrder) -> tuple[Monomial, Fraction]:
    lm, lc = leading_term(p, order)
    if not lc.is_constant():
        raise ParametricCoefficientError(
            f"leading coefficient {lc} of {p} is not a rational number")
    return lm, lc.constant_value()


class _Divisor:
    __slots__ = ("poly", "lm", "lc", "tail")

    def __init__(self, poly: Poly, order: MonomialOrder):
        main = order.variables
        split = _split_poly(poly, main)
        lm = max(split, key=order.key)
        lcd = split[lm]
        if len(lcd) != 1 or ONE not in lcd:
            raise ParametricCoefficientError(
                f"leading coefficient of {poly} involves symbols outside the order")
        self.poly = poly
        self.lm = lm
        self.lc = lcd[ONE]
        self.tail = [(m, c) for m, c in split.items() if m != lm]


def divide(p: Poly, divisors: Sequence[Poly], order: MonomialOrder,
           choose=None) -> tuple[list[Poly], Poly]:
    """Multivariate division of ``p`` by ``divisors``.

    Returns ``(quotients, remainder)`` with ``p == sum(q*g) + remainder`` and
    no monomial of the remainder divisible by a leading monomial.  Symbols
    outside the order are coefficients; each divisor's leading coefficient must
    be a nonzero rational.  ``choose`` may pick among several eligible
    divisors (a callable receiving the list of indices); the default takes the
    first.
    """
    main = order.variables
    divs = []
    for g in divisors:
        if g.is_zero():
            raise ValueError("division by the zero polynomial")
        divs.append(_Divisor(g, order))
    work = _split_poly(p, main)
    quotients: list[dict[Monomial, Fraction]] = [{} for _ in divs]
    remainder: dict[Monomial, Fraction] = {}
    key = order.key
    heap = [(_neg(key(m)), m) for m in work]
    heapq.heapify(heap)
    while heap:
        _, m = heapq.heappop(heap)
        coeff = work.pop(m, None)
        if coeff is None:
            continue
        eligible = [i for i, d in enumerate(divs) if mono_divides(d.lm, m)]
        if not eligible:
            for o, c in coeff.items():
                remainder[mono_mul(m, o)] = c
            continue
        i = eligible[0] if choose is None or len(eligible) == 1 else choose(eligible)
        d = divs[i]
        shift = mono_div(m, d.lm)
        ratio = {o: c / d.lc for o, c in coeff.items()}
        q = quotients[i]
        for o, c in ratio.items():
            qm = mono_mul(shift, o)
            s = q.get(qm, 0) + c
            if s:
                q[qm] = s
            else:
                q.pop(qm, None)
        for tm, tcoeff in d.tail:
            target = mono_mul(shift, tm)
            slot = work.get(target)
            if slot is None:
                slot = {}
                work[target] = slot
                heapq.heappush(heap, (_neg(key(target)), target))
            for o1, c1 in ratio.items():
                for o2, c2 in tcoeff.items():
                    o = mono_mul(o1, o2)
                    s = slot.get(o, 0) - c1 * c2
                    if s:
                        slot[o] = s
                    else:
                        slot.pop(o, None)
            if not slot:
                del work[target]
    return [Poly._wrap(q) for q in quotients], Poly._wrap(remainder)


def _neg(k: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-x for x in k)


def exact_quotient(p: Poly, g: Poly, order: MonomialOrder) -> Poly | None:
    """Return ``p / g`` if ``g`` divides ``p`` exactly, else None."""
    (q,), r = divide(p, [g], order)
    return q if r.is_zero() else None


def monic(p: Poly, order: MonomialOrder) -> Poly:
    _, lc = rational_leading_term(p, order)
    return p if lc == 1 else p.scale(1 / lc)
