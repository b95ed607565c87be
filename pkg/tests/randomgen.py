"""Seeded generators for random polynomials, transitions and lassos."""

import random
from fractions import Fraction

from lassosynth.polyring import Poly, monomial, prime
from lassosynth.program import LassoProgram, Transition, classify_transition


def random_poly(rng: random.Random, names, degree: int, terms: int = 3, allow_zero=True) -> Poly:
    while True:
        p = Poly.const(0)
        for _ in range(rng.randint(1, terms)):
            exps = [0] * len(names)
            for _ in range(rng.randint(0, degree)):
                exps[rng.randrange(len(names))] += 1
            c = Fraction(rng.randint(-4, 4), rng.choice([1, 1, 2, 3]))
            p = p + Poly({monomial(*[(n, e) for n, e in zip(names, exps) if e]): c})
        if allow_zero or not p.is_zero():
            return p


def deterministic_transition(rng: random.Random, names, degree=2, guard=True) -> Transition:
    gens = [Poly.var(prime(v)) - random_poly(rng, names, degree) for v in names]
    if guard:
        gens.append(random_poly(rng, names, degree, allow_zero=False))
    t = Transition("t", tuple(gens))
    _, view, _ = classify_transition(t, names)
    return Transition("t", t.generators, view)


def random_lasso(rng: random.Random) -> LassoProgram:
    """Small lasso with linear deterministic updates and a single-generator exit."""
    n = rng.choice([2, 3])
    names = ("x", "y", "z")[:n]
    stem = tuple(Poly.var(v) - rng.randint(-3, 3) for v in names[:rng.randint(1, n)])
    updates = []
    for v in names:
        f = Poly.const(rng.randint(-2, 2))
        for w in names:
            f = f + Poly.var(w).scale(rng.choice([-1, 0, 0, 1, 1, 2]))
        updates.append(Poly.var(prime(v)) - f)
    t = Transition("t", tuple(updates))
    exit_ = (Poly.var(rng.choice(names)) - rng.randint(-2, 2),)
    _, view, _ = classify_transition(t, names, exit_)
    return LassoProgram(names, stem, (Transition("t", t.generators, view),), exit_)
