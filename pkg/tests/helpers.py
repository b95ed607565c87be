"""Shared builders for full models of generated constraint systems."""

from fractions import Fraction

from lassosynth.conditions import assemble, exit_factor
from lassosynth.polyring import exact_quotient, monomial
from lassosynth.program import execute, parse_polynomial
from lassosynth.program.execution import state_name

# a numbering of the degree-2 product template that lists squares first and the constant last
DEGREE_FIRST_NUMBERING = [
    (("x0", 2),), (("y0", 2),), (("y", 2),), (("s", 2),),
    (("x0", 1), ("y0", 1)), (("x0", 1), ("y", 1)), (("x0", 1), ("s", 1)),
    (("y0", 1), ("y", 1)), (("y0", 1), ("s", 1)), (("y", 1), ("s", 1)),
    (("x0", 1),), (("y0", 1),), (("y", 1),), (("s", 1),), (),
]


def degree_first_names(spec) -> dict[int, str]:
    """Map index k of that numbering (a_k) to our coefficient name."""
    return {k: spec.coefficient_of(monomial(*pairs)) for k, pairs in enumerate(DEGREE_FIRST_NUMBERING)}


def published_model(problem, cs, entry, params=None) -> dict[str, Fraction]:
    """Complete model: parameters, Ψ and Φ coefficients, test-case states."""
    vals = {k: Fraction(v) for k, v in (params or entry["params"]).items()}
    vals.update(cs.specs["psi"].from_polynomial(parse_polynomial(entry["psi"], problem.vars)))
    for t, text in entry["phi"].items():
        phi = parse_polynomial(text, problem.vars)
        spec = cs.specs[f"phi:{t}"]
        if cs.templates[f"phi:{t}"] != spec.polynomial:
            # exit-factor shape: the template covers Φ / s only
            phi = exact_quotient(phi, exit_factor(problem.lasso), problem.lasso.order)
        vals.update(spec.from_polynomial(phi))
    lasso = problem.instantiate(vals) if problem.synth_vars else problem.lasso
    for j, tc in enumerate(problem.testcases):
        run = execute(lasso, tc.init, tc.path)
        for i, st in enumerate(run.states[1:], 1):
            for v in problem.vars:
                name = state_name(j, i, v)
                if name in cs.unknowns:
                    vals[name] = st[v]
    for u in cs.unknowns:
        vals.setdefault(u, Fraction(0))
    return vals


def system(problem, degree, **kw):
    return assemble(problem, degree, **kw)
