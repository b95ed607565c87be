"""Constraint generation: invariance, synthesis and test-case conditions.

Every condition is a polynomial identity in the program variables.  It is
turned into constraints over the unknowns by requiring each coefficient to
vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .constraints import PARAMETER, POST, TEMPLATE, WITNESS, ConstraintSystem, Disequality
from .errors import LassoError, ResidualPrimedError
from .groebner import buchberger, normal_form, transition_basis
from .polyring import Poly, is_primed, prime
from .program.execution import symbolic_execute
from .program.model import LassoProgram, SynthesisProblem, Transition
from .template import TemplateSpec, generic_template

GENERIC = "generic"
EXIT_FACTOR = "exit-factor"


def coefficient_constraints(p: Poly, program_vars: Sequence[str]) -> list[Poly]:
    """One polynomial over the unknowns per program-variable monomial of ``p``."""
    coeffs = p.coefficients_in(program_vars)
    return [coeffs[m] for m in sorted(coeffs, key=_mono_sort_key, reverse=True)]


def _mono_sort_key(m):
    return (sum(e for _, e in m), m)


@dataclass(frozen=True)
class Omega:
    """Multiplier for post conditions: the constant 1 or a generic template."""

    degree: int | None = None

    @classmethod
    def parse(cls, text: str) -> Omega:
        if text == "one":
            return cls()
        kind, _, k = text.partition(":")
        if kind != "template" or not k.isdigit():
            raise ValueError(f"omega must be 'one' or 'template:<k>', got {text!r}")
        return cls(int(k))

    def __str__(self) -> str:
        return "one" if self.degree is None else f"template:{self.degree}"


ONE = Omega()


def exit_factor(lasso: LassoProgram) -> Poly:
    """The exit generator when there is exactly one, else 1."""
    return lasso.exit[0] if len(lasso.exit) == 1 else Poly.const(1)


def denominator_product(t: Transition) -> Poly:
    view = t.deterministic_view
    q = Poly.const(1)
    if view is None:
        return q
    for u in view.updates:
        if not u.denominator.is_constant():
            q = q * u.denominator
    return q


def consecution_residue(t: Transition, lasso: LassoProgram, psi: Poly, degree: int) -> Poly:
    """``⌊q^d * s * psi(V')⌋`` modulo the transition's ideal; primed-free."""
    order = lasso.order
    shifted = psi.rename({v: prime(v) for v in lasso.vars})
    lhs = denominator_product(t) ** degree * exit_factor(lasso) * shifted
    r = normal_form(lhs, transition_basis(t, order))
    left = sorted(v for v in r.variables() if is_primed(v))
    if left:
        raise ResidualPrimedError(
            f"transition {t.name}: next-state variables {', '.join(left)} survive division")
    return r


def _phi_template(t_index: int, lasso: LassoProgram, residue: Poly, degree: int,
                  shape: str, phi_degree: int | None, namespace) -> tuple[TemplateSpec, Poly]:
    s = exit_factor(lasso)
    if phi_degree is None:
        phi_degree = max(0, residue.degree(lasso.vars) - degree)
    if shape == EXIT_FACTOR:
        spec, body = generic_template(lasso.vars, max(0, phi_degree - s.degree()),
                                      f"b{t_index}_", namespace)
        return spec, s * body
    if shape != GENERIC:
        raise ValueError(f"unknown witness shape {shape!r}")
    return generic_template(lasso.vars, phi_degree, f"b{t_index}_", namespace)


def invariance_condition(lasso: LassoProgram, degree: int, *, phi_shape: str = GENERIC,
                         phi_degree: int | None = None, parameters: Sequence[str] = (),
                         psi_prefix: str = "a") -> ConstraintSystem:
    """Stem and consecution constraints for a degree-``degree`` template."""
    namespace = set(parameters)
    spec, psi = generic_template(lasso.vars, degree, psi_prefix, namespace)
    namespace |= set(spec.coeff_vars)
    cs = ConstraintSystem()
    cs.declare(spec.coeff_vars, TEMPLATE)
    cs.templates["psi"] = psi
    cs.specs["psi"] = spec

    stem_basis = buchberger(list(lasso.stem), lasso.order)
    for c in coefficient_constraints(normal_form(psi, stem_basis), lasso.vars):
        cs.add_equality(c, "stem")

    for i, t in enumerate(lasso.transitions):
        r = consecution_residue(t, lasso, psi, degree)
        phi_spec, phi = _phi_template(i, lasso, r, degree, phi_shape, phi_degree, namespace)
        namespace |= set(phi_spec.coeff_vars)
        cs.declare(phi_spec.coeff_vars, WITNESS)
        cs.templates[f"phi:{t.name}"] = phi
        cs.specs[f"phi:{t.name}"] = phi_spec
        for c in coefficient_constraints(r - phi * psi, lasso.vars):
            cs.add_equality(c, f"consecution({t.name})")
    return cs


def post_constraints(problem: SynthesisProblem, psi: Poly, omega: Omega,
                     namespace=()) -> ConstraintSystem:
    lasso = problem.lasso
    cs = ConstraintSystem()
    exit_basis = buchberger(list(lasso.exit), lasso.order)
    namespace = set(namespace)
    for i, post in enumerate(problem.post):
        if omega.degree is None:
            multiplier = Poly.const(1)
        else:
            spec, multiplier = generic_template(lasso.vars, omega.degree, f"d{i}_", namespace)
            namespace |= set(spec.coeff_vars)
            cs.declare(spec.coeff_vars, POST)
            cs.specs[f"omega:{i}"] = spec
        cs.templates[f"omega:{i}"] = multiplier
        for c in coefficient_constraints(normal_form(post - multiplier * psi, exit_basis), lasso.vars):
            cs.add_equality(c, f"post({i})")
    return cs


def synthesis_condition(problem: SynthesisProblem, degree: int, omega: Omega = ONE,
                        **kwargs) -> ConstraintSystem:
    cs = invariance_condition(problem.lasso, degree, parameters=problem.synth_vars, **kwargs)
    cs.declare(problem.synth_vars, PARAMETER)
    if problem.post:
        cs.merge(post_constraints(problem, cs.templates["psi"], omega, cs.unknowns))
    return cs


def nontriviality_constraint(spec: TemplateSpec) -> Disequality:
    return Disequality(tuple(Poly.var(a) for a in spec.coeff_vars), "nontriviality")


def assemble(problem: SynthesisProblem, degree: int, omega: Omega = ONE,
             nontrivial: bool | None = None, **kwargs) -> ConstraintSystem:
    """Full constraint system: synthesis condition, test cases, nontriviality.

    ``nontrivial`` defaults to on exactly when there is no post condition
    (a post condition already rules out the zero template).
    """
    cs = synthesis_condition(problem, degree, omega, **kwargs)
    spec = cs.psi_spec
    for j, tc in enumerate(problem.testcases):
        cs.merge(symbolic_execute(problem, tc, j))
    if nontrivial is None:
        nontrivial = not problem.post
    if nontrivial:
        cs.disequalities.append(nontriviality_constraint(spec))
    cs.check_no_program_vars(problem.lasso.symbols)
    clash = set(cs.unknowns) & set(problem.lasso.symbols)
    if clash:
        raise LassoError(f"unknown names clash with program variables: {sorted(clash)}")
    return cs
