from fractions import Fraction
from math import comb

from hypothesis import given, strategies as st

from lassosynth.polyring import Poly, monomial, variables
from lassosynth.template import generic_template, instantiate, monomials_up_to, template_size

PRODUCT_VARS = ("x0", "y0", "y", "s")


def test_product_size():
    spec, _ = generic_template(PRODUCT_VARS, 2)
    assert spec.size == 15 and spec.coeff_vars[0] == "a0"


def test_degree_zero_is_constant():
    spec, p = generic_template(("x", "y"), 0)
    assert spec.size == 1 and p == Poly.var("a0")


def test_degree_three():
    assert generic_template(PRODUCT_VARS, 3)[0].size == 35


def test_graded_lowest_first():
    ms = monomials_up_to(("x", "y"), 2)
    assert ms[0] == monomial()
    assert [sum(e for _, e in m) for m in ms] == sorted(sum(e for _, e in m) for m in ms)


@given(st.integers(0, 6), st.integers(0, 4))
def test_size_is_binomial(n, d):
    names = [f"v{i}" for i in range(n)]
    spec, p = generic_template(names, d)
    assert spec.size == comb(n + d, n) == template_size(n, d)
    assert len(set(spec.coeff_vars)) == spec.size
    assert len(p.terms) == spec.size


def test_names_are_deterministic():
    a, _ = generic_template(PRODUCT_VARS, 2)
    b, _ = generic_template(PRODUCT_VARS, 2)
    assert a.coeff_vars == b.coeff_vars


def test_prefix_collision_avoided():
    spec, _ = generic_template(("a0", "x"), 1, namespace={"a0"})
    assert not set(spec.coeff_vars) & {"a0", "x"}


def test_instantiate_published_invariant():
    spec, psi = generic_template(PRODUCT_VARS, 2)
    x0, y0, y, s = variables(*PRODUCT_VARS)
    alpha = {a: 0 for a in spec.coeff_vars}
    alpha[spec.coefficient_of(monomial(("x0", 1), ("y0", 1)))] = -1
    alpha[spec.coefficient_of(monomial(("x0", 1), ("y", 1)))] = 1
    alpha[spec.coefficient_of(monomial(("s", 1)))] = 1
    assert instantiate(psi, alpha) == s + x0 * y - x0 * y0


def test_instantiate_zero():
    spec, psi = generic_template(PRODUCT_VARS, 2)
    assert instantiate(psi, {a: 0 for a in spec.coeff_vars}).is_zero()


def test_partial_instantiation_keeps_unknowns():
    spec, psi = generic_template(("x",), 1)
    out = instantiate(psi, {"a0": 2})
    assert out == 2 + Poly.var("a1") * Poly.var("x")


def test_from_polynomial_round_trip():
    spec, psi = generic_template(PRODUCT_VARS, 2)
    x0, y0, y, s = variables(*PRODUCT_VARS)
    p = s - x0 * y0 + Fraction(1, 2) * y ** 2
    assert instantiate(psi, spec.from_polynomial(p)) == p


coeff = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@given(st.lists(coeff, min_size=6, max_size=6), st.lists(coeff, min_size=3, max_size=3))
def test_instantiate_is_homomorphism(q_coeffs, alpha_vals):
    spec, psi = generic_template(("x", "y"), 1)
    alpha = dict(zip(spec.coeff_vars, alpha_vals))
    x, y = variables("x", "y")
    q = sum((c * m for c, m in zip(q_coeffs, [x, y, x * y, x ** 2, Poly.const(1), y ** 2])),
            Poly.const(0))
    assert instantiate(psi + q, alpha) == instantiate(psi, alpha) + instantiate(q, alpha)
    assert instantiate(psi * q, alpha) == instantiate(psi, alpha) * instantiate(q, alpha)
