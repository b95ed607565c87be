from fractions import Fraction

import pytest

from lassosynth import corpus
from lassosynth.conditions import (
    EXIT_FACTOR, ONE, Omega, assemble, coefficient_constraints, denominator_product, exit_factor,
    invariance_condition, nontriviality_constraint, synthesis_condition,
)
from lassosynth.constraints import STATE
from lassosynth.errors import ResidualPrimedError
from lassosynth.groebner import buchberger, normal_form
from lassosynth.polyring import Poly, variables
from lassosynth.program import parse_program
from lassosynth.template import generic_template

from helpers import degree_first_names, published_model
from published_solutions import PUBLISHED

F = Fraction


def a(names, *ks):
    return sum((Poly.var(names[k]) for k in ks), Poly.const(0))


class TestCoefficientConstraints:
    def test_zero(self):
        assert coefficient_constraints(Poly.const(0), ["y"]) == []

    def test_single(self):
        a1, a2, a7, y = variables("a1", "a2", "a7", "y")
        assert coefficient_constraints((a1 + a2 + a7) * y ** 2, ["y"]) == [a1 + a2 + a7]


class TestInvariance:
    def test_product_stem_equation(self, product):
        lasso = product.lasso
        spec, psi = generic_template(lasso.vars, 2)
        n = degree_first_names(spec)
        nf = normal_form(psi, buchberger(list(lasso.stem), lasso.order))
        x0, y = variables("x0", "y")
        expected = (a(n, 0) * x0 ** 2 + a(n, 1, 2, 7) * y ** 2 + a(n, 4, 5) * x0 * y
                    + a(n, 10) * x0 + a(n, 11, 12) * y + a(n, 14))
        assert nf == expected

    def test_product_counts(self, product):
        cs = invariance_condition(product.lasso, 2)
        assert len(cs.of_kind("A")) == 15 and len(cs.of_kind("B")) == 5
        ex = invariance_condition(product.lasso, 2, phi_shape=EXIT_FACTOR)
        assert len(ex.equalities) == 21 and len(ex.of_kind("B")) == 1

    def test_product_example_solution(self, product):
        for shape in ("generic", EXIT_FACTOR):
            cs = invariance_condition(product.lasso, 2, phi_shape=shape)
            vals = published_model(product, cs, PUBLISHED["product"] | {"psi": "s + x0*y - x0*y0"})
            assert cs.check_exact(vals)

    def test_gcd_lcm_counts(self, load):
        cs = invariance_condition(load("gcd_lcm").lasso, 2)
        assert [len(cs.of_kind(k)) for k in "AB"] == [28, 14]
        assert len(cs.unknowns) == 42

    def test_denominator_and_exit_factor(self, load):
        lasso = load("product2").lasso
        y = Poly.var("y")
        assert denominator_product(lasso.transitions[0]) == 1 - y
        assert exit_factor(lasso) == y - 1
        assert exit_factor(load("gcd_lcm").lasso) == variables("y1")[0] - variables("y2")[0]
        assert exit_factor(load("div_mod").lasso) == 1

    def test_no_program_variables_survive(self, load):
        for name in corpus.names():
            if name in corpus.SLOW:
                continue
            p = load(name)
            cs = assemble(p, corpus.degree(name))
            assert not cs.occurring() & set(p.lasso.symbols)

    def test_residual_primes_detected(self):
        src = "problem p\nvars x\ntransition t: rel x'^2 = x\n"
        lasso = parse_program(src).lasso
        with pytest.raises(ResidualPrimedError):
            invariance_condition(lasso, 1)


class TestSynthesis:
    def test_productS_published(self, load):
        p = load("productS")
        cs = synthesis_condition(p, 2)
        assert cs.check_exact(published_model(p, cs, PUBLISHED["productS"]))

    def test_post_equal_exit(self):
        p = parse_program("problem p\nvars x\nstem: x = 3\ntransition t: x' = x - 1\n"
                          "exit: x = 0\npost: x = 0\n")
        cs = synthesis_condition(p, 1)
        spec = cs.psi_spec
        model = spec.from_polynomial(Poly.var("x")) | {u: F(0) for u in cs.of_kind("B")}
        model[cs.of_kind("B")[0]] = F(1)
        post = [e for e in cs.equalities if e.tag == "post(0)"]
        assert post and all(e.holds(model) for e in post)

    def test_product_with_post(self, product):
        src = product_src_with_post()
        p = parse_program(src)
        cs = synthesis_condition(p, 2)
        vals = published_model(p, cs, PUBLISHED["product"] | {"psi": "s + x0*y - x0*y0"})
        # post s = x0*y0 has the opposite sign to Ψ: s - x0 y0 - 1*Ψ = -x0 y
        assert cs.check_exact(vals)

    def test_omega_template(self, load):
        p = load("productS")
        cs = synthesis_condition(p, 2, Omega.parse("template:1"))
        assert len(cs.of_kind("D")) == 5
        assert str(Omega.parse("template:1")) == "template:1" and str(ONE) == "one"
        with pytest.raises(ValueError):
            Omega.parse("two")


def product_src_with_post():
    from conftest import PRODUCT_SRC
    return PRODUCT_SRC + "post: s = x0*y0\n"


class TestNontriviality:
    def test_group(self, product):
        spec, _ = generic_template(product.lasso.vars, 2)
        d = nontriviality_constraint(spec)
        assert len(d.polys) == 15
        assert not d.holds({a: F(0) for a in spec.coeff_vars})

    def test_default_modes(self, load):
        with_post = assemble(load("productS"), 2)
        without = assemble(load("product"), 2)
        assert not any(d.tag == "nontriviality" for d in with_post.disequalities)
        assert any(d.tag == "nontriviality" for d in without.disequalities)


class TestAssemble:
    @pytest.mark.parametrize("name, count", [
        ("product", 20), ("productS", 25), ("productSY", 27), ("gcd_lcm", 42), ("gcd_lcmS", 52),
        ("div_mod", 16), ("div_modS", 26), ("root2", 25), ("root2S", 34), ("squareS", 20),
    ])
    def test_unknown_counts(self, load, name, count):
        cs = assemble(load(name), corpus.degree(name))
        assert len(cs.unknowns) - len(cs.of_kind(STATE)) == count

    def test_zero_testcases_is_synthesis_condition(self, load):
        p = load("productS")
        a_ = assemble(p, 2)
        b_ = synthesis_condition(p, 2)
        assert [e.poly for e in a_.equalities] == [e.poly for e in b_.equalities]

    def test_div_modS_exit_empty(self, load):
        cs = assemble(load("div_modS"), 2)
        assert sum("exit" in w for w in cs.warnings) == 5
        assert not any(d.tag.startswith("testcase") for d in cs.disequalities)

    def test_dump_and_records(self, load):
        cs = assemble(load("productSY"), 2)
        text = cs.dump()
        assert "stem: " in text and "≠ 0" in text
        recs = cs.records()
        assert len(recs) == len(cs.equalities) + len(cs.disequalities)
        assert {r["tag"] for r in recs} >= {"stem", "consecution(t)", "post(0)", "testcase(1,2)"}
