from fractions import Fraction

import pytest

from lassosynth import corpus
from lassosynth.conditions import assemble
from lassosynth.errors import IncompleteModelError, LassoError
from lassosynth.polyring import Poly, variables
from lassosynth.program import parse_polynomial
from lassosynth.smt import AlgebraicTerm
from lassosynth.verify import check_invariant, check_post, check_solution, witness_identity

from helpers import published_model
from published_solutions import PUBLISHED

F = Fraction
x0, y0, y, s = variables("x0", "y0", "y", "s")


class TestCheckInvariant:
    def test_product(self, product):
        rep = check_invariant(product.lasso, s + x0 * y - x0 * y0)
        assert rep.ok and rep.stem_ok
        assert rep.witnesses() == {"t": y}

    def test_gcd_lcm(self, load):
        lasso = load("gcd_lcm").lasso
        x1, x2, y1, y2, y3, y4 = variables("x1", "x2", "y1", "y2", "y3", "y4")
        rep = check_invariant(lasso, x1 * x2 - y1 * y3 - y2 * y4)
        assert rep.ok and set(rep.witnesses().values()) == {y1 - y2}

    def test_constant_fails_stem(self, product):
        rep = check_invariant(product.lasso, Poly.const(1))
        assert not rep.stem_ok and not rep.ok

    def test_consecution_failure(self, product):
        rep = check_invariant(product.lasso, s)
        assert rep.stem_ok and not rep.consecution[0].ok and rep.witnesses() == {"t": None}

    def test_refuses_zero_and_parameters(self, product, load):
        with pytest.raises(LassoError):
            check_invariant(product.lasso, Poly.const(0))
        with pytest.raises(LassoError):
            check_invariant(load("productS").lasso, s)
        with pytest.raises(LassoError):
            check_invariant(product.lasso, Poly.var("a0"))

    @pytest.mark.parametrize("name", [n for n in PUBLISHED if not corpus.load(n).synth_vars])
    def test_witness_consistency(self, name):
        p = corpus.load(name)
        psi = parse_polynomial(PUBLISHED[name]["psi"], p.vars)
        rep = check_invariant(p.lasso, psi, exponent=corpus.degree(name))
        assert rep.ok
        for c in rep.consecution:
            t = p.lasso.transition(c.transition)
            assert witness_identity(p.lasso, psi, t, c.witness, c.exponent)

    def test_to_dict(self, product):
        d = check_invariant(product.lasso, s + x0 * y - x0 * y0).to_dict()
        assert d["ok"] and d["consecution"][0]["witness"] == "y"


class TestCheckPost:
    def test_entailed(self):
        assert check_post(s + x0 * y - x0 * y0, [y], [s - x0 * y0])

    def test_post_in_exit(self):
        assert check_post(s, [y], [y])

    def test_not_entailed(self):
        assert not check_post(s, [y], [s - x0 * y0])


class TestCheckSolution:
    def test_productS(self, load):
        p = load("productS")
        cs = assemble(p, 2)
        rep = check_solution(p, published_model(p, cs, PUBLISHED["productS"]), cs.psi_spec)
        assert rep.ok and rep.status == "certified"
        assert rep.invariant == s - x0 * y0 + x0 * y
        assert "post" in [c.name for c in rep.checks]

    def test_lambda_family(self, load):
        # y steps by -λ; only λ = 1 matches the test cases, λ = 0 never exits
        p = load("productSY")
        cs = assemble(p, 2)
        for lam in (F(1), F(2), F(0)):
            params = dict(c0=lam, c1=0, c2=0, c3=1, c4=0, c5=1, c6=-lam)
            vals = {k: F(v) for k, v in params.items()}
            vals.update(cs.psi_spec.from_polynomial(s - x0 * y0 + x0 * y))
            rep = check_solution(p, vals, cs.psi_spec)
            by_name = {c.name: c.ok for c in rep.checks}
            assert by_name["stem"] and by_name["post"]
            if lam == 1:
                assert rep.ok
            else:
                assert not by_name["testcase(0)"] and rep.status == "certification failed"

    def test_product_as_invariant_only(self, product):
        cs = assemble(product, 2)
        vals = published_model(product, cs, dict(params={}, psi="s + x0*y - x0*y0", phi={"t": "y"}))
        rep = check_solution(product, vals, cs.psi_spec)
        assert rep.ok
        assert check_post(rep.invariant, product.lasso.exit, [s - x0 * y0])

    def test_incomplete(self, load):
        p = load("productS")
        cs = assemble(p, 2)
        with pytest.raises(IncompleteModelError):
            check_solution(p, {"c0": F(1)}, cs.psi_spec)

    def test_algebraic_marked(self, load):
        p = load("productS")
        cs = assemble(p, 2)
        vals = published_model(p, cs, PUBLISHED["productS"])
        vals["c0"] = AlgebraicTerm("(root-obj (+ (^ x 2) (- 2)) 2)")
        rep = check_solution(p, vals, cs.psi_spec)
        assert rep.algebraic and not rep.ok and rep.status == "solver-certified only"

    def test_zero_template(self, product):
        cs = assemble(product, 2)
        rep = check_solution(product, {u: F(0) for u in cs.unknowns}, cs.psi_spec)
        assert not rep.ok

    def test_render_and_json(self, load):
        import json
        p = load("productS")
        cs = assemble(p, 2)
        rep = check_solution(p, published_model(p, cs, PUBLISHED["productS"]), cs.psi_spec)
        assert "[PASS] stem" in rep.render()
        assert json.loads(rep.to_json())["status"] == "certified"
