"""Groebner machinery and the jet-elimination pipeline.

sympy's ``groebner`` serves as an independent oracle for the small examples.
"""

import unittest

import sympy

from strata.diagram import a_series, d_series
from strata.grammar import Poly, parse_poly
from strata.ideal import (
    ComponentSpec,
    EliminationError,
    JetPoly,
    RatIdeal,
    apply_transform,
    defining_ideal,
    eliminate,
    generic_curve_jet,
    lowering_parameters,
    mutual_containment,
    saturate,
    substitute_and_inspect,
    transform_parameters,
)


def P(text):
    return parse_poly(text)


def sympy_reduced_basis(texts, gens):
    syms = sympy.symbols(gens)
    basis = sympy.groebner([sympy.sympify(t.replace("^", "**")) for t in texts], *syms, order="grevlex")
    return [P(str(sympy.expand(g)).replace("**", "^")) for g in basis.exprs]


class GroebnerTests(unittest.TestCase):
    def test_matches_sympy(self):
        cases = [
            (["x^2+y^2-1", "x*y-1"], ["x", "y"]),
            (["x^3-2*x*y", "x^2*y-2*y^2+x"], ["x", "y"]),
            (["a*b-c", "b*c-a", "c*a-b"], ["a", "b", "c"]),
        ]
        for texts, gens in cases:
            ours = RatIdeal.from_generators([P(t) for t in texts], gens)
            theirs = RatIdeal.from_generators(sympy_reduced_basis(texts, gens), gens)
            self.assertTrue(ours.contains_ideal(theirs) and theirs.contains_ideal(ours), texts)

    def test_membership(self):
        ideal = RatIdeal.from_generators([P("x^2-y"), P("y^2")], ["x", "y"])
        self.assertTrue(ideal.contains(P("x^4")))
        self.assertFalse(ideal.contains(P("x")))

    def test_unit(self):
        self.assertTrue(RatIdeal.from_generators([P("x"), P("x-1")]).is_unit())

    def test_json_round_trip(self):
        ideal = RatIdeal.from_generators([P("x^2-y"), P("x*y")], ["x", "y"])
        again = RatIdeal.from_json(ideal.to_json())
        self.assertTrue(again.contains_ideal(ideal) and ideal.contains_ideal(again))

    def test_guard(self):
        gens = [P("x^5-y^4*z"), P("y^5-z^4*x"), P("z^5-x^4*y")]
        with self.assertRaises(EliminationError):
            RatIdeal.from_generators(gens, ["x", "y", "z"], guard=3)


class EliminationTests(unittest.TestCase):
    def test_twisted_cubic(self):
        ideal = eliminate([P("x-t^2"), P("y-t^3")], ["t"])
        self.assertTrue(ideal.contains(P("y^2-x^3")))
        self.assertEqual(ideal.variables, ("x", "y"))

    def test_saturation(self):
        ideal = RatIdeal.from_generators([P("x*y"), P("x*z")], ["x", "y", "z"])
        sat = saturate(ideal, P("y"))
        self.assertTrue(sat.contains(P("x")))
        self.assertFalse(ideal.contains(P("x")))

    def test_mutual_containment(self):
        ideal = RatIdeal.from_generators([P("a"), P("b^2-c")], ["a", "b", "c"])
        self.assertEqual(mutual_containment(ideal, [P("b^2-c")]), ([], []))
        missing, extra = mutual_containment(ideal, [P("b")])
        self.assertEqual(len(missing), 1)
        self.assertEqual(len(extra), 1)


class JetTests(unittest.TestCase):
    def test_singular_jet_has_no_low_terms(self):
        f = generic_curve_jet(4, singular=True)
        for key in ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1)):
            self.assertNotIn(key, f.terms)
        self.assertIn((0, 2), f.terms)

    def test_smooth_jet(self):
        self.assertEqual(generic_curve_jet(3).coefficient(0, 1), Poly.const(1))

    def test_identity_transform(self):
        f = generic_curve_jet(4, singular=True)
        self.assertEqual(apply_transform(f, 4, []), f)

    def test_transform_truncates(self):
        x2 = JetPoly(3, {(0, 1): Poly.const(1)})
        out = apply_transform(x2 * x2, 3, [(2, 1, 0)])
        # (x2 + A x1)^2 up to order 3
        self.assertEqual(out.coefficient(2, 0), P("A2_10^2"))

    def test_lowering_subset(self):
        diag = a_series(4).diagram
        low = lowering_parameters(diag, 4)
        self.assertTrue(set(low) < set(transform_parameters(4)))
        self.assertIn((2, 2, 0), low)


class PipelineTests(unittest.TestCase):
    def test_a3_is_a_single_coefficient(self):
        # A_3 at the tangent line x2 = 0: x1^3 must vanish, nothing else
        ideal = defining_ideal(a_series(3))
        self.assertTrue(ideal.contains(P("a30")))

    def test_a4(self):
        ideal = defining_ideal(a_series(4))
        self.assertTrue(ideal.contains(P("4*a02*a40-a21^2")))
        self.assertTrue(ideal.contains(P("a30")))
        self.assertEqual(mutual_containment(ideal, [P("4*a02*a40-a21^2")]), ([], []))

    def test_a4_inspection(self):
        ideal = defining_ideal(a_series(4))
        report = substitute_and_inspect(ideal, "a02", [ComponentSpec("D_5", ("a02", "a21"), "a21", None, 2)])
        self.assertTrue(report.ok)
        self.assertEqual(report.components[0].multiplicity, 2)
        self.assertIn("components", report.to_json())

    def test_inspection_of_absent_variable(self):
        ideal = defining_ideal(a_series(3))
        report = substitute_and_inspect(ideal, "a77")
        self.assertTrue(report.unchanged)

    def test_d5_kills_a02(self):
        self.assertTrue(defining_ideal(d_series(5)).contains(P("a02")))


if __name__ == "__main__":
    unittest.main()
