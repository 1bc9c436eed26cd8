"""Randomized property checks (hypothesis), with a sympy oracle for products."""

import sympy
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from _props import (
    check_annihilator,
    check_diagonal,
    check_exact_divide,
    check_hull,
    check_ring_axioms,
    check_staircase,
    divisor,
    element,
    staircase_applies,
    X,
    L,
    F,
)

MANY = settings(max_examples=1000, deadline=None, database=None, suppress_health_check=[HealthCheck.too_slow])
SOME = settings(max_examples=200, deadline=None, database=None, suppress_health_check=[HealthCheck.too_slow])

coeffs = st.lists(st.integers(-6, 6), min_size=1, max_size=3)
exponents = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 3))
elements = st.lists(st.tuples(exponents, coeffs), max_size=4).map(element)
linears = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-2, 2)).map(
    lambda t: X * t[0] + L * t[1] + F * t[2]
)
points = st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)), min_size=1, max_size=8)


@MANY
@given(elements, elements, elements)
def test_ring_axioms(a, b, c):
    check_ring_axioms(a, b, c)


@SOME
@given(elements, coeffs, st.sampled_from([1, -1]), st.integers(-4, 4))
def test_exact_divide_round_trip(q, scalar, sign, l_coeff):
    check_exact_divide(q, divisor(scalar, sign, l_coeff))


@SOME
@given(linears, linears, st.integers(0, 6))
def test_diagonal_symmetry_and_telescoping(a, b, n):
    check_diagonal(a, b, n)


@SOME
@given(points)
def test_hull(pts):
    check_hull(pts)


@SOME
@given(points)
def test_staircase(pts):
    assume(staircase_applies(pts))
    check_staircase(pts)


@SOME
@given(coeffs)
def test_annihilator(s):
    check_annihilator(s)


# sympy expansion followed by truncation is an independent oracle for products
_sx, _sl, _sf, _sd = sympy.symbols("X L F d")


def _to_sympy(e):
    total = sympy.Integer(0)
    for (a, b, c), coeff in e.terms.items():
        total += sum(k * _sd ** i for i, k in enumerate(coeff.coeffs)) * _sx ** a * _sl ** b * _sf ** c
    return sympy.expand(total)


def _truncate(expr):
    if expr == 0:
        return expr
    poly = sympy.Poly(expr, _sx, _sl, _sf, _sd)
    return sympy.Add(*[c * _sx ** a * _sl ** b * _sf ** f * _sd ** k for (a, b, f, k), c in poly.terms() if a < 3 and b < 3])


@settings(max_examples=100, deadline=None, database=None)
@given(elements, elements)
def test_product_matches_sympy(a, b):
    assert sympy.expand(_to_sympy(a * b) - _truncate(_to_sympy(a) * _to_sympy(b))) == 0


def test_seeded_runner_covers_every_property():
    from _props import run_seeded

    counts = run_seeded(cases=50, seed=1)
    assert counts["ring"] == 50
    assert counts["staircase"] > 0
