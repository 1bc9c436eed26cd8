import pytest

from strata.grammar import GrammarError, Poly, format_poly, parse_class, parse_poly, parse_scalar
from strata.ring import DegreeScalar, format_scalar, standard_ring

d = DegreeScalar.d()


@pytest.mark.parametrize(
    "text",
    ["12(d-1)(d-2)", "2(25d^2-96d+84)", "15(d-2)^2", "3d^2(d-1)", "-d(d+1)", "7"],
)
def test_scalar_round_trip(text):
    value = parse_scalar(text)
    assert format_scalar(value, True) == text
    assert parse_scalar(format_scalar(value)) == value


def test_implicit_multiplication():
    assert parse_scalar("48(15d^2-92d+135)") == 48 * (15 * d * d - 92 * d + 135)


def test_poly_arithmetic():
    p = parse_poly("a21^2-4*a02*a40")
    assert p == Poly.var("a21") ** 2 - Poly.const(4) * Poly.var("a02") * Poly.var("a40")
    assert p.variables() == {"a21", "a02", "a40"}
    assert parse_poly(format_poly(p)) == p


def test_env_substitution():
    p = parse_poly("p(p-1)/2", {"p": parse_poly("4")})
    assert p == Poly.const(6)


def test_class_with_alias_and_q():
    R = standard_ring()
    c = parse_class("(l+X)Q^2", R, env={"Q": "F+(d-2)X"}, aliases={"l": "L"})
    X, L, F = (R.gen(n) for n in "XLF")
    assert c == (L + X) * (F + X * (d - 2)) ** 2


@pytest.mark.parametrize("bad", ["(d-1", "d^", "3**", ")"])
def test_syntax_errors(bad):
    with pytest.raises(GrammarError):
        parse_scalar(bad)
