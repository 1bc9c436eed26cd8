"""Property checks shared by the hypothesis tests and the acceptance suite."""

import random

from strata.diagram import diagram_from_monomials, is_linear, staircase
from strata.ring import DegreeScalar, diagonal_class, exact_divide, standard_ring

R = standard_ring()
X, L, F = (R.gen(n) for n in "XLF")


def element(terms):
    """``terms``: iterable of ``((x, l, f), coeffs)``."""
    out = R.zero()
    for (a, b, c), coeffs in terms:
        out = out + R.monomial({"X": a, "L": b, "F": c}, DegreeScalar(coeffs))
    return out


def divisor(scalar, sign, l_coeff):
    return X * DegreeScalar(scalar) + F * sign + L * l_coeff


def check_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * R.one() == a
    assert a + R.zero() == a
    assert (a - a).is_zero()


def check_exact_divide(q, div):
    assert exact_divide(q * div, div) == q


def check_diagonal(a, b, n):
    assert diagonal_class(a, b, n) == diagonal_class(b, a, n)
    assert (a - b) * diagonal_class(a, b, n) == a ** (n + 1) - b ** (n + 1)


def check_hull(pts):
    diag = diagram_from_monomials(pts)
    assert diagram_from_monomials(diag.vertices) == diag
    assert not any(diag.is_under(i, j) for i, j in pts)
    assert is_linear(diag) == is_linear(diag.transpose())


def staircase_applies(pts) -> bool:
    """Singular germs in preliminary-form orientation: no slope steeper than 1."""
    if not all(i + j >= 2 for i, j in pts):
        return False
    return all(-s <= 1 for s in diagram_from_monomials(pts).slopes())


def check_staircase(pts):
    diag = diagram_from_monomials(pts)
    stair = staircase(diag)
    assert all(a > b for a, b in zip(stair.heights, stair.heights[1:]))
    assert stair.count() == len(diag.under_points())


def check_annihilator(s):
    x, l = X * DegreeScalar(s), L * DegreeScalar(s)
    assert ((l + x) * (x * x - x * l + l * l)).is_zero()
    assert ((L + X) * (X * X - X * L + L * L)).is_zero()


# seeded generators for the acceptance run ------------------------------------


def random_scalar(rng: random.Random):
    return [rng.randint(-6, 6) for _ in range(rng.randint(1, 3))]


def random_element(rng: random.Random):
    return element(
        ((rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 3)), random_scalar(rng))
        for _ in range(rng.randint(0, 4))
    )


def random_linear(rng: random.Random):
    return X * rng.randint(-3, 3) + L * rng.randint(-3, 3) + F * rng.randint(-2, 2)


def random_points(rng: random.Random):
    return [(rng.randint(0, 9), rng.randint(0, 9)) for _ in range(rng.randint(1, 8))]


def run_seeded(cases: int = 1000, seed: int = 20240601) -> dict[str, int]:
    """Run every check on seeded random inputs; returns the case count per property."""
    rng = random.Random(seed)
    counts = dict.fromkeys(("ring", "divide", "diagonal", "hull", "staircase", "annihilator"), 0)
    for _ in range(cases):
        check_ring_axioms(random_element(rng), random_element(rng), random_element(rng))
        counts["ring"] += 1
        check_exact_divide(
            random_element(rng), divisor(random_scalar(rng), rng.choice((1, -1)), rng.randint(-4, 4))
        )
        counts["divide"] += 1
        check_diagonal(random_linear(rng), random_linear(rng), rng.randint(0, 6))
        counts["diagonal"] += 1
        pts = random_points(rng)
        check_hull(pts)
        counts["hull"] += 1
        if staircase_applies(pts):
            check_staircase(pts)
            counts["staircase"] += 1
        check_annihilator(random_scalar(rng))
        counts["annihilator"] += 1
    return counts
