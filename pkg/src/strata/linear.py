"""Lifted classes of linear strata.

A linear stratum is lifted to tuples ``(x, l, f, B_1, ..., B_k)`` cut out by a
chain of proportionality conditions between symmetric forms.  The class is a
product of diagonal classes; the Gysin projection extracts the top powers of
the auxiliary generators and then the coefficient of ``X^2 L^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

from .diagram import (
    DiagramError,
    SingularityDescriptor,
    Staircase,
)
from .ring import (
    ClassElement,
    DegreeScalar,
    RingSpec,
    diagonal_class,
    extract_coefficient,
    mul,
    standard_ring,
)


class ChainError(ValueError):
    pass


def n_entries(order: int) -> int:
    """Independent entries of a symmetric form of the given order in 3 variables."""
    return math.comb(order + 2, 2)


@dataclass(frozen=True)
class FormSpec:
    """One side of a condition.

    ``kind="f"``: the derivative ``f^(order)`` at ``x``.
    ``kind="aux"``: auxiliary form ``B_index`` (of order ``aux_order``)
    contracted ``contractions`` times with ``x``.
    ``kind="sym"``: ``SYM(l^l_power, B_index)``; ``index=None`` means a pure
    power of ``l``.
    """

    kind: Literal["f", "aux", "sym"]
    order: int
    index: int | None = None
    contractions: int = 0
    l_power: int = 0

    def describe(self) -> str:
        if self.kind == "f":
            return f"f^({self.order})"
        if self.kind == "aux":
            x = "x" if self.contractions == 1 else f"x^{self.contractions}"
            return f"B{self.index}({x})" if self.contractions else f"B{self.index}"
        if self.index is None:
            return "l" if self.l_power == 1 else f"l^{self.l_power}"
        return f"SYM(l^{self.l_power}, B{self.index}^({self.order - self.l_power}))"


@dataclass(frozen=True)
class ChainCondition:
    kind: Literal["incidence", "proportionality", "vanishing"]
    lhs: FormSpec | None = None
    rhs: FormSpec | None = None
    N: int = 0

    def describe(self) -> str:
        if self.kind == "incidence":
            return "l(x) = 0"
        if self.kind == "vanishing":
            return f"{self.lhs.describe()} = 0"
        return f"{self.lhs.describe()} ~ {self.rhs.describe()}"


@dataclass(frozen=True)
class LiftChain:
    conditions: tuple[ChainCondition, ...]
    auxiliaries: tuple[tuple[str, int, int], ...]  # (symbol, form order, nilpotency)

    def ring(self, degree_cap: int | None = None) -> RingSpec:
        return standard_ring(*[(name, nilp) for name, _, nilp in self.auxiliaries], degree_cap=degree_cap)

    @property
    def has_incidence(self) -> bool:
        return any(c.kind == "incidence" for c in self.conditions)

    def describe(self) -> list[str]:
        return [c.describe() for c in self.conditions]


def staircase_groups(stair: Staircase) -> list[tuple[int, int]]:
    """Group rows by ``P_m = i_m + m``; returns ``(P, mu)`` with ``mu`` one past the group's last row."""
    groups: list[tuple[int, int]] = []
    for m, h in enumerate(stair.heights):
        p = h + m
        if groups and groups[-1][0] == p:
            groups[-1] = (p, m + 1)
        elif groups and p > groups[-1][0]:
            raise ChainError(f"staircase {stair.heights} has increasing total order")
        else:
            groups.append((p, m + 1))
    return groups


def build_chain(stair: Staircase) -> LiftChain:
    """Condition chain of the lifted stratum for the given staircase.

    Rows sharing ``P = i_m + m`` say that ``f^(P)`` is divisible by a power of
    ``l``; each new group restricts the cofactor of the previous group after
    contracting with ``x``.
    """
    if not stair.heights:
        raise ChainError("empty staircase")
    for a, b in zip(stair.heights, stair.heights[1:]):
        if not a > b:
            raise ChainError(f"staircase heights must strictly decrease: {stair.heights}")
    groups = staircase_groups(stair)
    p1, mu1 = groups[0]
    if mu1 > p1:
        if len(groups) > 1:
            raise ChainError(f"staircase {stair.heights}: conditions beyond a vanishing derivative")
        cond = ChainCondition("vanishing", FormSpec("f", p1))
        return LiftChain((cond,), ())

    conds = [ChainCondition("incidence")]
    aux: list[tuple[str, int, int]] = []

    def new_aux(order: int) -> int:
        aux.append((f"B{len(aux) + 1}", order, n_entries(order)))
        return len(aux)

    if mu1 == p1:
        rhs = FormSpec("sym", p1, None, l_power=p1)
        current = None
    else:
        idx = new_aux(p1 - mu1)
        rhs = FormSpec("sym", p1, idx, l_power=mu1)
        current = idx
    conds.append(ChainCondition("proportionality", FormSpec("f", p1), rhs, n_entries(p1) - 1))

    prev_p, prev_mu = p1, mu1
    for p, mu in groups[1:]:
        if current is None:
            raise ChainError(f"staircase {stair.heights}: condition after a pure power of l")
        order_b = aux[current - 1][1]
        c = prev_p - p
        o = order_b - c
        need = mu - prev_mu
        if o < 0:
            raise ChainError(f"staircase {stair.heights}: over-contracted auxiliary form")
        lhs = FormSpec("aux", o, current, contractions=c)
        if need > o:
            conds.append(ChainCondition("vanishing", lhs))
            current = None
        elif need == o:
            conds.append(ChainCondition("proportionality", lhs, FormSpec("sym", o, None, l_power=o), n_entries(o) - 1))
            current = None
        else:
            idx = new_aux(o - need)
            conds.append(
                ChainCondition("proportionality", lhs, FormSpec("sym", o, idx, l_power=need), n_entries(o) - 1)
            )
            current = idx
        prev_p, prev_mu = p, mu
    if current is not None:
        raise ChainError(f"staircase {stair.heights}: auxiliary form B{current} left unconstrained")
    return LiftChain(tuple(conds), tuple(aux))


def element_class(spec: FormSpec, ring: RingSpec) -> ClassElement:
    """First Chern class of the line bundle carrying the entries of ``spec``."""
    X, L = ring.gen("X"), ring.gen("L")
    if spec.kind == "f":
        return X * DegreeScalar.linear(1, -spec.order) + ring.gen("F")
    if spec.kind == "aux":
        return ring.gen(f"B{spec.index}") + X * spec.contractions
    out = L * spec.l_power
    if spec.index is not None:
        out = out + ring.gen(f"B{spec.index}")
    return out


def condition_class(cond: ChainCondition, ring: RingSpec) -> ClassElement:
    if cond.kind == "incidence":
        return ring.gen("L") + ring.gen("X")
    lhs = element_class(cond.lhs, ring)
    if cond.kind == "vanishing":
        return lhs ** n_entries(cond.lhs.order)
    return diagonal_class(lhs, element_class(cond.rhs, ring), cond.N)


def _require_generators(chain: LiftChain, ring: RingSpec) -> None:
    for name in ("X", "L", "F"):
        if name not in ring:
            raise ChainError(f"ring lacks generator {name}")
    for name, _, nilp in chain.auxiliaries:
        if name not in ring:
            raise ChainError(f"ring lacks auxiliary generator {name}")
        if ring.nilpotency[ring.index(name)] != nilp:
            raise ChainError(f"auxiliary {name} needs nilpotency {nilp}")


def chain_class(chain: LiftChain, ring: RingSpec | None = None) -> ClassElement:
    """Product of the condition classes (auxiliaries not yet projected)."""
    ring = ring or chain.ring()
    _require_generators(chain, ring)
    out = ring.one()
    for cond in chain.conditions:
        out = mul(out, condition_class(cond, ring))
    return out


def project_auxiliary(c: ClassElement) -> ClassElement:
    """Coefficient of the top powers of all auxiliary generators, as an ``(X, L, F)`` class."""
    ring = c.ring
    tops = {name: nilp - 1 for name, nilp in ring.generators if name not in ("X", "L", "F")}
    if not tops:
        return c
    return extract_coefficient(c, tops)


def _take_top(e: ClassElement, idx: int, top: int) -> ClassElement:
    """Keep terms with exponent ``top`` at position ``idx`` and clear that exponent."""
    terms = {}
    for exp, coeff in e.terms.items():
        if exp[idx] == top:
            terms[exp[:idx] + (0,) + exp[idx + 1 :]] = coeff
    return ClassElement(e.ring, terms)


def projected_chain_class(chain: LiftChain) -> ClassElement:
    """Same as ``project_auxiliary(chain_class(chain))``, extracting each auxiliary as soon as it is complete."""
    ring = chain.ring()
    last_use: dict[int, int] = {}
    for k, cond in enumerate(chain.conditions):
        for side in (cond.lhs, cond.rhs):
            if side is not None and side.index is not None:
                last_use[side.index] = k
    out = ring.one()
    for k, cond in enumerate(chain.conditions):
        out = mul(out, condition_class(cond, ring))
        for index, pos in last_use.items():
            if pos == k:
                name, _, nilp = chain.auxiliaries[index - 1]
                out = _take_top(out, ring.index(name), nilp - 1)
    if not chain.auxiliaries:
        return out
    return extract_coefficient(out, {name: 0 for name, _, _ in chain.auxiliaries})


@lru_cache(maxsize=None)
def _multidegree_for_stair(heights: tuple[int, ...]) -> ClassElement:
    return projected_chain_class(build_chain(Staircase(heights)))


def multidegree(desc: SingularityDescriptor) -> ClassElement:
    """Lifted class in ``(X, L, F)`` of a linear stratum.

    A descriptor carrying an explicit ``chain_staircase`` is accepted even when
    its diagram fails the slope test.
    """
    if (not desc.linear or desc.newton_degenerate) and desc.chain_staircase is None:
        raise ChainError(f"{desc.name} is not linear; resolve it through degenerations")
    return _multidegree_for_stair(desc.stair.heights)


def is_ordinary(desc: SingularityDescriptor) -> bool:
    try:
        chain = build_chain(desc.stair)
    except (ChainError, DiagramError):
        return False
    return not chain.has_incidence


def gysin_degree(c: ClassElement, with_l: bool = True) -> DegreeScalar:
    """Coefficient of ``X^2 L^2`` (or ``X^2`` when ``with_l`` is false) as a single DegreeScalar.

    Raises if the projected class is not a single power of ``F``.
    """
    mono = {"X": 2, "L": 2 if with_l else 0}
    rest = extract_coefficient(c, mono)
    if rest.is_zero():
        return DegreeScalar()
    if len(rest) != 1:
        raise ChainError(f"projected class is not a single F power: {rest}")
    ((_, value),) = rest.terms.items()
    return value


def codimension_of(c: ClassElement, with_l: bool = True) -> int:
    """Exponent of ``F`` in the degree monomial."""
    rest = extract_coefficient(c, {"X": 2, "L": 2 if with_l else 0})
    degrees = {exp[rest.ring.index("F")] for exp in rest.terms}
    if len(degrees) != 1:
        raise ChainError(f"cannot read codimension from {rest}")
    return degrees.pop()


def degree(desc: SingularityDescriptor) -> DegreeScalar:
    """Degree of the stratum: ``X^2 L^2`` coefficient, or ``X^2`` for ordinary points."""
    c = multidegree(desc)
    return gysin_degree(c, with_l=not is_ordinary(desc))


def ordinary_point_degree(p: int) -> DegreeScalar:
    """Degree of the stratum of points with ``f^(p) = 0``, i.e. multiplicity ``p + 1``."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    n = n_entries(p)
    return DegreeScalar.const(math.comb(n, 2)) * DegreeScalar.linear(1, -p) ** 2


def ordinary_point_class(p: int, ring: RingSpec | None = None) -> ClassElement:
    ring = ring or standard_ring()
    q = ring.gen("X") * DegreeScalar.linear(1, -p) + ring.gen("F")
    return q ** n_entries(p)
