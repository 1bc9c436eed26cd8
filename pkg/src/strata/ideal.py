"""Elimination of coordinate-change parameters on truncated jets.

A germ with a singular point at the origin is written as a :class:`JetPoly`
whose coefficients are polynomials in symbols ``a{i}{j}``.  A parametrized
analytic change of coordinates is applied, the coefficients under a Newton
diagram are required to vanish, and the transformation parameters are
eliminated with a small Buchberger implementation over ``Fraction``.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .diagram import NewtonDiagram, SingularityDescriptor, determinacy
from .grammar import Poly, format_poly, parse_poly


class EliminationError(RuntimeError):
    """Raised when the degree guard stops a Groebner computation."""


def coeff_name(i: int, j: int) -> str:
    return f"a{i}{j}" if i < 10 and j < 10 else f"a{i}_{j}"


def param_name(k: int, i: int, j: int) -> str:
    return f"A{k}_{i}{j}" if i < 10 and j < 10 else f"A{k}_{i}_{j}"


# jets -----------------------------------------------------------------------


class JetPoly:
    """Truncated power series in ``x1, x2`` with polynomial coefficients."""

    __slots__ = ("order", "terms")

    def __init__(self, order: int, terms: Mapping[tuple[int, int], Poly] | None = None):
        self.order = order
        self.terms: dict[tuple[int, int], Poly] = {}
        for (i, j), c in (terms or {}).items():
            if i + j <= order and c.terms:
                self.terms[(i, j)] = c

    def coefficient(self, i: int, j: int) -> Poly:
        return self.terms.get((i, j), Poly())

    def __add__(self, other: "JetPoly") -> "JetPoly":
        order = min(self.order, other.order)
        out = {k: v for k, v in self.terms.items() if sum(k) <= order}
        for k, v in other.terms.items():
            if sum(k) <= order:
                out[k] = out[k] + v if k in out else v
        return JetPoly(order, out)

    def __mul__(self, other: "JetPoly") -> "JetPoly":
        order = min(self.order, other.order)
        out: dict[tuple[int, int], Poly] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                if sum(k) > order:
                    continue
                prod = c1 * c2
                out[k] = out[k] + prod if k in out else prod
        return JetPoly(order, out)

    def scale(self, c: Poly) -> "JetPoly":
        return JetPoly(self.order, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, JetPoly) and self.order == other.order and self.terms == other.terms

    def symbols(self) -> set[str]:
        return set().union(*(c.variables() for c in self.terms.values())) if self.terms else set()

    def __repr__(self):
        parts = [f"({format_poly(c)})*x1^{i}*x2^{j}" for (i, j), c in sorted(self.terms.items())]
        return f"JetPoly(order={self.order}, {' + '.join(parts) or '0'})"


def _monomial_jet(order: int, i: int, j: int, c: Poly | None = None) -> JetPoly:
    return JetPoly(order, {(i, j): c if c is not None else Poly.const(1)})


def generic_curve_jet(order: int, singular: bool = False) -> JetPoly:
    """Generic germ tangent to ``{x2 = 0}`` at the origin.

    The smooth variant is ``x2 + sum a_ij x1^i x2^j`` over ``i + j >= 2``.  The
    singular variant drops the linear part and the ``x1^2, x1 x2`` terms, so its
    2-jet is ``a02 x2^2``.
    """
    if order < 2:
        raise ValueError(f"jet order must be >= 2, got {order}")
    terms = {} if singular else {(0, 1): Poly.const(1)}
    for total in range(2, order + 1):
        for i in range(total + 1):
            j = total - i
            if singular and (i, j) in ((2, 0), (1, 1)):
                continue
            terms[(i, j)] = Poly.var(coeff_name(i, j))
    return JetPoly(order, terms)


def transform_parameters(max_degree: int) -> list[tuple[int, int, int]]:
    """All ``(k, i, j)`` with ``2 <= i + j <= max_degree``: ``x_k -> x_k + A{k}_ij x1^i x2^j``."""
    return [(k, i, t - i) for k in (1, 2) for t in range(2, max_degree + 1) for i in range(t, -1, -1)]


def lowering_parameters(diag: NewtonDiagram, max_degree: int) -> list[tuple[int, int, int]]:
    """Parameters whose monomial has lower weight than ``x_k`` for some segment of ``diag``.

    Substitutions that do not lower any segment weight map the set of germs in
    preliminary form to itself, so they add nothing to the eliminated ideal.
    """
    lines = diag._lines()
    out = []
    for k, i, j in transform_parameters(max_degree):
        for slope, _ in lines:
            # weights w1 = slope, w2 = 1 for the line j + slope * i = c
            w = slope * i + j
            wk = slope if k == 1 else 1
            if w < wk:
                out.append((k, i, j))
                break
    return out


def apply_transform(f: JetPoly, order: int, params: Iterable[tuple[int, int, int]] | None = None) -> JetPoly:
    """Substitute ``x1 -> x1 + u``, ``x2 -> x2 + v`` with symbolic ``u, v`` of order >= 2.

    ``params`` selects the monomials of ``u`` (k=1) and ``v`` (k=2); by default
    all of total degree ``2 .. order - 1``.  The result is truncated at ``order``.
    """
    if params is None:
        params = transform_parameters(order - 1)
    x1 = _monomial_jet(order, 1, 0)
    x2 = _monomial_jet(order, 0, 1)
    for k, i, j in params:
        term = _monomial_jet(order, i, j, Poly.var(param_name(k, i, j)))
        if k == 1:
            x1 = x1 + term
        elif k == 2:
            x2 = x2 + term
        else:
            raise ValueError(f"bad transformation index {k}")
    pow1 = [_monomial_jet(order, 0, 0)]
    pow2 = [_monomial_jet(order, 0, 0)]
    top = max((i for i, _ in f.terms), default=0), max((j for _, j in f.terms), default=0)
    for _ in range(top[0]):
        pow1.append(pow1[-1] * x1)
    for _ in range(top[1]):
        pow2.append(pow2[-1] * x2)
    out = JetPoly(order)
    for (i, j), c in f.terms.items():
        out = out + (pow1[i] * pow2[j]).scale(c)
    return out


def preliminary_form_equations(f: JetPoly, diag: NewtonDiagram) -> list[Poly]:
    """Coefficients of ``f`` at the lattice points strictly under ``diag`` (zero ones omitted)."""
    points = diag.under_points()
    need = max((p.i + p.j for p in points), default=0)
    if need > f.order:
        raise ValueError(f"jet truncated at {f.order} but the diagram needs order {need}")
    return [c for c in (f.coefficient(p.i, p.j) for p in points) if c.terms]


# Groebner bases ---------------------------------------------------------------

Exp = tuple[int, ...]
Dense = dict[Exp, Fraction]


class _Order:
    """Block order: grevlex on ``blocks[0]``, ties broken by grevlex on ``blocks[1]``, ..."""

    def __init__(self, blocks: Sequence[Sequence[str]]):
        self.vars: tuple[str, ...] = tuple(v for b in blocks for v in b)
        self.index = {v: k for k, v in enumerate(self.vars)}
        bounds, start = [], 0
        for b in blocks:
            bounds.append((start, start + len(b)))
            start += len(b)
        self.bounds = bounds

    def key(self, e: Exp):
        out = []
        for lo, hi in self.bounds:
            part = e[lo:hi]
            out.append(sum(part))
            out.extend(-x for x in reversed(part))
        return tuple(out)

    def dense(self, p: Poly) -> Dense:
        out: Dense = {}
        n = len(self.vars)
        for mono, c in p.terms.items():
            e = [0] * n
            for name, k in mono:
                try:
                    e[self.index[name]] = k
                except KeyError:
                    raise ValueError(f"variable {name!r} not in the order") from None
            out[tuple(e)] = c
        return out

    def sparse(self, p: Dense) -> Poly:
        return Poly({tuple((self.vars[k], x) for k, x in enumerate(e) if x): c for e, c in p.items()})


class _GB:
    def __init__(self, order: _Order, guard: int):
        self.order = order
        self.guard = guard
        self.basis: list[tuple[Exp, Dense]] = []

    def lead(self, p: Dense) -> Exp:
        return max(p, key=self.order.key)

    def monic(self, p: Dense) -> tuple[Exp, Dense]:
        lm = self.lead(p)
        c = p[lm]
        return lm, {e: v / c for e, v in p.items()}

    def reduce(self, p: Dense, basis=None) -> Dense:
        basis = self.basis if basis is None else basis
        p = dict(p)
        rem: Dense = {}
        key = self.order.key
        while p:
            lm = max(p, key=key)
            c = p[lm]
            for glm, g in basis:
                if all(a >= b for a, b in zip(lm, glm)):
                    shift = tuple(a - b for a, b in zip(lm, glm))
                    for e, v in g.items():
                        t = tuple(x + y for x, y in zip(e, shift))
                        nv = p.get(t, 0) - c * v
                        if nv:
                            p[t] = nv
                        else:
                            p.pop(t, None)
                    break
            else:
                rem[lm] = c
                del p[lm]
        return rem

    def spoly(self, a: tuple[Exp, Dense], b: tuple[Exp, Dense]) -> Dense:
        (la, pa), (lb, pb) = a, b
        lcm = tuple(max(x, y) for x, y in zip(la, lb))
        if sum(lcm) > self.guard:
            raise EliminationError(
                f"S-polynomial degree {sum(lcm)} exceeds guard {self.guard} "
                f"with {len(self.basis)} basis elements so far"
            )
        out: Dense = {}
        for poly, lead, sign in ((pa, la, 1), (pb, lb, -1)):
            shift = tuple(x - y for x, y in zip(lcm, lead))
            for e, v in poly.items():
                t = tuple(x + y for x, y in zip(e, shift))
                nv = out.get(t, 0) + sign * v
                if nv:
                    out[t] = nv
                else:
                    out.pop(t, None)
        return out

    def run(self, polys: Iterable[Dense]) -> list[tuple[Exp, Dense]]:
        """Buchberger with the Gebauer-Moeller pair criteria and normal selection."""
        self.basis = []
        live: set[int] = set()
        pairs: set[tuple[int, int]] = set()
        for p in polys:
            r = self.reduce(p, [self.basis[k] for k in live])
            if r:
                self.basis.append(self.monic(r))
                live, pairs = self._update(live, pairs, len(self.basis) - 1)
        while pairs:
            pair = min(pairs, key=lambda ij: self.order.key(self._lcm(*ij)))
            pairs.discard(pair)
            i, j = pair
            r = self.reduce(self.spoly(self.basis[i], self.basis[j]), [self.basis[k] for k in live])
            if r:
                self.basis.append(self.monic(r))
                live, pairs = self._update(live, pairs, len(self.basis) - 1)
        return self._interreduce([self.basis[k] for k in live])

    def _lcm(self, i: int, j: int) -> Exp:
        return _lcm(self.basis[i][0], self.basis[j][0])

    def _update(self, live: set[int], pairs: set[tuple[int, int]], h: int):
        mh = self.basis[h][0]
        candidates = sorted(live)
        kept: list[int] = []
        for k, g in enumerate(candidates):
            mg = self.basis[g][0]
            l_hg = _lcm(mh, mg)
            if _coprime(mh, mg):
                kept.append(g)
                continue
            others = candidates[k + 1 :] + kept
            if not any(_divides(_lcm(mh, self.basis[o][0]), l_hg) for o in others):
                kept.append(g)
        new_pairs = {(h, g) for g in kept if not _coprime(mh, self.basis[g][0])}
        old = set()
        for a, b in pairs:
            l_ab = self._lcm(a, b)
            if (
                not _divides(mh, l_ab)
                or _lcm(self.basis[a][0], mh) == l_ab
                or _lcm(self.basis[b][0], mh) == l_ab
            ):
                old.add((a, b))
        live = {g for g in live if not _divides(mh, self.basis[g][0])}
        live.add(h)
        return live, old | new_pairs

    def _interreduce(self, basis: list[tuple[Exp, Dense]]) -> list[tuple[Exp, Dense]]:
        basis = sorted(basis, key=lambda g: self.order.key(g[0]))
        minimal: list[tuple[Exp, Dense]] = []
        for lm, g in basis:
            if not any(_divides(o[0], lm) for o in minimal):
                minimal.append((lm, g))
        reduced = []
        for k, (lm, g) in enumerate(minimal):
            rest = minimal[:k] + minimal[k + 1 :]
            tail = {e: v for e, v in g.items() if e != lm}
            red = self.reduce(tail, rest) if tail else {}
            red[lm] = Fraction(1)
            reduced.append((lm, red))
        self.basis = reduced
        return reduced


def _lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def _divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _coprime(a: Exp, b: Exp) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _primitive(p: Poly) -> Poly:
    """Integer coefficients with no common factor, leading coefficient positive."""
    if not p.terms:
        return p
    den = math.lcm(*(c.denominator for c in p.terms.values()))
    num = math.gcd(*(int(c * den) for c in p.terms.values()))
    scale = Fraction(den, num)
    lead = max(p.terms, key=lambda m: (sum(e for _, e in m), m))
    if p.terms[lead] < 0:
        scale = -scale
    return Poly({m: c * scale for m, c in p.terms.items()})


def _variables(polys: Iterable[Poly]) -> set[str]:
    out: set[str] = set()
    for p in polys:
        out |= p.variables()
    return out


@dataclass
class RatIdeal:
    """Ideal over Q with a fixed (grevlex) variable order; generators form a reduced Groebner basis."""

    generators: list[Poly]
    variables: tuple[str, ...]
    guard: int = 20
    _gb: _GB | None = field(default=None, repr=False, compare=False)

    @classmethod
    def from_generators(cls, gens: Iterable[Poly], variables: Sequence[str] | None = None, guard: int = 20) -> "RatIdeal":
        gens = [g for g in gens if g.terms]
        variables = tuple(variables) if variables is not None else tuple(sorted(_variables(gens)))
        order = _Order([variables])
        gb = _GB(order, guard)
        basis = gb.run(order.dense(g) for g in gens)
        out = [_primitive(order.sparse(g)) for _, g in basis]
        return cls(out, variables, guard, gb)

    def _basis(self) -> _GB:
        if self._gb is None:
            rebuilt = RatIdeal.from_generators(self.generators, self.variables, self.guard)
            self._gb = rebuilt._gb
        return self._gb

    def _extend(self, names: Iterable[str]) -> "RatIdeal":
        extra = [n for n in sorted(set(names)) if n not in self.variables]
        if not extra:
            return self
        return RatIdeal.from_generators(self.generators, self.variables + tuple(extra), self.guard)

    def reduce(self, p: Poly) -> Poly:
        ideal = self._extend(p.variables())
        gb = ideal._basis()
        return gb.order.sparse(gb.reduce(gb.order.dense(p)))

    def contains(self, p: Poly) -> bool:
        return not self.reduce(p).terms

    def contains_ideal(self, other: "RatIdeal | Iterable[Poly]") -> bool:
        gens = other.generators if isinstance(other, RatIdeal) else list(other)
        return all(self.contains(g) for g in gens)

    def substitute(self, values: Mapping[str, Poly | int]) -> "RatIdeal":
        subs = {k: v if isinstance(v, Poly) else Poly.const(v) for k, v in values.items()}
        gens = [substitute(g, subs) for g in self.generators]
        return RatIdeal.from_generators(gens, [v for v in self.variables if v not in subs], self.guard)

    def is_unit(self) -> bool:
        return any(not g.variables() for g in self.generators)

    def linear_variables(self) -> list[str]:
        """Variables that are themselves generators (coefficients forced to vanish)."""
        out = []
        for g in self.generators:
            if len(g.terms) == 1:
                ((mono, _),) = g.terms.items()
                if len(mono) == 1 and mono[0][1] == 1:
                    out.append(mono[0][0])
        return out

    def to_json(self) -> dict:
        return {"vars": list(self.variables), "generators": [format_poly(g) for g in self.generators]}

    @classmethod
    def from_json(cls, data: Mapping) -> "RatIdeal":
        return cls.from_generators([parse_poly(g) for g in data["generators"]], data["vars"])

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def substitute(p: Poly, values: Mapping[str, Poly]) -> Poly:
    out = Poly()
    for mono, c in p.terms.items():
        term = Poly.const(c)
        for name, k in mono:
            term = term * (values[name] ** k if name in values else Poly({((name, k),): 1}))
        out = out + term
    return out


def eliminate(eqs: Sequence[Poly], drop: Iterable[str], degree_guard: int = 20, keep: Sequence[str] | None = None) -> RatIdeal:
    """Intersection of ``(eqs)`` with the subring free of the ``drop`` variables.

    Uses a block order with the dropped block first; the retained variables
    keep the order given by ``keep`` (sorted names by default).
    """
    eqs = [e for e in eqs if e.terms]
    present = _variables(eqs)
    drop = [v for v in sorted(set(drop)) if v in present]
    kept = [v for v in (keep if keep is not None else sorted(present)) if v not in drop]
    kept += sorted(present - set(drop) - set(kept))
    order = _Order([drop, kept])
    gb = _GB(order, degree_guard)
    basis = gb.run(order.dense(e) for e in eqs)
    nd = len(drop)
    retained = [g for lm, g in basis if not any(lm[:nd])]
    sub = _Order([kept])
    gens = []
    for g in retained:
        sparse = order.sparse(g)
        gens.append(sparse)
    return RatIdeal.from_generators(gens, kept, degree_guard) if gens else RatIdeal([], tuple(kept), degree_guard, _GB(sub, degree_guard))


def saturate(ideal: RatIdeal, g: Poly) -> RatIdeal:
    """``I : g^infinity`` via an auxiliary variable ``t`` with ``t*g = 1``."""
    t = "_t"
    eqs = list(ideal.generators) + [Poly.const(1) - Poly.var(t) * g]
    out = eliminate(eqs, [t], ideal.guard, keep=ideal.variables)
    return out._extend(ideal.variables)


# the pipeline -------------------------------------------------------------------


def defining_ideal(
    desc: SingularityDescriptor,
    jet_order: int | None = None,
    fixed_degree: int | None = None,
    degree_guard: int = 20,
    all_parameters: bool = False,
    saturate_by: Sequence[str] = (),
) -> RatIdeal:
    """Locally defining ideal of ``desc`` at a point with tangent ``{x2 = 0}``.

    With ``fixed_degree`` the germ is the whole affine curve of that degree.
    Only weight-lowering transformation parameters are used unless
    ``all_parameters`` is set.  Each coefficient in ``saturate_by`` is then
    saturated out, removing components on which it vanishes identically.
    """
    diag = desc.diagram
    det = determinacy(desc)
    work = max((p.i + p.j for p in diag.under_points()), default=2)
    if fixed_degree is not None:
        f = generic_curve_jet(fixed_degree, singular=True)
    else:
        f = generic_curve_jet(jet_order or det + 1, singular=True)
    f = JetPoly(max(work, f.order), f.terms)
    params = transform_parameters(det - 1) if all_parameters else lowering_parameters(diag, det - 1)
    g = apply_transform(f, work, params)
    eqs = preliminary_form_equations(g, diag)
    names = [param_name(*p) for p in params]
    keep = sorted(f.symbols(), key=_coeff_key)
    ideal = eliminate(eqs, names, degree_guard, keep=keep)
    for name in saturate_by:
        ideal = saturate(ideal, Poly.var(name))
    return ideal


def _coeff_key(name: str):
    """Order ``a{i}{j}`` by total degree, then name."""
    m = re.fullmatch(r"a(\d)(\d)|a(\d+)_(\d+)", name)
    if not m:
        return (10**6, name)
    i, j = (int(x) for x in (m.group(1, 2) if m.group(1) else m.group(3, 4)))
    return (i + j, name)


def mutual_containment(computed: RatIdeal, printed: Sequence[Poly]) -> tuple[list[Poly], list[Poly]]:
    """Compare a computed ideal with printed generators.

    The printed list is taken together with the computed single-variable
    generators (vanishing coefficients, which printed ideals usually omit).
    Returns ``(printed generators missing from computed, computed generators
    missing from printed)``.
    """
    linear = [Poly.var(v) for v in computed.linear_variables()]
    reference = RatIdeal.from_generators(list(printed) + linear, computed.variables, computed.guard)
    missing = [p for p in printed if not computed.contains(p)]
    extra = [g for g in computed.generators if not reference.contains(g)]
    return missing, extra


# inspection -------------------------------------------------------------------------


@dataclass(frozen=True)
class ComponentSpec:
    """A claimed component after a substitution.

    ``vanishing`` lists coefficients zero on the component, ``generic`` one that
    is generically non-zero on it (used to localize away from other components)
    and ``distinguished`` the variable whose nilpotency order measures the
    multiplicity.
    """

    name: str
    vanishing: tuple[str, ...]
    distinguished: str
    generic: str | None = None
    multiplicity: int | None = None


@dataclass
class ComponentResult:
    name: str
    powers: dict[str, int | None]
    multiplicity: int | None
    expected: int | None

    @property
    def ok(self) -> bool:
        return all(v is not None for v in self.powers.values()) and (
            self.expected is None or self.multiplicity == self.expected
        )


@dataclass
class InspectionReport:
    killed: str
    unchanged: bool
    substituted: RatIdeal
    components: list[ComponentResult]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.components)

    def to_json(self) -> dict:
        return {
            "killed": self.killed,
            "unchanged": self.unchanged,
            "ideal": self.substituted.to_json(),
            "components": [
                {"name": c.name, "powers": c.powers, "multiplicity": c.multiplicity, "expected": c.expected, "ok": c.ok}
                for c in self.components
            ],
        }


def min_power_in(ideal: RatIdeal, var: str, max_power: int = 6) -> int | None:
    """Smallest ``e`` with ``var^e`` in ``ideal`` (``None`` if above ``max_power``)."""
    for e in range(1, max_power + 1):
        if ideal.contains(Poly({((var, e),): 1})):
            return e
    return None


def substitute_and_inspect(
    ideal: RatIdeal, kill: str, components: Sequence[ComponentSpec] = (), max_power: int = 6
) -> InspectionReport:
    """Set ``kill = 0`` and measure the claimed components.

    Each component is localized at its generic variable (saturation), then for
    every vanishing coefficient the least power lying in the ideal is found.
    The multiplicity is the power of the distinguished variable.
    """
    if kill not in _variables(ideal.generators):
        return InspectionReport(kill, True, ideal, [])
    sub = ideal.substitute({kill: 0})
    results = []
    for comp in components:
        local = saturate(sub, Poly.var(comp.generic)) if comp.generic else sub
        powers = {v: min_power_in(local, v, max_power) for v in comp.vanishing if v != kill}
        mult = powers.get(comp.distinguished)
        results.append(ComponentResult(comp.name, powers, mult, comp.multiplicity))
    return InspectionReport(kill, False, sub, results)
