"""Newton diagrams, staircases and universality predicates.

Convention: the lattice point ``(i, j)`` stands for the monomial ``x1^i x2^j``;
the singular point sits at the origin and the tangent line is ``{x2 = 0}``.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Iterable, NamedTuple, Sequence


class DiagramError(ValueError):
    pass


class LatticePoint(NamedTuple):
    i: int
    j: int


@dataclass(frozen=True)
class NewtonDiagram:
    """Vertices of the lower-left convex boundary, ``i`` increasing, ``j`` decreasing."""

    vertices: tuple[LatticePoint, ...]

    def __post_init__(self):
        if not self.vertices:
            raise DiagramError("a Newton diagram needs at least one vertex")
        for a, b in zip(self.vertices, self.vertices[1:]):
            if not (a.i < b.i and a.j > b.j):
                raise DiagramError(f"vertices out of order: {a} then {b}")
        slopes = self.slopes()
        for s, t in zip(slopes, slopes[1:]):
            if not s < t:
                raise DiagramError(f"boundary not convex at slopes {s}, {t}")

    def segments(self) -> list[tuple[LatticePoint, LatticePoint]]:
        return list(zip(self.vertices, self.vertices[1:]))

    def slopes(self) -> list[Fraction]:
        """Signed slopes ``dj/di`` of the segments (negative, increasing)."""
        return [Fraction(b.j - a.j, b.i - a.i) for a, b in self.segments()]

    def transpose(self) -> "NewtonDiagram":
        return NewtonDiagram(tuple(LatticePoint(p.j, p.i) for p in reversed(self.vertices)))

    def boundary_height(self, i: int | Fraction) -> Fraction:
        """Height of the boundary above ``i``.

        The first and last segments are prolonged as full lines, so the region
        below the boundary is the union of the half-planes under the segment
        lines.  A single vertex ``(a, b)`` is read as the line
        ``i + j = a + b``.
        """
        return max(c - k * Fraction(i) for k, c in self._lines())

    def _lines(self) -> list[tuple[Fraction, Fraction]]:
        if len(self.vertices) == 1:
            v = self.vertices[0]
            return [(Fraction(1), Fraction(v.i + v.j))]
        out = []
        for a, b in self.segments():
            k = Fraction(a.j - b.j, b.i - a.i)
            out.append((k, a.j + k * a.i))
        return out

    def is_under(self, i: int, j: int) -> bool:
        """Strictly below the boundary (the boundary is the maximum of its lines)."""
        return any(j + k * i < c for k, c in self._lines())

    def is_on_or_under(self, i: int, j: int) -> bool:
        return any(j + k * i <= c for k, c in self._lines())

    def under_points(self) -> list[LatticePoint]:
        """All lattice points strictly under the boundary, ordered by ``(j, i)``."""
        out = []
        j = 0
        while self.is_under(0, j):
            i = 0
            while self.is_under(i, j):
                out.append(LatticePoint(i, j))
                i += 1
            j += 1
        return out

    def to_json(self) -> list[list[int]]:
        return [[p.i, p.j] for p in self.vertices]


def diagram_from_monomials(points: Iterable[Sequence[int]]) -> NewtonDiagram:
    """Lower-left convex hull of ``points`` (rays to infinity are implicit)."""
    pts = {LatticePoint(int(p[0]), int(p[1])) for p in points}
    if not pts:
        raise DiagramError("empty monomial set")
    if any(p.i < 0 or p.j < 0 for p in pts):
        raise DiagramError("exponents must be non-negative")
    # Pareto-minimal points, sorted by i with j strictly decreasing
    front: list[LatticePoint] = []
    for p in sorted(pts):
        if not front or p.j < front[-1].j:
            front.append(p)
    hull: list[LatticePoint] = []
    for p in front:
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            # drop b unless it lies strictly below the chord a-p
            cross = (b.i - a.i) * (p.j - a.j) - (b.j - a.j) * (p.i - a.i)
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return NewtonDiagram(tuple(hull))


def is_linear(diag: NewtonDiagram) -> bool:
    """True iff every segment's absolute slope lies in ``[1/2, 2]``."""
    return all(Fraction(1, 2) <= -s <= 2 for s in diag.slopes())


@dataclass(frozen=True)
class Staircase:
    """``heights[m]`` is the largest ``i`` with ``x1^i x2^m`` strictly under the diagram."""

    heights: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.heights, self.heights[1:]):
            if not a > b:
                raise DiagramError(f"staircase heights must strictly decrease: {self.heights}")
        if self.heights and self.heights[-1] < 0:
            raise DiagramError("staircase heights must be non-negative")

    def __iter__(self):
        return iter(self.heights)

    def __len__(self):
        return len(self.heights)

    def count(self) -> int:
        """Number of vanishing coefficients encoded by the staircase."""
        return sum(h + 1 for h in self.heights)


def staircase(diag: NewtonDiagram) -> Staircase:
    heights = []
    m = 0
    while diag.is_under(0, m):
        i = 0
        while diag.is_under(i + 1, m):
            i += 1
        heights.append(i)
        m += 1
    return Staircase(tuple(heights))


@dataclass(frozen=True)
class SingularityDescriptor:
    name: str
    normal_form: tuple[LatticePoint, ...]
    codimension: int
    linear: bool
    newton_degenerate: bool = False
    notes: str = ""
    aliases: tuple[str, ...] = field(default=())
    chain_staircase: tuple[int, ...] | None = None

    @property
    def diagram(self) -> NewtonDiagram:
        return diagram_from_monomials(self.normal_form)

    @property
    def stair(self) -> Staircase:
        """Staircase driving the lifting chain (the stored override, if any)."""
        if self.chain_staircase is not None:
            return Staircase(tuple(self.chain_staircase))
        return staircase(self.diagram)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "normal_form": [list(p) for p in self.normal_form],
            "codim": self.codimension,
            "linear": self.linear,
            "newton_degenerate": self.newton_degenerate,
            "notes": self.notes,
            **({"aliases": list(self.aliases)} if self.aliases else {}),
            **({"chain_staircase": list(self.chain_staircase)} if self.chain_staircase is not None else {}),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SingularityDescriptor":
        return cls(
            name=data["name"],
            normal_form=tuple(LatticePoint(*p) for p in data["normal_form"]),
            codimension=int(data["codim"]),
            linear=bool(data["linear"]),
            newton_degenerate=bool(data.get("newton_degenerate", False)),
            notes=data.get("notes", ""),
            aliases=tuple(data.get("aliases", ())),
            chain_staircase=tuple(data["chain_staircase"]) if data.get("chain_staircase") is not None else None,
        )


def determinacy(desc: SingularityDescriptor) -> int:
    """Largest total degree ``i + j`` of a lattice point on or under the diagram.

    For most normal forms this is the largest total degree of a normal-form
    monomial.  It is larger when a shallow boundary line passes through lattice
    points beyond the last vertex, e.g. ``x2^3 + x2 x1^5`` gives 7.
    """
    if not desc.normal_form:
        raise DiagramError(f"{desc.name} has an empty normal form")
    return _determinacy(desc.normal_form)


@lru_cache(maxsize=1024)
def _determinacy(normal_form: tuple[LatticePoint, ...]) -> int:
    diag = diagram_from_monomials(normal_form)
    best = max(p.i + p.j for p in normal_form)
    j = 0
    while diag.is_on_or_under(0, j):
        i = 0
        while diag.is_on_or_under(i, j):
            best = max(best, i + j)
            i += 1
        j += 1
    return best


def min_degree_for_codim(codim: int) -> int:
    """Smallest ``d`` with ``2d - 1 > codim``."""
    return (codim + 1) // 2 + 1


def universality_bounds(desc: SingularityDescriptor) -> tuple[int, int]:
    """``(d_det, d_codim)``: a degree ``d`` is treated as universal if ``d >= d_det`` or ``d >= d_codim``.

    ``d_det`` is the determinacy itself, which reproduces the strict printed
    bounds for the E series (for instance ``k < d/3`` for ``E_{6k}``).
    """
    return determinacy(desc), min_degree_for_codim(desc.codimension)


def is_universal(desc: SingularityDescriptor, d: int) -> bool:
    a, b = universality_bounds(desc)
    return d >= a or d >= b


# catalog ---------------------------------------------------------------

CATALOG_ENV = "STRATA_CATALOG"


def canonical_name(name: str) -> str:
    """Normalize spelling: ``A_4``, ``A4`` and ``a_{4}`` all map to ``A4``."""
    text = name.strip().replace("{", "").replace("}", "").replace("_", "").replace(" ", "")
    text = text.replace("~", "t")
    return text.upper()


class Catalog:
    """Singularity descriptors indexed by canonical name."""

    def __init__(self, descriptors: Iterable[SingularityDescriptor]):
        self._by_key: dict[str, SingularityDescriptor] = {}
        self._order: list[str] = []
        for desc in descriptors:
            keys = {canonical_name(desc.name), *(canonical_name(a) for a in desc.aliases)}
            for key in keys:
                if key in self._by_key:
                    raise DiagramError(f"duplicate catalog name {desc.name!r}")
                self._by_key[key] = desc
            self._order.append(desc.name)
            if not desc.newton_degenerate and is_linear(desc.diagram) != desc.linear:
                raise DiagramError(
                    f"catalog entry {desc.name}: linear flag {desc.linear} disagrees with its diagram"
                )

    def __contains__(self, name: str) -> bool:
        return canonical_name(name) in self._by_key

    def __getitem__(self, name: str) -> SingularityDescriptor:
        try:
            return self._by_key[canonical_name(name)]
        except KeyError:
            raise KeyError(name) from None

    def __iter__(self):
        return (self._by_key[canonical_name(n)] for n in self._order)

    def __len__(self):
        return len(self._order)

    def names(self) -> list[str]:
        return list(self._order)

    def suggest(self, name: str, n: int = 3) -> list[str]:
        import difflib

        keys = {canonical_name(x): x for x in self._order}
        hits = difflib.get_close_matches(canonical_name(name), list(keys), n=n, cutoff=0.4)
        return [keys[h] for h in hits]


def load_catalog(path: str | os.PathLike | None = None) -> Catalog:
    """Load the descriptor catalog; ``$STRATA_CATALOG`` overrides the shipped file."""
    path = path or os.environ.get(CATALOG_ENV)
    if path:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    else:
        data = json.loads(resources.files("strata.data").joinpath("catalog.json").read_text("utf-8"))
    return Catalog(SingularityDescriptor.from_json(entry) for entry in data)


def descriptor_from_monomials(name: str, monomials: Iterable[Sequence[int]], codim: int = 0, notes: str = "") -> SingularityDescriptor:
    """Build an ad-hoc descriptor, deriving the linear flag from the diagram."""
    pts = tuple(LatticePoint(*p) for p in monomials)
    return SingularityDescriptor(
        name=name,
        normal_form=pts,
        codimension=codim,
        linear=is_linear(diagram_from_monomials(pts)),
        notes=notes,
    )


def e_series(n: int) -> SingularityDescriptor:
    """``E_n`` for ``n >= 6``: ``x2^3 + x1^(3k+1)``, ``x2^3 + x2 x1^(2k+1)`` or ``x2^3 + x1^(3k+2)`` for ``n = 6k, 6k+1, 6k+2``."""
    k, r = divmod(n, 6)
    if n < 6 or r > 2:
        raise DiagramError(f"E_{n} is not in the E series")
    forms = {0: [(0, 3), (3 * k + 1, 0)], 1: [(0, 3), (2 * k + 1, 1)], 2: [(0, 3), (3 * k + 2, 0)]}
    return descriptor_from_monomials(f"E_{n}", forms[r], codim=5 * k + 1 + r)


def a_series(k: int) -> SingularityDescriptor:
    return descriptor_from_monomials(f"A_{k}", [(0, 2), (k + 1, 0)], codim=k)


def d_series(k: int) -> SingularityDescriptor:
    if k < 4:
        raise DiagramError("D_k needs k >= 4")
    return descriptor_from_monomials(f"D_{k}", [(1, 2), (k - 1, 0)], codim=k)


def ordinary_point(multiplicity: int) -> SingularityDescriptor:
    n = multiplicity
    return descriptor_from_monomials(f"P_{n}", [(0, n), (n, 0)], codim=math.comb(n + 1, 2) - 2)
