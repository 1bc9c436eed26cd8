"""Golden degree and multidegree tables shipped with the package."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any

from .diagram import Catalog, canonical_name, load_catalog
from .grammar import parse_class, parse_poly, parse_scalar
from .linear import gysin_degree, is_ordinary
from .ring import ClassElement, DegreeScalar, standard_ring


class GoldenError(ValueError):
    """A golden row failed its load-time consistency check."""


@dataclass(frozen=True)
class GoldenEntry:
    name: str
    degree: DegreeScalar | None = None
    multidegree: ClassElement | None = None
    source: str = ""
    degree_text: str = ""
    class_text: str = ""
    q_text: str = ""
    note: str = ""
    inconsistent: str = ""

    def table_degree(self, catalog: Catalog) -> DegreeScalar | None:
        """Degree read off the multidegree row (``X^2 L^2``, or ``X^2`` for ordinary points)."""
        if self.multidegree is None:
            return None
        return gysin_degree(self.multidegree, with_l=not is_ordinary(catalog[self.name]))


@dataclass(frozen=True)
class SeriesBullet:
    name: str
    series: str
    p: int
    degree: DegreeScalar
    degree_text: str
    source: str


@dataclass
class GoldenTable:
    entries: dict[str, GoldenEntry]
    bullets: list[SeriesBullet]
    closed_forms: list[dict[str, Any]]
    special: list[dict[str, Any]]
    ideals: dict[str, Any] = field(default_factory=dict)

    def __getitem__(self, name: str) -> GoldenEntry:
        return self.entries[canonical_name(name)]

    def get(self, name: str) -> GoldenEntry | None:
        return self.entries.get(canonical_name(name))

    def multidegrees(self) -> dict[str, ClassElement]:
        """Golden classes by canonical name, skipping rows flagged inconsistent."""
        return {k: e.multidegree for k, e in self.entries.items() if e.multidegree is not None and not e.inconsistent}

    def special_for(self, name: str, d: int) -> dict[str, Any] | None:
        for row in self.special:
            if canonical_name(row["name"]) == canonical_name(name) and row["fixed_degree"] == d:
                return row
        return None


def closed_form_degree(text: str, p: int) -> DegreeScalar:
    """Evaluate a series formula in ``p`` and ``d`` at a given ``p``."""
    poly = parse_poly(text, {"p": parse_poly(str(p))})
    coeffs: dict[int, int] = {}
    for mono, c in poly.terms.items():
        if c.denominator != 1:
            raise GoldenError(f"closed form {text!r} is not integral at p={p}")
        e = dict(mono).get("d", 0)
        coeffs[e] = coeffs.get(e, 0) + int(c)
    return DegreeScalar([coeffs.get(k, 0) for k in range(max(coeffs, default=-1) + 1)])


def _read(name: str) -> Any:
    return json.loads(resources.files("strata.data").joinpath(name).read_text("utf-8"))


def parse_golden_class(text: str, q_text: str) -> ClassElement:
    return parse_class(text, standard_ring(), env={"Q": q_text}, aliases={"l": "L"})


def build_table(data: dict, catalog: Catalog, ideals: dict | None = None) -> GoldenTable:
    rows: dict[str, dict] = {}
    for row in data["degrees"]:
        rows.setdefault(canonical_name(row["name"]), {})["degree"] = row
    for row in data["multidegrees"]:
        rows.setdefault(canonical_name(row["name"]), {})["multi"] = row
    entries = {}
    for key, parts in rows.items():
        drow, mrow = parts.get("degree"), parts.get("multi")
        name = (drow or mrow)["name"]
        if name not in catalog:
            raise GoldenError(f"golden row {name}: not in the catalog")
        entry = GoldenEntry(
            name=name,
            degree=parse_scalar(drow["degree"]) if drow else None,
            multidegree=parse_golden_class(mrow["class"], mrow["Q"]) if mrow else None,
            source="; ".join(r["source"] for r in (drow, mrow) if r),
            degree_text=drow["degree"] if drow else "",
            class_text=mrow["class"] if mrow else "",
            q_text=mrow["Q"] if mrow else "",
            note="; ".join(r["note"] for r in (drow, mrow) if r and r.get("note")),
            inconsistent=(mrow or {}).get("inconsistent", ""),
        )
        _check_entry(entry, catalog)
        entries[key] = entry
    bullets = []
    for row in data["series_bullets"]:
        b = SeriesBullet(row["name"], row["series"], row["p"], parse_scalar(row["degree"]), row["degree"], row["source"])
        table = entries.get(canonical_name(b.name))
        if table is not None and table.degree is not None and table.degree != b.degree:
            raise GoldenError(f"series row {b.name}: {b.degree_text} disagrees with the degree table")
        bullets.append(b)
    for form in data["closed_forms"]:
        for p, name in zip(form["p"], form["names"]):
            value = closed_form_degree(form["degree"], p)
            table = entries.get(canonical_name(name))
            if table is not None and table.degree is not None and table.degree != value:
                raise GoldenError(f"closed form at p={p} disagrees with the {name} row")
    return GoldenTable(entries, bullets, list(data["closed_forms"]), list(data["special"]), ideals or {})


def _check_entry(entry: GoldenEntry, catalog: Catalog) -> None:
    if entry.degree is None or entry.multidegree is None:
        if entry.inconsistent:
            raise GoldenError(f"golden row {entry.name}: flagged inconsistent without both rows")
        return
    consistent = entry.table_degree(catalog) == entry.degree
    if not consistent and not entry.inconsistent:
        raise GoldenError(f"golden row {entry.name}: multidegree {entry.class_text} does not give degree {entry.degree_text}")
    if consistent and entry.inconsistent:
        raise GoldenError(f"golden row {entry.name}: flagged inconsistent but the rows agree")


@lru_cache(maxsize=1)
def _default_table() -> GoldenTable:
    return build_table(_read("goldens.json"), load_catalog(), _read("ideals.json"))


def load_goldens(catalog: Catalog | None = None) -> GoldenTable:
    """Load and consistency-check the shipped goldens; raises :class:`GoldenError` on a bad row."""
    if catalog is None:
        return _default_table()
    return build_table(_read("goldens.json"), catalog, _read("ideals.json"))
