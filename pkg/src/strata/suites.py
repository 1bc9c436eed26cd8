"""Regression suites run by ``strata verify`` and the acceptance tests.

Each case is addressed by ``(suite, case_id)`` so that a worker process can
rebuild it from the shipped data alone.
"""

from __future__ import annotations

import math
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .degen import (
    DegenCatalog,
    DegenError,
    StratumRef,
    conic_pair_count,
    cusp_class_by_degeneration,
    load_degen_catalog,
    quartic_a7,
    quartic_a7_combinatorial,
    stratum_degree,
    validate_step,
)
from .diagram import a_series, canonical_name
from .golden import GoldenTable, closed_form_degree, load_goldens, parse_golden_class
from .grammar import parse_poly
from .ideal import ComponentSpec, defining_ideal, mutual_containment, substitute_and_inspect
from .linear import multidegree
from .ring import RingError, format_element, format_scalar

SUITES = ("tables", "identities", "ideals")


@dataclass
class CaseResult:
    suite: str
    case: str
    ok: bool
    expected: str = ""
    actual: str = ""
    detail: str = ""
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "case": self.case,
            "ok": self.ok,
            "expected": self.expected,
            "actual": self.actual,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


@lru_cache(maxsize=1)
def _context() -> tuple[DegenCatalog, GoldenTable]:
    return load_degen_catalog(), load_goldens()


# case lists ---------------------------------------------------------------------


def list_cases(suite: str) -> list[str]:
    degen, goldens = _context()
    if suite == "tables":
        out = [f"degree:{e.name}" for e in goldens.entries.values() if e.degree is not None]
        out += [f"multidegree:{e.name}" for e in goldens.entries.values() if e.multidegree is not None]
        out += [
            f"consistency:{e.name}"
            for e in goldens.entries.values()
            if e.degree is not None and e.multidegree is not None
        ]
        out += [f"series:{b.name}" for b in goldens.bullets]
        out += [f"closed:{name}" for form in goldens.closed_forms for name in form["names"]]
        return out
    if suite == "identities":
        out = [f"step:{s.parent}" for s in degen.steps.values()]
        out += [f"crosscheck:{s.parent}" for s in degen.cross_checks.values()]
        out += [f"cusp:{p}" for p in (2, 3, 4)]
        out += ["quartic-a7:degeneration", "quartic-a7:combinatorial", "quartic-a7:conic-class"]
        return out
    if suite == "ideals":
        out = [f"eliminate:{name}" for name in goldens.ideals if name != "modulus_conditions"]
        out += [f"inspect:{name}" for name, row in goldens.ideals.items() if isinstance(row, dict) and "inspect" in row]
        out += [f"modulus:{name}" for name in goldens.ideals.get("modulus_conditions", {})]
        return out
    raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)} or all")


# case bodies --------------------------------------------------------------------


def _degree_case(name: str) -> CaseResult:
    degen, goldens = _context()
    entry = goldens[name]
    actual = stratum_degree(name, degen)
    return CaseResult("tables", f"degree:{name}", actual == entry.degree, entry.degree_text, format_scalar(actual, True))


def _multidegree_case(name: str) -> CaseResult:
    degen, goldens = _context()
    entry = goldens[name]
    actual = degen.resolve(name)
    detail = entry.inconsistent
    return CaseResult(
        "tables", f"multidegree:{name}", actual == entry.multidegree, format_element(entry.multidegree),
        format_element(actual), detail,
    )


def _consistency_case(name: str) -> CaseResult:
    degen, goldens = _context()
    entry = goldens[name]
    table = entry.table_degree(degen.descriptors)
    return CaseResult(
        "tables", f"consistency:{name}", table == entry.degree, entry.degree_text, format_scalar(table, True),
        entry.inconsistent,
    )


def _series_case(name: str) -> CaseResult:
    degen, goldens = _context()
    bullet = next(b for b in goldens.bullets if canonical_name(b.name) == canonical_name(name))
    actual = stratum_degree(name, degen)
    return CaseResult("tables", f"series:{name}", actual == bullet.degree, bullet.degree_text, format_scalar(actual, True), bullet.series)


def _closed_case(name: str) -> CaseResult:
    degen, goldens = _context()
    form = next(f for f in goldens.closed_forms if name in f["names"])
    p = form["p"][form["names"].index(name)]
    expected = closed_form_degree(form["degree"], p)
    actual = stratum_degree(name, degen)
    return CaseResult("tables", f"closed:{name}", actual == expected, format_scalar(expected, True), format_scalar(actual, True), f"p = {p}")


def _step_case(parent: str, cross: bool = False) -> CaseResult:
    degen, goldens = _context()
    table = degen.cross_checks if cross else degen.steps
    step = table[StratumRef.parse(parent).key]
    report = validate_step(step, degen, goldens.multidegrees())
    case = f"{'crosscheck' if cross else 'step'}:{parent}"
    if cross and report.solved is not None:
        leaf = multidegree(degen.descriptor(step.parent))
        report.golden_match = report.solved == leaf
        if not report.golden_match:
            report.messages.append("quotient differs from the lifting-chain class")
    entry = goldens.get(step.parent.name) if step.parent.modifier is None else None
    if not cross and entry is not None and entry.inconsistent and report.solved is not None:
        # the class row is unusable, so fall back to the degree row
        value = stratum_degree(step.parent, degen)
        if step.parent.fixed_degree is None and value != entry.degree:
            report.golden_match = False
            report.messages.append(f"degree {format_scalar(value, True)} differs from the degree row {entry.degree_text}")
    expected = "divisible" + (", equals golden" if report.golden_match is not None else "")
    actual = ("divisible" if report.divisible else "not divisible") + (
        "" if report.golden_match is None else (", equals golden" if report.golden_match else ", differs from golden")
    )
    return CaseResult("identities", case, report.ok, expected, actual, "; ".join(report.messages))


def _cusp_case(p: int) -> CaseResult:
    degen, _ = _context()
    name = {2: "A_2", 3: "E_6", 4: "W_12"}[p]
    chain = multidegree(degen.descriptors[name])
    inverted = cusp_class_by_degeneration(p)
    return CaseResult("identities", f"cusp:{p}", chain == inverted, format_element(chain), format_element(inverted), name)


def _quartic_case(route: str) -> CaseResult:
    degen, goldens = _context()
    row = goldens.special_for("A_7", 4)
    if route == "degeneration":
        cls, value = quartic_a7(degen)
        golden = parse_golden_class(row["class"], "F")
        ok = cls == golden and value == row["degree"]
        return CaseResult("identities", "quartic-a7:degeneration", ok, f"{row['class']}; {row['degree']}", f"{format_element(cls)}; {value}")
    if route == "combinatorial":
        value = quartic_a7_combinatorial()
        expected = 4 * math.comb(7, 2) + 12 * math.comb(7, 3)
        return CaseResult("identities", "quartic-a7:combinatorial", value == expected == row["degree"], str(row["degree"]), str(value), row["combinatorial"])
    split = (conic_pair_count(5, 2), conic_pair_count(4, 3))
    return CaseResult("identities", "quartic-a7:conic-class", split == (4, 12), "(4, 12)", str(split), "conic pairs for the 5+2 and 4+3 point splits")


def _ideal_for(name: str, row: dict):
    ref = StratumRef.parse(name)
    return defining_ideal(a_series(int(canonical_name(ref.name)[1:])), fixed_degree=ref.fixed_degree, saturate_by=row.get("saturate_by", ()))


def _eliminate_case(name: str) -> CaseResult:
    _, goldens = _context()
    row = goldens.ideals[name]
    ideal = _ideal_for(name, row)
    target = row.get("corrected", row["printed"])
    missing, extra = mutual_containment(ideal, [parse_poly(t) for t in target])
    detail = []
    ok = not missing and not extra
    if "corrected" in row:
        typos = [t for t in row["printed"] if t not in row["corrected"]]
        stray = [t for t in typos if ideal.contains(parse_poly(t))]
        detail.append(f"verbatim relations outside the ideal: {len(typos) - len(stray)} of {len(typos)}")
        ok = ok and not stray
    if missing:
        detail.append(f"missing {len(missing)}")
    if extra:
        detail.append(f"extra {len(extra)}")
    return CaseResult(
        "ideals", f"eliminate:{name}", ok, f"{len(target)} printed generators",
        f"{len(ideal.generators)} computed generators", "; ".join(detail),
    )


def _inspect_case(name: str) -> CaseResult:
    _, goldens = _context()
    row = goldens.ideals[name]
    spec = row["inspect"]
    ideal = _ideal_for(name, row)
    comps = [
        ComponentSpec(c["name"], tuple(c["vanishing"]), c["distinguished"], c.get("generic"), c["multiplicity"])
        for c in spec["components"]
    ]
    report = substitute_and_inspect(ideal, spec["kill"], comps)
    expected = ", ".join(f"{c.name} x{c.multiplicity}" for c in comps)
    actual = ", ".join(f"{r.name} x{r.multiplicity}" for r in report.components)
    return CaseResult("ideals", f"inspect:{name}", report.ok, expected, actual)


def _modulus_case(name: str) -> CaseResult:
    _, goldens = _context()
    forms = goldens.ideals["modulus_conditions"][name]
    row = goldens.ideals["A_7@4"]
    ideal = _ideal_for("A_7@4", row)
    inside = []
    for form in forms:
        poly = parse_poly(form["printed"])
        if form["convention"] == "transposed":
            poly = parse_poly(_transpose(form["printed"]))
        inside.append(ideal.contains(poly))
    ok = sum(inside) == 1
    chosen = [f["printed"] for f, keep in zip(forms, inside) if keep]
    return CaseResult("ideals", f"modulus:{name}", ok, "exactly one printed form in the ideal", ", ".join(chosen) or "none")


def _transpose(text: str) -> str:
    return re.sub(r"a(\d)(\d)", lambda m: f"a{m.group(2)}{m.group(1)}", text)


_DISPATCH: dict[str, Callable[[str], CaseResult]] = {
    "degree": _degree_case,
    "multidegree": _multidegree_case,
    "consistency": _consistency_case,
    "series": _series_case,
    "closed": _closed_case,
    "step": _step_case,
    "crosscheck": lambda parent: _step_case(parent, cross=True),
    "cusp": lambda p: _cusp_case(int(p)),
    "quartic-a7": _quartic_case,
    "eliminate": _eliminate_case,
    "inspect": _inspect_case,
    "modulus": _modulus_case,
}


def run_case(suite: str, case: str) -> CaseResult:
    kind, _, arg = case.partition(":")
    start = time.perf_counter()
    try:
        result = _DISPATCH[kind](arg)
    except (DegenError, RingError) as exc:
        result = CaseResult(suite, case, False, detail=f"{type(exc).__name__}: {exc}")
    result.suite = suite
    result.seconds = time.perf_counter() - start
    return result


def _run_pair(pair: tuple[str, str]) -> CaseResult:
    return run_case(*pair)


def run_suites(suites: list[str], jobs: int = 1) -> list[CaseResult]:
    """Run every case of the given suites; results keep the listing order."""
    pairs = [(s, c) for s in suites for c in list_cases(s)]
    if jobs <= 1:
        return [run_case(s, c) for s, c in pairs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_pair, pairs))
