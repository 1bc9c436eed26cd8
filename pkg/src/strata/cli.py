"""Command-line front end: ``strata degree|multidegree|tree|ideal|verify``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .degen import (
    DegenCatalog,
    DegenError,
    MissingStepError,
    StratumRef,
    load_degen_catalog,
    stratum_degree,
)
from .diagram import (
    Catalog,
    DiagramError,
    canonical_name,
    is_universal,
    universality_bounds,
)
from .golden import GoldenError, GoldenTable, load_goldens
from .ideal import EliminationError, defining_ideal
from .linear import ChainError
from .ring import RingError, evaluate_at_degree, format_element, format_scalar
from .suites import SUITES, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

CAVEAT = (
    "below the universality range: stratum degrees need not follow the universal "
    "polynomial, and reducible curves (e.g. with a double line) may contribute"
)


class UsageError(Exception):
    pass


def _emit(obj, fmt: str, text: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text + "\n")


def _ref(name: str, catalog: Catalog) -> StratumRef:
    ref = StratumRef.parse(name)
    if ref.name not in catalog:
        hints = catalog.suggest(ref.name)
        hint = f"; did you mean {', '.join(hints)}?" if hints else ""
        raise UsageError(f"unknown singularity type {ref.name!r}{hint}")
    return ref


def _context() -> tuple[DegenCatalog, GoldenTable]:
    degen = load_degen_catalog()
    return degen, load_goldens(degen.descriptors if os.environ.get("STRATA_CATALOG") else None)


# commands -----------------------------------------------------------------------


def cmd_degree(args) -> int:
    degen, goldens = _context()
    ref = _ref(args.type, degen.descriptors)
    desc = degen.descriptor(ref)
    bounds = universality_bounds(desc)
    out = {"type": desc.name, "universality_bounds": {"determinacy": bounds[0], "codimension": bounds[1]}}
    d = args.d
    if d is not None and not is_universal(desc, d):
        special = degen.steps.get(ref.at_degree(d).key)
        if special is not None:
            value = stratum_degree(ref.at_degree(d), degen)
            out.update(d=d, value=value.constant(), universal=False, route="fixed-degree degeneration")
            _emit(out, args.format, f"{desc.name} at d={d}: {value.constant()} (fixed-degree degeneration)")
            return EXIT_OK
        print(f"warning: d={d} for {desc.name} is {CAVEAT}", file=sys.stderr)
    golden = goldens.get(ref.name) if ref.modifier is None and ref.fixed_degree is None else None
    table = golden.degree if golden is not None else None
    try:
        computed = stratum_degree(ref, degen)
    except MissingStepError as exc:
        if table is None:
            raise
        computed = None
        print(f"warning: {exc}; reporting the table row", file=sys.stderr)
    poly = table if table is not None else computed
    out["degree"] = format_scalar(poly, True)
    if computed is not None:
        out["computed"] = format_scalar(computed, True)
    if table is not None:
        out["source"] = golden.source
        out["matches_golden"] = computed == table
        if computed is not None and computed != table:
            print(f"warning: the degeneration tree gives {out['computed']}, not the table row", file=sys.stderr)
    lines = [out["degree"]]
    if d is not None:
        out.update(d=d, value=poly.evaluate(d), universal=is_universal(desc, d))
        lines.append(f"d={d}: {out['value']}")
    _emit(out, args.format, "\n".join(lines))
    return EXIT_OK


def cmd_multidegree(args) -> int:
    degen, goldens = _context()
    ref = _ref(args.type, degen.descriptors)
    cls = degen.resolve(ref)
    if args.d is not None:
        cls = evaluate_at_degree(cls, args.d)
    out = {"type": str(ref), "class": cls.to_json(), "text": format_element(cls)}
    golden = goldens.get(ref.name) if ref.modifier is None and ref.fixed_degree is None else None
    if golden is not None and golden.multidegree is not None and args.d is None:
        out["golden_Q"] = golden.q_text
        out["matches_golden"] = cls == golden.multidegree
    _emit(out, args.format, out["text"])
    return EXIT_OK


def _tree(ref: StratumRef, degen: DegenCatalog, goldens: GoldenTable, depth: int, mult: int | None, lines, nodes) -> dict:
    label = f"{mult}*{ref}" if mult is not None else str(ref)
    step = degen.step_for(ref)
    pad = "  " * depth
    if step is None:
        if degen.is_leaf(ref):
            status = "linear leaf"
        else:
            reason = degen.unsupported.get(canonical_name(ref.name), "no degeneration step")
            status = f"unsupported: {reason}"
        lines.append(f"{pad}{label} [{status}]")
        node = {"node": str(ref), "multiplicity": mult, "status": status}
        nodes.append(status)
        return node
    try:
        cls = degen.resolve(ref)
        golden = goldens.get(ref.name) if ref.modifier is None and ref.fixed_degree is None else None
        if golden is not None and golden.multidegree is not None and not golden.inconsistent:
            status = "golden-matched" if cls == golden.multidegree else "differs from golden"
        else:
            status = "solved"
    except DegenError as exc:
        status = f"unresolved: {exc}"
    a, b = step.killed
    mono = "*".join(t for t in (f"x1^{a}" if a > 1 else "x1" if a else "", f"x2^{b}" if b > 1 else "x2" if b else "") if t)
    lines.append(f"{pad}{label} --({mono} -> 0)--> [{status}]")
    nodes.append(status)
    kids = [_tree(c if c.fixed_degree is not None else c.at_degree(ref.fixed_degree), degen, goldens, depth + 1, m, lines, nodes) for c, m in step.children]
    return {"node": str(ref), "multiplicity": mult, "status": status, "killed": [a, b], "divisor": format_element(step.divisor), "children": kids}


def cmd_tree(args) -> int:
    degen, goldens = _context()
    ref = _ref(args.type, degen.descriptors)
    lines: list[str] = []
    nodes: list[str] = []
    tree = _tree(ref, degen, goldens, 0, None, lines, nodes)
    _emit(tree, args.format, "\n".join(lines))
    return EXIT_FAIL if any(s.startswith(("unsupported", "unresolved")) for s in nodes) else EXIT_OK


def cmd_ideal(args) -> int:
    degen, _ = _context()
    ref = _ref(args.type, degen.descriptors)
    desc = degen.descriptor(ref)
    ideal = defining_ideal(
        desc,
        jet_order=args.jet_order,
        fixed_degree=args.d if args.d is not None else ref.fixed_degree,
        saturate_by=args.saturate or (),
    )
    data = ideal.to_json()
    _emit(data, args.format, "\n".join(data["generators"]))
    return EXIT_OK


def cmd_verify(args) -> int:
    suites = list(SUITES) if args.suite == "all" else [args.suite]
    results = run_suites(suites, jobs=args.jobs)
    failed = [r for r in results if not r.ok]
    if args.format == "json":
        report = {"suites": suites, "passed": len(results) - len(failed), "failed": len(failed), "cases": [r.to_json() for r in results]}
        _emit(report, "json", "")
    else:
        for r in results:
            line = f"{'PASS' if r.ok else 'FAIL'} {r.suite} {r.case}"
            if not r.ok:
                line += f": expected {r.expected}; got {r.actual}" + (f" ({r.detail})" if r.detail else "")
            sys.stdout.write(line + "\n")
        sys.stdout.write(f"{len(results) - len(failed)} passed, {len(failed)} failed\n")
    return EXIT_FAIL if failed else EXIT_OK


# entry point ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="strata", description="Degrees and classes of equisingular strata of plane curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("degree", help="degree polynomial of a stratum")
    p.add_argument("type")
    p.add_argument("--d", type=int, help="evaluate at this curve degree")
    add_format(p)
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("multidegree", help="lifted class in X, L, F")
    p.add_argument("type")
    p.add_argument("--d", type=int, help="evaluate at this curve degree")
    add_format(p)
    p.set_defaults(func=cmd_multidegree)

    p = sub.add_parser("tree", help="degeneration tree")
    p.add_argument("type")
    add_format(p)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("ideal", help="locally defining ideal in the jet coefficients")
    p.add_argument("type")
    p.add_argument("--jet-order", type=int)
    p.add_argument("--d", type=int, help="use the whole affine curve of this degree")
    p.add_argument("--saturate", action="append", metavar="COEFF", help="saturate by a coefficient, e.g. a40")
    add_format(p)
    p.set_defaults(func=cmd_ideal)

    p = sub.add_parser("verify", help="run regression suites")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    p.add_argument("--jobs", type=int, default=1)
    add_format(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MissingStepError, EliminationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (GoldenError, DegenError, DiagramError, ChainError, RingError) as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
