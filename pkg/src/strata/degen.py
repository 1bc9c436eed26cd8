"""Classes of nonlinear strata from degeneration steps.

A step says that the lifted parent stratum, cut by a divisor that kills one
coefficient of the preliminary form, equals a positive combination of simpler
strata.  Since the divisor has a unit ``F`` term the parent class is recovered
by exact division, recursively down to linear leaves.
"""

from __future__ import annotations

import json
import math
import os
import re
import threading
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping

from .diagram import (
    Catalog,
    LatticePoint,
    SingularityDescriptor,
    canonical_name,
    descriptor_from_monomials,
    load_catalog,
)
from .grammar import parse_class
from .linear import gysin_degree, is_ordinary, multidegree, ordinary_point_class
from .ring import (
    ClassElement,
    DegreeScalar,
    RingError,
    RingSpec,
    evaluate_at_degree,
    exact_divide,
    extract_coefficient,
    make_ring,
    mul,
    standard_ring,
)

DEGEN_ENV = "STRATA_DEGEN_CATALOG"

MODIFIERS = {
    "xl": "ordinary point lifted to (x, l) by the factor (L+X)",
    "tilde": "substratum with a constrained modulus",
}


class DegenError(ValueError):
    pass


class CycleError(DegenError):
    pass


class MissingStepError(DegenError):
    pass


class StepDivisionError(DegenError):
    def __init__(self, step: "DegenStep", cause: Exception):
        super().__init__(f"step {step.parent}: {cause}")
        self.step = step


_REF = re.compile(r"^\s*(?P<name>[^\[@]+?)\s*(?:\[(?P<mod>[a-z]+)\])?\s*(?:@\s*(?P<deg>\d+))?\s*$")


@dataclass(frozen=True)
class StratumRef:
    """A catalog type, optionally modified or pinned to a fixed degree.

    Text form: ``NAME``, ``NAME[modifier]``, ``NAME@d`` or ``NAME[modifier]@d``.
    """

    name: str
    modifier: str | None = None
    fixed_degree: int | None = None

    def __post_init__(self):
        if self.modifier is not None and self.modifier not in MODIFIERS:
            raise DegenError(f"unknown modifier {self.modifier!r}")

    @classmethod
    def parse(cls, text: str) -> "StratumRef":
        m = _REF.match(text)
        if not m:
            raise DegenError(f"cannot parse stratum reference {text!r}")
        name, mod, deg = m.group("name"), m.group("mod"), m.group("deg")
        if mod is None:
            suffix = re.match(r"^(.*?)_(%s)$" % "|".join(MODIFIERS), name)
            if suffix:
                name, mod = suffix.groups()
        return cls(name, mod, int(deg) if deg else None)

    @property
    def key(self) -> tuple[str, str | None, int | None]:
        return canonical_name(self.name), self.modifier, self.fixed_degree

    def universal(self) -> "StratumRef":
        return StratumRef(self.name, self.modifier, None)

    def at_degree(self, d: int | None) -> "StratumRef":
        return StratumRef(self.name, self.modifier, d)

    def __str__(self):
        out = self.name
        if self.modifier:
            out += f"[{self.modifier}]"
        if self.fixed_degree is not None:
            out += f"@{self.fixed_degree}"
        return out


@dataclass(frozen=True)
class DegenStep:
    parent: StratumRef
    killed: LatticePoint
    divisor: ClassElement
    children: tuple[tuple[StratumRef, int], ...]
    source: str = ""
    notes: str = ""
    cross_check: bool = False

    def __post_init__(self):
        if not self.children:
            raise DegenError(f"step {self.parent} has no children")
        for child, m in self.children:
            if m <= 0:
                raise DegenError(f"step {self.parent}: multiplicity of {child} must be positive")
        unit = tuple(1 if n == "F" else 0 for n in self.divisor.ring.names)
        coeff = self.divisor.terms.get(unit)
        if coeff is None or coeff != DegreeScalar.const(1):
            raise DegenError(f"step {self.parent}: divisor {self.divisor} lacks the unit F term")

    def to_json(self) -> dict:
        out = {
            "parent": str(self.parent),
            "killed": list(self.killed),
            "divisor": self.divisor.to_json(),
            "divisor_text": str(self.divisor),
            "children": [[str(c), m] for c, m in self.children],
            "source": self.source,
        }
        if self.notes:
            out["notes"] = self.notes
        if self.cross_check:
            out["cross_check"] = True
        return out

    @classmethod
    def from_json(cls, data: Mapping, ring: RingSpec | None = None) -> "DegenStep":
        ring = ring or standard_ring()
        divisor = ClassElement.from_json(data["divisor"]).in_ring(ring)
        if "divisor_text" in data:
            text = parse_class(data["divisor_text"], ring)
            if text != divisor:
                raise DegenError(f"step {data['parent']}: divisor_text disagrees with divisor")
        return cls(
            parent=StratumRef.parse(data["parent"]),
            killed=LatticePoint(*data["killed"]),
            divisor=divisor,
            children=tuple((StratumRef.parse(c), int(m)) for c, m in data["children"]),
            source=data.get("source", ""),
            notes=data.get("notes", ""),
            cross_check=bool(data.get("cross_check", False)),
        )


def divisor_class_default(a: int, b: int, ring: RingSpec | None = None) -> ClassElement:
    """``(d - b - 2a) X + F + (a - b) L``: the divisor killing the coefficient of ``x1^a x2^b``."""
    if a < 0 or b < 0:
        raise ValueError(f"exponents must be non-negative, got ({a}, {b})")
    ring = ring or standard_ring()
    return ring.gen("X") * DegreeScalar.linear(1, -b - 2 * a) + ring.gen("F") + ring.gen("L") * (a - b)


class DegenCatalog:
    """Degeneration steps keyed by parent, with memoized resolution."""

    def __init__(
        self,
        steps: Iterable[DegenStep],
        descriptors: Catalog,
        unsupported: Mapping[str, str] | None = None,
        ring: RingSpec | None = None,
    ):
        self.ring = ring or standard_ring()
        self.descriptors = descriptors
        self.steps: dict[tuple, DegenStep] = {}
        self.cross_checks: dict[tuple, DegenStep] = {}
        for step in steps:
            table = self.cross_checks if step.cross_check else self.steps
            if step.parent.key in table:
                raise DegenError(f"duplicate step for {step.parent}")
            table[step.parent.key] = step
        self.unsupported = {canonical_name(k): v for k, v in (unsupported or {}).items()}
        self._memo: dict[tuple, ClassElement] = {}
        self._lock = threading.RLock()
        self._check_graph()

    # structure ------------------------------------------------------------

    def descriptor(self, ref: StratumRef) -> SingularityDescriptor:
        try:
            return self.descriptors[ref.name]
        except KeyError:
            raise DegenError(f"unknown type {ref.name!r}") from None

    def step_for(self, ref: StratumRef) -> DegenStep | None:
        return self.steps.get(ref.key) or self.steps.get(ref.universal().key)

    def is_leaf(self, ref: StratumRef) -> bool:
        if ref.modifier == "xl":
            return True
        if self.step_for(ref) is not None:
            return False
        desc = self.descriptor(ref)
        return (desc.linear and not desc.newton_degenerate) or desc.chain_staircase is not None

    def _check_graph(self) -> None:
        for step in [*self.steps.values(), *self.cross_checks.values()]:
            for child, _ in step.children:
                self.descriptor(child)
        state: dict[tuple, int] = {}

        def visit(ref: StratumRef, path: tuple[str, ...]):
            key = ref.universal().key
            if state.get(key) == 2:
                return
            if state.get(key) == 1:
                raise CycleError(f"cycle through {' -> '.join(path + (str(ref),))}")
            state[key] = 1
            step = self.step_for(ref)
            if step is not None:
                for child, _ in step.children:
                    visit(child, path + (str(ref),))
            elif not self.is_leaf(ref) and canonical_name(ref.name) not in self.unsupported:
                raise DegenError(f"leaf {ref} is not linear")
            state[key] = 2

        for step in self.steps.values():
            visit(step.parent, ())

    # resolution -----------------------------------------------------------

    def resolve(self, ref: StratumRef | str) -> ClassElement:
        ref = StratumRef.parse(ref) if isinstance(ref, str) else ref
        with self._lock:
            return self._resolve(ref, ())

    def _resolve(self, ref: StratumRef, stack: tuple[tuple, ...]) -> ClassElement:
        key = ref.key
        if key in self._memo:
            return self._memo[key]
        if key in stack:
            raise CycleError(f"cycle while resolving {ref}")
        out = self._compute(ref, stack + (key,))
        self._memo[key] = out
        return out

    def _compute(self, ref: StratumRef, stack) -> ClassElement:
        desc = self.descriptor(ref)
        d = ref.fixed_degree
        if ref.modifier == "xl":
            if not is_ordinary(desc):
                raise DegenError(f"{ref}: the (x, l) lift applies to ordinary points only")
            out = mul(self.ring.gen("L") + self.ring.gen("X"), multidegree(desc).in_ring(self.ring))
            return evaluate_at_degree(out, d) if d is not None else out
        step = self.step_for(ref)
        if step is None:
            if self.is_leaf(ref):
                out = multidegree(desc).in_ring(self.ring)
                return evaluate_at_degree(out, d) if d is not None else out
            reason = self.unsupported.get(canonical_name(ref.name))
            if reason:
                raise MissingStepError(f"{ref.name}: unsupported, {reason}")
            raise MissingStepError(f"no degeneration step for nonlinear type {ref}")
        return solve_step(step, self, d, stack)

    def clear(self) -> None:
        with self._lock:
            self._memo.clear()


def _children_sum(step: DegenStep, catalog: DegenCatalog, d: int | None, stack=()) -> ClassElement:
    total = catalog.ring.zero()
    for child, m in step.children:
        ref = child if child.fixed_degree is not None else child.at_degree(d)
        total = total + catalog._resolve(ref, stack) * m
    return total


def solve_step(step: DegenStep, catalog: DegenCatalog, fixed_degree: int | None = None, _stack=()) -> ClassElement:
    """Parent class of ``step``: exact quotient of the children's sum by the divisor."""
    d = fixed_degree if fixed_degree is not None else step.parent.fixed_degree
    rhs = _children_sum(step, catalog, d, _stack)
    divisor = evaluate_at_degree(step.divisor, d) if d is not None else step.divisor
    try:
        return exact_divide(rhs, divisor)
    except RingError as exc:
        raise StepDivisionError(step, exc) from exc


def resolve_class(s: StratumRef | str, catalog: DegenCatalog) -> ClassElement:
    return catalog.resolve(s)


def stratum_degree(s: StratumRef | str, catalog: DegenCatalog) -> DegreeScalar:
    """Degree of a resolved stratum: ``X^2 L^2`` coefficient, or ``X^2`` for an unlifted ordinary point."""
    ref = StratumRef.parse(s) if isinstance(s, str) else s
    cls = catalog.resolve(ref)
    with_l = ref.modifier == "xl" or not is_ordinary(catalog.descriptor(ref))
    return gysin_degree(cls, with_l=with_l)


# validation -------------------------------------------------------------------


@dataclass
class ValidationReport:
    step: DegenStep
    divisible: bool
    solved: ClassElement | None = None
    golden_match: bool | None = None
    golden_identity: bool | None = None
    messages: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.divisible and self.golden_match is not False and self.golden_identity is not False

    def to_json(self) -> dict:
        return {
            "parent": str(self.step.parent),
            "divisible": self.divisible,
            "golden_match": self.golden_match,
            "golden_identity": self.golden_identity,
            "ok": self.ok,
            "messages": self.messages,
        }


def validate_step(
    step: DegenStep, catalog: DegenCatalog, goldens: Mapping[str, ClassElement] | None = None
) -> ValidationReport:
    """Check divisibility and, when a golden parent class exists, both the quotient and the identity.

    Comparisons are between full classes.  Cofactors of ``(L+X)`` are never
    compared, since ``(L+X)`` annihilates ``X^2 - XL + L^2``.
    """
    report = ValidationReport(step, divisible=False)
    d = step.parent.fixed_degree
    try:
        rhs = _children_sum(step, catalog, d)
    except DegenError as exc:
        report.messages.append(f"children do not resolve: {exc}")
        return report
    divisor = evaluate_at_degree(step.divisor, d) if d is not None else step.divisor
    try:
        report.solved = exact_divide(rhs, divisor)
        report.divisible = True
    except RingError as exc:
        report.messages.append(f"not divisible: {exc}")
    golden = None
    if goldens:
        golden = goldens.get(canonical_name(step.parent.name)) if step.parent.modifier is None else None
        if golden is not None and d is not None:
            golden = evaluate_at_degree(golden, d)
    if golden is not None:
        report.golden_identity = mul(golden.in_ring(catalog.ring), divisor) == rhs
        if report.solved is not None:
            report.golden_match = report.solved == golden.in_ring(catalog.ring)
        if not report.golden_identity:
            report.messages.append("golden parent times divisor differs from the children's sum")
    return report


# loading --------------------------------------------------------------------------


def load_degen_catalog(path: str | os.PathLike | None = None, descriptors: Catalog | None = None) -> DegenCatalog:
    """Load the step catalog; ``$STRATA_DEGEN_CATALOG`` overrides the shipped file."""
    path = path or os.environ.get(DEGEN_ENV)
    if path:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    else:
        data = json.loads(resources.files("strata.data").joinpath("degenerations.json").read_text("utf-8"))
    ring = standard_ring()
    steps = [DegenStep.from_json(s, ring) for s in data["steps"]]
    return DegenCatalog(steps, descriptors or load_catalog(), data.get("unsupported", {}), ring)


# special constructions ------------------------------------------------------------


def cusp_class_by_degeneration(p: int) -> ClassElement:
    """Class of ``x2^p + x1^(p+1)`` from ``[cusp] ((d-p)X + F - pL) = (L+X) [f^(p) = 0]``."""
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    ring = standard_ring()
    rhs = mul(ring.gen("L") + ring.gen("X"), ordinary_point_class(p, ring))
    return exact_divide(rhs, divisor_class_default(0, p, ring))


def newton_degenerate_child(p: int, q: int) -> SingularityDescriptor:
    """Preliminary form reached after killing ``x2^(2p)`` on the degenerate ``k = 2`` form."""
    _check_newton_degenerate(p, q)
    if q == p + 1:
        nf = [(1, 2 * p), (p + 1, p), (2 * (p + 1), 0)]
    else:
        h = p // 2
        nf = [(1, 2 * p), (2 * p - h, h + 1), (2 * (p + 2), 0)]
    desc = descriptor_from_monomials(f"ND{p},{q}'", nf)
    return SingularityDescriptor(
        desc.name, desc.normal_form, desc.codimension, desc.linear, chain_staircase=desc.stair.heights
    )


def _check_newton_degenerate(p: int, q: int) -> None:
    if q not in (p + 1, p + 2):
        raise ValueError(f"q must be p+1 or p+2, got p={p}, q={q}")
    if math.gcd(p, q) != 1 or not p < q < 2 * p:
        raise ValueError(f"need gcd(p, q) = 1 and p < q < 2p, got p={p}, q={q}")
    if (p, q) == (2, 3):
        raise ValueError("(p, q) = (2, 3) is a W-type form; use the nonlinear series steps instead")


def newton_degenerate_divisor(p: int, ring: RingSpec | None = None) -> ClassElement:
    """``(d - 2p) X + F - pL``."""
    ring = ring or standard_ring()
    return ring.gen("X") * DegreeScalar.linear(1, -2 * p) + ring.gen("F") - ring.gen("L") * p


def newton_degenerate_class(p: int, q: int) -> ClassElement:
    """Class of the ``k = 2`` Newton-degenerate stratum: ``2 [child] / ((d - 2p) X + F - pL)``."""
    child = newton_degenerate_child(p, q)
    ring = standard_ring()
    return exact_divide(multidegree(child).in_ring(ring) * 2, newton_degenerate_divisor(p, ring))


CONIC_RING = make_ring([("X", 3), ("L", 3), ("C1", 6), ("C2", 6)])

_CONIC_TEXT = (
    "(l+x)(C1^4C2^2+C1^3C2^3+C1^2C2^4+(l+2x)(C1^4C2+C1C2^4)"
    "+(3l+2x)(C1^3C2^2+C1^2C2^3)+2lx(C1^4+C2^4)+2(4l^2+3x^2)(C1^3C2+C1C2^3)"
    "+6(2l^2+x^2)C1^2C2^2+4lx^2(C1^3+C2^3)+12lx^2(C1^2C2+C1C2^2))"
)


def conic_tangency_class() -> ClassElement:
    """Stored class of pairs of conics with maximal tangency at ``x`` along ``l``."""
    return parse_class(_CONIC_TEXT, CONIC_RING, aliases={"l": "L", "x": "X"})


def conic_pair_count(on_first: int, on_second: int) -> int:
    """Maximally tangent conic pairs with the first through ``on_first`` points, the second through ``on_second``."""
    cls = conic_tangency_class()
    mono = {"X": 2, "L": 2, "C1": 5 - on_first, "C2": 5 - on_second}
    return cls.coefficient(mono).constant()


def quartic_a7_combinatorial() -> int:
    """Count of quartics with A7 through 7 points as pairs of tangent conics."""
    return conic_pair_count(5, 2) * math.comb(7, 2) + conic_pair_count(4, 3) * math.comb(7, 3)


def quartic_a7(catalog: DegenCatalog | None = None) -> tuple[ClassElement, int]:
    """Lifted class of quartics with an A7 point and its degree (the ``X^2 L^2`` coefficient)."""
    catalog = catalog or load_degen_catalog()
    cls = catalog.resolve(StratumRef("A_7", None, 4))
    top = extract_coefficient(cls, {"X": 2, "L": 2})
    if len(top) != 1:
        raise DegenError(f"quartic A7 class has no single X^2 L^2 term: {top}")
    ((_, value),) = top.terms.items()
    return cls, value.constant()
