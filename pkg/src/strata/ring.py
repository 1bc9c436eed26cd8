"""Exact arithmetic in truncated multigraded cohomology rings.

Elements live in ``Z[d][X, L, F, B_1, ...]`` modulo ``G^n = 0`` for every
bounded generator ``G`` of nilpotency ``n``.  The curve degree ``d`` is kept
formal: every coefficient is a :class:`DegreeScalar`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "DegreeScalar",
    "RingSpec",
    "ClassElement",
    "RingError",
    "make_ring",
    "standard_ring",
    "add",
    "mul",
    "diagonal_class",
    "extract_coefficient",
    "exact_divide",
    "evaluate_at_degree",
    "format_scalar",
    "format_element",
    "power_sums",
]


class RingError(ValueError):
    """Raised on invalid ring construction or incompatible operands."""


def _strip(coeffs: Sequence[int]) -> tuple[int, ...]:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


def _padd(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for k, c in enumerate(b):
        out[k] += c
    return _strip(out)


def _pmul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    if len(a) == 1:
        c = a[0]
        return tuple(c * y for y in b)
    if len(b) == 1:
        c = b[0]
        return tuple(c * y for y in a)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _strip(out)


class DegreeScalar:
    """Polynomial in the formal curve degree ``d`` with integer coefficients.

    ``coeffs[k]`` is the coefficient of ``d**k``.  Instances are immutable and
    hashable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        values = tuple(coeffs)
        for c in values:
            if not isinstance(c, int):
                raise TypeError(f"DegreeScalar coefficients must be int, got {c!r}")
        object.__setattr__(self, "coeffs", _strip(values))

    def __setattr__(self, name, value):
        raise AttributeError("DegreeScalar is immutable")

    @classmethod
    def const(cls, c: int) -> "DegreeScalar":
        return cls((c,))

    @classmethod
    def d(cls) -> "DegreeScalar":
        return cls((0, 1))

    @classmethod
    def linear(cls, slope: int, intercept: int) -> "DegreeScalar":
        """``slope*d + intercept``."""
        return cls((intercept, slope))

    @staticmethod
    def coerce(value: "DegreeScalar | int") -> "DegreeScalar":
        if isinstance(value, DegreeScalar):
            return value
        if isinstance(value, int):
            return DegreeScalar((value,))
        raise TypeError(f"cannot coerce {value!r} to DegreeScalar")

    @property
    def degree(self) -> int:
        """Degree in ``d``; ``-1`` for zero."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def evaluate(self, d_value: int) -> int:
        total = 0
        for c in reversed(self.coeffs):
            total = total * d_value + c
        return total

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        if self.coeffs and self.coeffs[-1] < 0:
            g = -g
        return g

    def __add__(self, other):
        try:
            other = DegreeScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return DegreeScalar(_padd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return DegreeScalar(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        try:
            other = DegreeScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = DegreeScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return DegreeScalar(_pmul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = DegreeScalar.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = DegreeScalar.const(other)
        if not isinstance(other, DegreeScalar):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("DegreeScalar", self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"DegreeScalar({list(self.coeffs)})"

    def __str__(self):
        return format_scalar(self)

    def integer_roots_factorization(self) -> tuple[int, list[tuple[int, int]], "DegreeScalar"]:
        """Split off the content and all rational-root linear factors.

        Returns ``(content, factors, rest)`` where each factor ``(a, b)`` means
        ``a*d + b`` with ``a > 0`` and ``gcd(a, b) == 1``.
        """
        if self.is_zero():
            return 0, [], DegreeScalar()
        c = self.content()
        rest = [x // c for x in self.coeffs]
        factors: list[tuple[int, int]] = []
        changed = True
        while changed and len(rest) > 2:
            changed = False
            lead, const = rest[-1], rest[0]
            if const == 0:
                factors.append((1, 0))
                rest = rest[1:]
                changed = True
                continue
            for q in _divisors(abs(lead)):
                for p in _divisors(abs(const)):
                    for sign in (1, -1):
                        root = Fraction(sign * p, q)
                        if math.gcd(p, q) != 1:
                            continue
                        quotient = _divide_linear(rest, root)
                        if quotient is not None:
                            factors.append((root.denominator, -root.numerator))
                            rest = quotient
                            changed = True
                            break
                    if changed:
                        break
                if changed:
                    break
        if len(rest) == 2:
            a, b = rest[1], rest[0]
            factors.append((a, b))
            rest = [1]
        return c, factors, DegreeScalar(rest)


def _divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0] if n else [1]


def _divide_linear(coeffs: list[int], root: Fraction) -> list[int] | None:
    """Divide by ``(q*d - p)`` where root = p/q; ``None`` unless exact over Z."""
    p, q = root.numerator, root.denominator
    # synthetic division by (q d - p) from the top
    n = len(coeffs) - 1
    out = [0] * n
    rem = list(coeffs)
    for k in range(n, 0, -1):
        if rem[k] % q:
            return None
        c = rem[k] // q
        out[k - 1] = c
        rem[k] -= c * q
        rem[k - 1] += c * p
    if rem[0] != 0:
        return None
    return out


def _format_plain(coeffs: Sequence[int], var: str = "d", star: bool = False) -> str:
    parts: list[str] = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            if mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}" if star else f"{mag}{mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += sign + body
    return text


def format_scalar(s: DegreeScalar, factored: bool = False) -> str:
    """Render ``s`` as text.

    The plain form is ``3d^2-6d+3``; the factored form pulls out the integer
    content and rational linear factors, e.g. ``12(d-1)(d-2)``.
    """
    if not factored:
        return _format_plain(s.coeffs)
    if s.is_zero():
        return "0"
    c, factors, rest = s.integer_roots_factorization()
    counts: dict[str, int] = {}
    for a, b in factors:
        piece = "(d)" if (a, b) == (1, 0) else f"({_format_plain((b, a))})"
        counts[piece] = counts.get(piece, 0) + 1
    pieces = [p if k == 1 else f"{p}^{k}" for p, k in counts.items()]
    pieces.sort(key=lambda piece: not piece.startswith("(d)"))
    if rest.degree > 0:
        pieces.append(f"({_format_plain(rest.coeffs)})")
    head = "" if c == 1 else ("-" if c == -1 else str(c))
    if not pieces:
        return str(c)
    if len(pieces) == 1 and not head and pieces[0].endswith(")"):
        return pieces[0][1:-1]
    return (head + "".join(pieces)).replace("(d)", "d")


@dataclass(frozen=True)
class RingSpec:
    """Ordered generators with nilpotency orders (``None`` means unbounded)."""

    generators: tuple[tuple[str, int | None], ...]
    degree_cap: int | None = None

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.generators)

    @property
    def nilpotency(self) -> tuple[int | None, ...]:
        return tuple(n for _, n in self.generators)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise RingError(f"generator {name!r} not in ring {self.names}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.names

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def zero(self) -> "ClassElement":
        return ClassElement(self, {})

    def one(self) -> "ClassElement":
        return self.constant(1)

    def constant(self, c: DegreeScalar | int) -> "ClassElement":
        return ClassElement(self, {(0,) * self.ngens: DegreeScalar.coerce(c)})

    def gen(self, name: str) -> "ClassElement":
        exp = [0] * self.ngens
        exp[self.index(name)] = 1
        return ClassElement(self, {tuple(exp): DegreeScalar.const(1)})

    def monomial(self, exponents: Mapping[str, int], coeff: DegreeScalar | int = 1) -> "ClassElement":
        exp = [0] * self.ngens
        for name, e in exponents.items():
            exp[self.index(name)] = e
        return ClassElement(self, {tuple(exp): DegreeScalar.coerce(coeff)})

    def linear(self, coeffs: Mapping[str, DegreeScalar | int]) -> "ClassElement":
        """Degree-one element ``sum coeffs[g] * g``."""
        terms = {}
        for name, c in coeffs.items():
            exp = [0] * self.ngens
            exp[self.index(name)] = 1
            terms[tuple(exp)] = DegreeScalar.coerce(c)
        return ClassElement(self, terms)

    def to_json(self) -> list[dict]:
        return [{"gen": name, "nilp": nilp} for name, nilp in self.generators]


def make_ring(
    generators: Sequence[tuple[str, int | None]], degree_cap: int | None = None
) -> RingSpec:
    """Build a :class:`RingSpec`.

    ``generators`` is a sequence of ``(name, nilpotency)`` with ``None`` for an
    unbounded generator.  Nilpotency ``n`` means ``G**n == 0``.
    """
    names = [name for name, _ in generators]
    if len(set(names)) != len(names):
        raise RingError(f"duplicate generator name in {names}")
    gens = []
    for name, nilp in generators:
        if not isinstance(name, str) or not name:
            raise RingError(f"invalid generator name {name!r}")
        if nilp is not None:
            if not isinstance(nilp, int) or nilp < 1:
                raise RingError(f"nilpotency of {name} must be a positive integer, got {nilp!r}")
        gens.append((name, nilp))
    if degree_cap is not None and degree_cap < 0:
        raise RingError("degree_cap must be non-negative")
    return RingSpec(tuple(gens), degree_cap)


def standard_ring(*auxiliaries: tuple[str, int], degree_cap: int | None = None) -> RingSpec:
    """``[(X,3), (L,3), (F,unbounded)]`` followed by the given auxiliaries."""
    return make_ring([("X", 3), ("L", 3), ("F", None), *auxiliaries], degree_cap)


class ClassElement:
    """Element of a truncated ring: exponent vector -> :class:`DegreeScalar`."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Mapping[tuple[int, ...], DegreeScalar | int]):
        clean: dict[tuple[int, ...], DegreeScalar] = {}
        nilp = ring.nilpotency
        for exp, c in terms.items():
            exp = tuple(exp)
            if len(exp) != ring.ngens:
                raise RingError(f"exponent {exp} does not match ring with {ring.ngens} generators")
            c = DegreeScalar.coerce(c)
            if c.is_zero() or not _admissible(exp, nilp, ring.degree_cap):
                continue
            if any(e < 0 for e in exp):
                raise RingError(f"negative exponent {exp}")
            clean[exp] = c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, ring: RingSpec, terms: dict[tuple[int, ...], DegreeScalar]) -> "ClassElement":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "ring", ring)
        object.__setattr__(obj, "_terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("ClassElement is immutable")

    @property
    def terms(self) -> dict[tuple[int, ...], DegreeScalar]:
        return dict(self._terms)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], DegreeScalar]]:
        """Terms in canonical order: lexicographic on exponents, highest first."""
        return sorted(self._terms.items(), key=lambda item: item[0], reverse=True)

    def coefficient(self, exponents: Mapping[str, int] | tuple[int, ...]) -> DegreeScalar:
        if isinstance(exponents, Mapping):
            exp = [0] * self.ring.ngens
            for name, e in exponents.items():
                exp[self.ring.index(name)] = e
            exponents = tuple(exp)
        return self._terms.get(tuple(exponents), DegreeScalar())

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, ClassElement):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.ring, frozenset(self._terms.items()))))
        return self._hash

    def __add__(self, other):
        if isinstance(other, (int, DegreeScalar)):
            other = self.ring.constant(other)
        if not isinstance(other, ClassElement):
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return ClassElement._raw(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, DegreeScalar)):
            other = self.ring.constant(other)
        if not isinstance(other, ClassElement):
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, DegreeScalar)):
            s = DegreeScalar.coerce(other)
            if s.is_zero():
                return self.ring.zero()
            return ClassElement._raw(self.ring, {e: c * s for e, c in self._terms.items()})
        if not isinstance(other, ClassElement):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = mul(result, base)
            n >>= 1
            if n:
                base = mul(base, base)
        return result

    def degree_in(self, name: str) -> int:
        k = self.ring.index(name)
        return max((e[k] for e in self._terms), default=-1)

    def total_degrees(self) -> set[int]:
        return {sum(e) for e in self._terms}

    def map_coefficients(self, fn) -> "ClassElement":
        return ClassElement(self.ring, {e: fn(c) for e, c in self._terms.items()})

    def in_ring(self, ring: RingSpec) -> "ClassElement":
        """Re-embed into ``ring``, matching generators by name."""
        positions = [ring.index(name) for name in self.ring.names]
        terms = {}
        for exp, c in self._terms.items():
            new = [0] * ring.ngens
            for k, e in zip(positions, exp):
                new[k] = e
            terms[tuple(new)] = c
        return ClassElement(ring, terms)

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "terms": [{"exp": list(exp), "coeff": list(c.coeffs)} for exp, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ClassElement":
        ring = make_ring([(g["gen"], g["nilp"]) for g in data["ring"]])
        terms = {}
        for term in data["terms"]:
            terms[tuple(term["exp"])] = DegreeScalar(term["coeff"])
        return cls(ring, terms)

    def __repr__(self):
        return f"ClassElement({self})"

    def __str__(self):
        return format_element(self)


def _admissible(exp: tuple[int, ...], nilp: tuple[int | None, ...], cap: int | None) -> bool:
    unbounded = 0
    for e, n in zip(exp, nilp):
        if n is None:
            unbounded += e
        elif e >= n:
            return False
    return cap is None or unbounded <= cap


def format_element(e: ClassElement, star: bool = True) -> str:
    """Text form in the plain polynomial grammar, e.g. ``(d-1)*X^2*F + 2*L``."""
    if e.is_zero():
        return "0"
    names = e.ring.names
    chunks: list[tuple[bool, str]] = []
    for exp, c in e.sorted_terms():
        mono = "*".join(
            name if k == 1 else f"{name}^{k}" for name, k in zip(names, exp) if k
        )
        negative = c.leading() < 0
        mag = -c if negative else c
        if mag.is_constant():
            coeff = str(mag.constant())
            body = mono if (coeff == "1" and mono) else (f"{coeff}*{mono}" if mono else coeff)
        else:
            inner = _format_plain(mag.coeffs, star=True)
            body = f"({inner})*{mono}" if mono else f"({inner})"
        chunks.append((negative, body))
    text = ("-" if chunks[0][0] else "") + chunks[0][1]
    for negative, body in chunks[1:]:
        text += (" - " if negative else " + ") + body
    return text


def _check_same(a: ClassElement, b: ClassElement) -> None:
    if a.ring != b.ring:
        raise RingError(f"ring mismatch: {a.ring.names} vs {b.ring.names}")


def add(a: ClassElement, b: ClassElement) -> ClassElement:
    """Termwise sum."""
    _check_same(a, b)
    out = dict(a._terms)
    for exp, c in b._terms.items():
        prev = out.get(exp)
        if prev is None:
            out[exp] = c
        else:
            s = prev + c
            if s.is_zero():
                del out[exp]
            else:
                out[exp] = s
    return ClassElement._raw(a.ring, out)


def mul(a: ClassElement, b: ClassElement) -> ClassElement:
    """Product with nilpotency truncation."""
    _check_same(a, b)
    ring = a.ring
    nilp = ring.nilpotency
    cap = ring.degree_cap
    acc: dict[tuple[int, ...], tuple[int, ...]] = {}
    bt = [(eb, cb.coeffs) for eb, cb in b._terms.items()]
    for ea, ca in a._terms.items():
        cac = ca.coeffs
        for eb, cbc in bt:
            exp = tuple(x + y for x, y in zip(ea, eb))
            if not _admissible(exp, nilp, cap):
                continue
            prod = _pmul(cac, cbc)
            prev = acc.get(exp)
            acc[exp] = prod if prev is None else _padd(prev, prod)
    out = {exp: DegreeScalar(c) for exp, c in acc.items() if c}
    return ClassElement._raw(ring, out)


def power_sums(a: ClassElement, n: int) -> list[ClassElement]:
    """``[a**0, a**1, ..., a**n]``."""
    out = [a.ring.one()]
    for _ in range(n):
        out.append(mul(out[-1], a))
    return out


def diagonal_class(A: ClassElement, B: ClassElement, N: int) -> ClassElement:
    """Class of the proportionality locus: ``sum_{i=0}^{N} A**i * B**(N-i)``."""
    if N < 0:
        raise RingError(f"N must be non-negative, got {N}")
    _check_same(A, B)
    # Horner: S_0 = 1, S_k = A*S_{k-1} + B^k
    total = A.ring.one()
    b_pow = A.ring.one()
    for _ in range(N):
        b_pow = mul(b_pow, B)
        total = add(mul(A, total), b_pow)
    return total


def extract_coefficient(e: ClassElement, monomial: Mapping[str, int]) -> ClassElement:
    """Coefficient of ``monomial`` as an element of the remaining generators."""
    ring = e.ring
    picked = {ring.index(name): k for name, k in monomial.items()}
    for idx, k in picked.items():
        n = ring.nilpotency[idx]
        if k < 0 or (n is not None and k >= n):
            raise RingError(f"exponent {k} of {ring.names[idx]} outside the ring")
    keep = [i for i in range(ring.ngens) if i not in picked]
    sub = make_ring([ring.generators[i] for i in keep], ring.degree_cap)
    out: dict[tuple[int, ...], DegreeScalar] = {}
    for exp, c in e._terms.items():
        if all(exp[i] == k for i, k in picked.items()):
            out[tuple(exp[i] for i in keep)] = c
    return ClassElement._raw(sub, out)


def _split_by(e: ClassElement, idx: int) -> dict[int, ClassElement]:
    parts: dict[int, dict] = {}
    for exp, c in e._terms.items():
        k = exp[idx]
        rest = exp[:idx] + (0,) + exp[idx + 1 :]
        parts.setdefault(k, {})[rest] = c
    return {k: ClassElement._raw(e.ring, t) for k, t in parts.items()}


def _shift(e: ClassElement, idx: int, k: int) -> ClassElement:
    out = {}
    for exp, c in e._terms.items():
        new = list(exp)
        new[idx] += k
        out[tuple(new)] = c
    return ClassElement(e.ring, out)


def exact_divide(numerator: ClassElement, divisor: ClassElement, unit: str = "F") -> ClassElement:
    """Solve ``q * divisor == numerator`` exactly.

    The divisor must be of degree one in ``unit`` and contain ``unit**1`` alone
    with coefficient ``+1`` or ``-1``.  The quotient is found from the highest
    power of ``unit`` downward; a non-zero remainder raises :class:`RingError`.
    """
    _check_same(numerator, divisor)
    ring = divisor.ring
    if unit not in ring:
        raise RingError(f"ring has no generator {unit}")
    idx = ring.index(unit)
    if ring.nilpotency[idx] is not None:
        raise RingError(f"{unit} must be unbounded")
    f1 = tuple(1 if i == idx else 0 for i in range(ring.ngens))
    lead = divisor._terms.get(f1)
    if lead is None or not lead.is_constant() or abs(lead.constant()) != 1:
        raise RingError(f"divisor lacks a unit {unit}^1 term: {divisor}")
    sign = lead.constant()
    if sign < 0:
        divisor, numerator = -divisor, -numerator
    parts = _split_by(divisor, idx)
    if any(k > 1 for k in parts):
        raise RingError(f"divisor must have degree one in {unit}")
    rho = parts.get(0, ring.zero())
    unit_coeff = parts[1]
    nu = unit_coeff - ring.one()
    inverse = ring.one()
    if not nu.is_zero():
        term = ring.one()
        minus_nu = -nu
        for _ in range(sum(n for n in ring.nilpotency if n) + 1):
            term = mul(term, minus_nu)
            if term.is_zero():
                break
            inverse = add(inverse, term)
        else:
            raise RingError("coefficient of the unit generator is not invertible")
    layers = _split_by(numerator, idx)
    top = max(layers, default=-1)
    quotient_layers: dict[int, ClassElement] = {}
    carry = ring.zero()
    for j in range(top, 0, -1):
        target = add(layers.get(j, ring.zero()), -carry)
        q = mul(target, inverse)
        quotient_layers[j - 1] = q
        carry = mul(q, rho)
    remainder = add(layers.get(0, ring.zero()), -carry)
    if not remainder.is_zero():
        raise RingError(f"division leaves a non-zero remainder: {remainder}")
    q = ring.zero()
    for k, part in quotient_layers.items():
        q = add(q, _shift(part, idx, k))
    return q


def evaluate_at_degree(s: DegreeScalar | ClassElement, d_value: int):
    """Substitute an integer for ``d``."""
    if isinstance(s, DegreeScalar):
        return s.evaluate(d_value)
    if isinstance(s, ClassElement):
        return ClassElement(s.ring, {e: DegreeScalar.const(c.evaluate(d_value)) for e, c in s._terms.items()})
    raise TypeError(f"cannot evaluate {s!r}")
