"""Plain-text polynomial grammar.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/' INT)? unary)*  # juxtaposition multiplies
    unary  := '-' unary | power
    power  := atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'

Names are ``[A-Za-z][A-Za-z0-9_]*``.  Parsing yields a :class:`Poly` with exact
rational coefficients; helpers convert it into ring classes.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterator, Mapping

from .ring import ClassElement, DegreeScalar, RingSpec

Monomial = tuple[tuple[str, int], ...]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


class GrammarError(ValueError):
    pass


class Poly:
    """Sparse multivariate polynomial over Q keyed by sorted ``(name, exponent)`` tuples."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction | int] | None = None):
        self.terms: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            if c:
                self.terms[mono] = Fraction(c)

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): 1})

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    def __pow__(self, n: int) -> "Poly":
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def variables(self) -> set[str]:
        return {name for m in self.terms for name, _ in m}

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps = dict(a)
    for name, e in b:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted(exps.items()))


def _tokens(text: str) -> Iterator[tuple[str, str]]:
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        num, name, sym = m.groups()
        if num is not None:
            yield "int", num
        elif name is not None:
            yield "name", name
        else:
            if sym not in "+-*/^()":
                raise GrammarError(f"unexpected character {sym!r} in {text!r}")
            yield "sym", sym
        pos = m.end()


class _Parser:
    def __init__(self, text: str, env: Mapping[str, Poly], known: frozenset[str] = frozenset()):
        self.known = known
        self.toks = []
        names = known | set(env)
        for kind, val in _tokens(text):
            if kind == "name" and known and val not in names:
                parts = _split_name(val, names)
                if parts is None:
                    raise GrammarError(f"unknown name {val!r} in {text!r}")
                self.toks.extend(("name", part) for part in parts)
            else:
                self.toks.append((kind, val))
        self.k = 0
        self.env = env
        self.text = text

    def peek(self):
        return self.toks[self.k] if self.k < len(self.toks) else ("eof", "")

    def take(self):
        tok = self.peek()
        self.k += 1
        return tok

    def expect(self, sym):
        tok = self.take()
        if tok != ("sym", sym):
            raise GrammarError(f"expected {sym!r} in {self.text!r}")

    def parse(self) -> Poly:
        out = self.expr()
        if self.peek()[0] != "eof":
            raise GrammarError(f"trailing input in {self.text!r}")
        return out

    def expr(self) -> Poly:
        out = self.term()
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def _starts_atom(self) -> bool:
        kind, val = self.peek()
        return kind in ("int", "name") or (kind, val) == ("sym", "(")

    def term(self) -> Poly:
        out = self.unary()
        while True:
            if self.peek() == ("sym", "*"):
                self.take()
                out = out * self.unary()
            elif self.peek() == ("sym", "/"):
                self.take()
                kind, val = self.take()
                if kind != "int" or int(val) == 0:
                    raise GrammarError(f"division only by a non-zero integer in {self.text!r}")
                out = out * Poly.const(Fraction(1, int(val)))
            elif self._starts_atom():
                out = out * self.power()
            else:
                return out

    def unary(self) -> Poly:
        if self.peek() == ("sym", "-"):
            self.take()
            return -self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            kind, val = self.take()
            if kind != "int":
                raise GrammarError(f"exponent must be a non-negative integer in {self.text!r}")
            base = base ** int(val)
        return base

    def name(self, val: str) -> Poly:
        if val in self.env:
            return self.env[val]
        return Poly.var(val)

    def atom(self) -> Poly:
        kind, val = self.take()
        if kind == "int":
            return Poly.const(int(val))
        if kind == "name":
            return self.name(val)
        if (kind, val) == ("sym", "("):
            out = self.expr()
            self.expect(")")
            return out
        raise GrammarError(f"unexpected {val or 'end of input'!r} in {self.text!r}")


def _split_name(val: str, names) -> list[str] | None:
    """Split a run like ``lQ`` into known names, longest match first."""
    if not val:
        return []
    for k in range(len(val), 0, -1):
        head = val[:k]
        if head in names:
            rest = _split_name(val[k:], names)
            if rest is not None:
                return [head, *rest]
    return None


def parse_poly(text: str, env: Mapping[str, Poly] | None = None, known: set[str] | None = None) -> Poly:
    """Parse ``text``; names found in ``env`` are replaced by the given polynomials.

    When ``known`` is given, any other name is split into a product of known
    names (so ``2lQ^4`` reads as ``2*l*Q^4``) or rejected.
    """
    return _Parser(text, env or {}, frozenset(known or ())).parse()


def parse_class(text: str, ring: RingSpec, env: Mapping[str, str] | None = None, aliases: Mapping[str, str] | None = None) -> ClassElement:
    """Parse a class written in the ring's generators and the degree symbol ``d``.

    ``env`` maps helper names (such as ``Q``) to expressions; ``aliases`` renames
    variables (for instance ``l`` to ``L``).
    """
    aliases = dict(aliases or {})
    subs: dict[str, Poly] = {}
    for name, expr in (env or {}).items():
        subs[name] = parse_poly(expr, subs, set(ring.names) | {"d"} | set(subs))
    for src, dst in aliases.items():
        subs.setdefault(src, Poly.var(dst))
    known = set(ring.names) | {"d"} | set(subs)
    return poly_to_class(parse_poly(text, subs, known), ring)


def poly_to_class(p: Poly, ring: RingSpec) -> ClassElement:
    names = ring.names
    terms: dict[tuple[int, ...], DegreeScalar] = {}
    for mono, c in p.terms.items():
        if c.denominator != 1:
            raise GrammarError(f"class coefficients must be integers, got {c}")
        exp = [0] * len(names)
        dpow = 0
        for name, e in mono:
            if name == "d":
                dpow = e
            elif name in names:
                exp[names.index(name)] = e
            else:
                raise GrammarError(f"unknown generator {name!r}")
        coeff = [0] * (dpow + 1)
        coeff[dpow] = int(c)
        key = tuple(exp)
        terms[key] = terms.get(key, DegreeScalar()) + DegreeScalar(coeff)
    return ClassElement(ring, terms)


def parse_scalar(text: str) -> DegreeScalar:
    p = parse_poly(text)
    coeffs: dict[int, int] = {}
    for mono, c in p.terms.items():
        if c.denominator != 1:
            raise GrammarError(f"non-integer coefficient {c} in {text!r}")
        e = 0
        for name, k in mono:
            if name != "d":
                raise GrammarError(f"unexpected variable {name!r} in degree polynomial {text!r}")
            e = k
        coeffs[e] = coeffs.get(e, 0) + int(c)
    top = max(coeffs, default=-1)
    return DegreeScalar([coeffs.get(k, 0) for k in range(top + 1)])


def format_poly(p: Poly, order: list[str] | None = None) -> str:
    """Canonical text: terms by descending total degree, then lexicographic."""
    if not p.terms:
        return "0"
    rank = {n: k for k, n in enumerate(order)} if order else None

    def key(item):
        mono, _ = item
        deg = sum(e for _, e in mono)
        names = [(rank[n] if rank else n, -e) for n, e in mono]
        return (-deg, names)

    parts = []
    for mono, c in sorted(p.terms.items(), key=key):
        body = "*".join(n if e == 1 else f"{n}^{e}" for n, e in mono)
        mag = abs(c)
        mag_text = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
        if not body:
            text = mag_text
        elif mag == 1:
            text = body
        elif mag.denominator == 1:
            text = f"{mag_text}*{body}"
        else:
            text = f"{mag.numerator}*{body}/{mag.denominator}" if mag.numerator != 1 else f"{body}/{mag.denominator}"
        parts.append(("-" if c < 0 else "+", text))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, text in parts[1:]:
        out += f" {sign} {text}"
    return out
