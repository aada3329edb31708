"""Sparse bivariate polynomials with rational coefficients.

Two ring kinds are supported: the polynomial ring Q[x, y] and the Laurent
ring Q[t, u, u^-1], where only the exponent of u may be negative.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

XY = "xy"
LAURENT = "laurent"

VARIABLES = {XY: ("x", "y"), LAURENT: ("t", "u")}

Number = Union[int, Fraction]
Monomial = tuple[int, int]


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


def _sort_key(mono: Monomial):
    a, b = mono
    # graded: total degree ascending, then higher power of the first variable first
    return (a + b, -a, b)


class Poly2:
    """Immutable element of Q[x, y] or Q[t, u, u^-1]."""

    __slots__ = ("kind", "_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None, kind: str = XY):
        if kind not in VARIABLES:
            raise ValueError(f"unknown ring kind {kind!r}")
        clean: dict[Monomial, Fraction] = {}
        for (a, b), c in (terms or {}).items():
            a, b = int(a), int(b)
            if a < 0 or (b < 0 and kind == XY):
                raise ValueError(f"negative exponent ({a}, {b}) not allowed in ring {kind}")
            c = _frac(c)
            if c:
                clean[(a, b)] = clean.get((a, b), Fraction(0)) + c
                if not clean[(a, b)]:
                    del clean[(a, b)]
        self.kind = kind
        self._terms = tuple(sorted(clean.items(), key=lambda kv: _sort_key(kv[0])))
        self._hash = None

    # construction helpers

    @classmethod
    def const(cls, c: Number, kind: str = XY) -> "Poly2":
        return cls({(0, 0): c}, kind)

    @classmethod
    def zero(cls, kind: str = XY) -> "Poly2":
        return cls({}, kind)

    @classmethod
    def gens(cls, kind: str = XY) -> tuple["Poly2", "Poly2"]:
        return cls({(1, 0): 1}, kind), cls({(0, 1): 1}, kind)

    @classmethod
    def monomial(cls, a: int, b: int, c: Number = 1, kind: str = XY) -> "Poly2":
        return cls({(a, b): c}, kind)

    # basic accessors

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> tuple[tuple[Monomial, Fraction], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coeff(self, a: int, b: int) -> Fraction:
        return dict(self._terms).get((a, b), Fraction(0))

    def constant_value(self) -> Fraction | None:
        """The value of a constant polynomial, or None if non-constant."""
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1 and self._terms[0][0] == (0, 0):
            return self._terms[0][1]
        return None

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(a + b for (a, b), _ in self._terms)

    def weighted_degrees(self, weights: tuple[int, int]) -> set[int]:
        w1, w2 = weights
        return {a * w1 + b * w2 for (a, b), _ in self._terms}

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    # arithmetic

    def _check(self, other: "Poly2"):
        if other.kind != self.kind:
            raise ValueError(f"ring mismatch: {self.kind} vs {other.kind}")

    def _coerce(self, other) -> "Poly2":
        if isinstance(other, Poly2):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly2.const(other, self.kind)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for m, c in other._terms:
            terms[m] = terms.get(m, Fraction(0)) + c
        return Poly2(terms, self.kind)

    __radd__ = __add__

    def __neg__(self):
        return Poly2({m: -c for m, c in self._terms}, self.kind)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly2({m: c * other for m, c in self._terms}, self.kind)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[Monomial, Fraction] = {}
        for (a1, b1), c1 in self._terms:
            for (a2, b2), c2 in other._terms:
                m = (a1 + a2, b1 + b2)
                terms[m] = terms.get(m, Fraction(0)) + c1 * c2
        return Poly2(terms, self.kind)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / _frac(other))
        if isinstance(other, Poly2) and other.is_monomial():
            return self * other.monomial_inverse()
        return NotImplemented

    def monomial_inverse(self) -> "Poly2":
        """Inverse of a unit monomial c*u^b (Laurent ring) or a nonzero constant."""
        if len(self._terms) != 1:
            raise ValueError(f"{self} is not a unit")
        (a, b), c = self._terms[0]
        if a != 0 or (b != 0 and self.kind == XY):
            raise ValueError(f"{self} is not a unit in ring {self.kind}")
        return Poly2({(0, -b): 1 / c}, self.kind)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.monomial_inverse() ** (-n)
        result = Poly2.const(1, self.kind)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.constant_value() == other
        if not isinstance(other, Poly2):
            return NotImplemented
        return self.kind == other.kind and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.kind, self._terms))
        return self._hash

    # calculus and substitution

    def diff(self, var: int) -> "Poly2":
        """Partial derivative with respect to generator 0 or 1."""
        terms = {}
        for (a, b), c in self._terms:
            if var == 0 and a:
                terms[(a - 1, b)] = c * a
            elif var == 1 and b:
                terms[(a, b - 1)] = c * b
        return Poly2(terms, self.kind)

    def subs(self, images: tuple["Poly2", "Poly2"]) -> "Poly2":
        """Substitute the two generators by the given ring elements.

        Negative powers of the second generator require its image to be a
        unit monomial.
        """
        p, q = images
        self._check(p)
        self._check(q)
        result = Poly2.zero(self.kind)
        pcache: dict[int, Poly2] = {}
        qcache: dict[int, Poly2] = {}
        for (a, b), c in self._terms:
            if a not in pcache:
                pcache[a] = p ** a
            if b not in qcache:
                qcache[b] = q ** b
            result = result + pcache[a] * qcache[b] * c
        return result

    def homogeneous_parts(self, weights: tuple[int, int]) -> dict[int, "Poly2"]:
        w1, w2 = weights
        parts: dict[int, dict] = {}
        for (a, b), c in self._terms:
            parts.setdefault(a * w1 + b * w2, {})[(a, b)] = c
        return {d: Poly2(t, self.kind) for d, t in sorted(parts.items())}

    # text

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for i, (mono, c) in enumerate(self._terms):
            body = _format_term(mono, abs(c), self.kind)
            if i == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def __repr__(self) -> str:
        return f"Poly2({str(self)!r}, kind={self.kind!r})"

    @classmethod
    def parse(cls, text: str, kind: str | None = None) -> "Poly2":
        from .parsing import parse_polynomial

        return parse_polynomial(text, kind)


def _format_term(mono: Monomial, c: Fraction, kind: str) -> str:
    v1, v2 = VARIABLES[kind]
    a, b = mono
    factors = []
    for v, e in ((v1, a), (v2, b)):
        if e == 0:
            continue
        factors.append(v if e == 1 else f"{v}^{e}")
    mono_str = "".join(factors)
    if c.denominator == 1:
        cstr = "" if (c == 1 and mono_str) else str(c.numerator)
    else:
        cstr = f"({c})" if mono_str else str(c)
    return cstr + mono_str


def ring_kind_of(polys: Iterable[Poly2]) -> str:
    kinds = {p.kind for p in polys}
    if len(kinds) > 1:
        raise ValueError(f"mixed ring kinds {sorted(kinds)}")
    return kinds.pop() if kinds else XY


_RATIONAL = re.compile(r"^\s*-?\d+(/\d+)?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse 'a' or 'a/b' into an exact Fraction. Floats are rejected."""
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL.match(text):
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text.strip())
