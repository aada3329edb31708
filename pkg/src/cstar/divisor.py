"""Q-divisors on the affine line, the punctured line and the projective line.

Points are exact rationals; the projective line has one extra point
:data:`INF`.  Linear equivalence of divisor pairs on the (punctured) affine
line is decided exactly: every integral divisor there is principal, so two
pairs are equivalent iff their sums agree and the fractional parts of the
positive halves agree.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .exactmath import FactoredRational
from .exactmath.poly import parse_rational


class CurveKind(enum.Enum):
    AFFINE_LINE = "affine_line"
    PROJECTIVE_LINE = "projective_line"
    PUNCTURED_LINE = "punctured_line"

    @classmethod
    def parse(cls, text: str) -> "CurveKind":
        key = text.strip().lower().replace("-", "_")
        aliases = {"affineline": "affine_line", "projectiveline": "projective_line",
                   "puncturedline": "punctured_line", "a1": "affine_line", "p1": "projective_line",
                   "c*": "punctured_line"}
        key = aliases.get(key, key)
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown curve kind {text!r}")


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

Point = Union[Fraction, _Infinity]


def point_key(p: Point):
    return (1, 0) if p is INF else (0, p)


def parse_point(text) -> Point:
    if text is INF or (isinstance(text, str) and text.strip().lower() in ("inf", "infinity", "∞")):
        return INF
    if isinstance(text, Fraction):
        return text
    return parse_rational(text)


def format_point(p: Point) -> str:
    return "inf" if p is INF else str(p)


@dataclass(frozen=True)
class QDivisor:
    curve: CurveKind
    entries: tuple[tuple[Point, Fraction], ...] = ()

    def __post_init__(self):
        merged: dict = {}
        for p, c in self.entries:
            p = parse_point(p) if not isinstance(p, (Fraction, _Infinity)) else p
            if p is INF and self.curve is not CurveKind.PROJECTIVE_LINE:
                raise ValueError("the point at infinity lies only on the projective line")
            if p is not INF and self.curve is CurveKind.PUNCTURED_LINE and p == 0:
                raise ValueError("the point 0 is not on the punctured line")
            merged[p] = merged.get(p, Fraction(0)) + Fraction(c)
        items = tuple(sorted(((p, c) for p, c in merged.items() if c != 0),
                             key=lambda pc: point_key(pc[0])))
        object.__setattr__(self, "entries", items)

    @classmethod
    def of(cls, curve: CurveKind, mapping: Mapping | Iterable = ()) -> "QDivisor":
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        return cls(curve, tuple((p if p is INF else Fraction(p), Fraction(c)) for p, c in items))

    @classmethod
    def zero(cls, curve: CurveKind) -> "QDivisor":
        return cls(curve, ())

    def __getitem__(self, p) -> Fraction:
        if p is not INF:
            p = Fraction(p)
        return dict(self.entries).get(p, Fraction(0))

    def support(self) -> tuple[Point, ...]:
        return tuple(p for p, _ in self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for _, c in self.entries)

    def degree(self) -> Fraction:
        return sum((c for _, c in self.entries), Fraction(0))

    def _same(self, other: "QDivisor"):
        if not isinstance(other, QDivisor):
            raise TypeError("expected a QDivisor")
        if other.curve is not self.curve:
            raise ValueError(f"curve mismatch: {self.curve.value} vs {other.curve.value}")

    def __add__(self, other: "QDivisor") -> "QDivisor":
        self._same(other)
        return QDivisor(self.curve, self.entries + other.entries)

    def __neg__(self) -> "QDivisor":
        return QDivisor(self.curve, tuple((p, -c) for p, c in self.entries))

    def __sub__(self, other: "QDivisor") -> "QDivisor":
        return self + (-other)

    def __mul__(self, k) -> "QDivisor":
        k = Fraction(k)
        return QDivisor(self.curve, tuple((p, c * k) for p, c in self.entries))

    __rmul__ = __mul__

    def le_zero(self) -> bool:
        return all(c <= 0 for _, c in self.entries)

    def ge_zero(self) -> bool:
        return all(c >= 0 for _, c in self.entries)

    def pullback(self, a, b) -> "QDivisor":
        """phi^* D for phi(t) = a*t + b, i.e. (phi^* D)(p) = D(a*p + b)."""
        a, b = Fraction(a), Fraction(b)
        if a == 0:
            raise ValueError("affine map must be invertible")
        if self.curve is CurveKind.PUNCTURED_LINE and b != 0:
            raise ValueError("t -> a*t + b preserves the punctured line only for b = 0")
        return QDivisor(self.curve, tuple((p if p is INF else (p - b) / a, c)
                                          for p, c in self.entries))

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        out = []
        for i, (p, c) in enumerate(self.entries):
            mag = abs(c)
            coef = "" if mag == 1 else f"{mag}"
            term = f"{coef}[{format_point(p)}]"
            if i == 0:
                out.append(("-" if c < 0 else "") + term)
            else:
                out.append((" - " if c < 0 else " + ") + term)
        return "".join(out)

    def to_json(self) -> list[dict]:
        return [{"point": format_point(p), "coeff": str(c)} for p, c in self.entries]

    @classmethod
    def from_json(cls, curve: CurveKind, data) -> "QDivisor":
        if not isinstance(data, list):
            raise ValueError("divisor must be a list of {point, coeff} entries")
        items = []
        for entry in data:
            if not isinstance(entry, dict) or set(entry) != {"point", "coeff"}:
                raise ValueError(f"bad divisor entry {entry!r}")
            items.append((parse_point(str(entry["point"])), parse_rational(str(entry["coeff"]))))
        return cls(curve, tuple(items))


def floor_div(d: QDivisor) -> QDivisor:
    return QDivisor(d.curve, tuple((p, Fraction(math.floor(c))) for p, c in d.entries))


def fractional_part(d: QDivisor) -> QDivisor:
    return d - floor_div(d)


def divisor_of(f: FactoredRational, curve: CurveKind = CurveKind.AFFINE_LINE) -> QDivisor:
    """Principal divisor of f; on P^1 the pole/zero at infinity is included,
    on the punctured line the (unit) factor t is dropped."""
    entries = []
    for root, mult in f.factors:
        if curve is CurveKind.PUNCTURED_LINE and root == 0:
            continue
        entries.append((root, Fraction(mult)))
    if curve is CurveKind.PROJECTIVE_LINE:
        entries.append((INF, Fraction(-f.degree())))
    return QDivisor(curve, tuple(entries))


def function_with_divisor(d: QDivisor) -> FactoredRational:
    """A function f with div f = d for an integral divisor on the (punctured) line."""
    if not d.is_integral():
        raise ValueError("only integral divisors are principal")
    if d.curve is CurveKind.PROJECTIVE_LINE:
        if d.degree() != 0:
            raise ValueError("a principal divisor on P^1 has degree 0")
        return FactoredRational.from_roots((p, int(c)) for p, c in d.entries if p is not INF)
    return FactoredRational.from_roots((p, int(c)) for p, c in d.entries)


@dataclass(frozen=True)
class DivisorPair:
    dplus: QDivisor
    dminus: QDivisor

    def __post_init__(self):
        if self.dplus.curve is not self.dminus.curve:
            raise ValueError("D+ and D- must live on the same curve")

    @property
    def curve(self) -> CurveKind:
        return self.dplus.curve

    def total(self) -> QDivisor:
        return self.dplus + self.dminus

    def is_admissible(self) -> bool:
        return self.total().le_zero()

    def swapped(self) -> "DivisorPair":
        return DivisorPair(self.dminus, self.dplus)

    def pullback(self, a, b) -> "DivisorPair":
        return DivisorPair(self.dplus.pullback(a, b), self.dminus.pullback(a, b))

    def __str__(self) -> str:
        return f"({self.dplus}, {self.dminus})"


def shift_pair(pair: DivisorPair, f: FactoredRational) -> DivisorPair:
    """(D+ + div f, D- - div f)."""
    div = divisor_of(f, pair.curve)
    return DivisorPair(pair.dplus + div, pair.dminus - div)


@dataclass(frozen=True)
class EquivalenceWitness:
    """Carries P' to P: P = shift_pair(phi^*(P' or swapped P'), f), phi(t) = a*t + b."""

    a: Fraction
    b: Fraction
    f: FactoredRational
    swapped: bool

    def apply(self, source: DivisorPair) -> DivisorPair:
        base = source.swapped() if self.swapped else source
        return shift_pair(base.pullback(self.a, self.b), self.f)

    def to_json(self) -> dict:
        return {"map": {"a": str(self.a), "b": str(self.b)},
                "f": {"scalar": str(self.f.scalar),
                      "factors": [{"root": str(r), "mult": m} for r, m in self.f.factors]},
                "swapped": self.swapped}

    def __str__(self) -> str:
        return (f"t -> {self.a}*t + {self.b}, f = {self.f}"
                + (", swapped" if self.swapped else ""))


def _linear_witness(target: DivisorPair, moved: DivisorPair) -> Optional[FactoredRational]:
    """f with target = shift_pair(moved, f), if one exists."""
    if target.total() != moved.total():
        return None
    diff = target.dplus - moved.dplus
    if not diff.is_integral():
        return None
    return function_with_divisor(diff)


def _distinguished(pair: DivisorPair) -> tuple:
    pts = set(pair.total().support()) | set(fractional_part(pair.dplus).support())
    return tuple(sorted(pts, key=point_key))


def _candidate_maps(src_pts, dst_pts, curve: CurveKind):
    """Affine maps phi with phi(dst) == src as sets, where phi^* carries src-data to dst."""
    if len(src_pts) != len(dst_pts):
        return
    if not dst_pts:
        yield Fraction(1), Fraction(0)
        return
    if curve is CurveKind.PUNCTURED_LINE:
        # only t -> a*t preserves C*; a is fixed by where one point goes
        p0 = dst_pts[0]
        for q in src_pts:
            yield q / p0, Fraction(0)
        return
    p0 = dst_pts[0]
    if len(dst_pts) == 1:
        for q in src_pts:
            yield Fraction(1), q - p0
        return
    p1 = dst_pts[1]
    for q0 in src_pts:
        for q1 in src_pts:
            if q0 == q1:
                continue
            a = (q1 - q0) / (p1 - p0)
            yield a, q0 - a * p0


def pairs_equivalent(p: DivisorPair, q: DivisorPair, allow_swap: bool = True,
                     allow_curve_auto: bool = True) -> Optional[EquivalenceWitness]:
    """Search a witness carrying q to p, or return None.

    The candidate automorphisms are exactly the affine maps matching the
    distinguished points (support of D+ + D- and of {D+}) of both pairs, so the
    search is complete on the affine and punctured lines.
    """
    if p.curve is not q.curve:
        raise ValueError("pairs live on different curves")
    if p.curve is CurveKind.PROJECTIVE_LINE:
        raise ValueError("pair equivalence is implemented for the affine and punctured lines")
    sources = [(q, False)]
    if allow_swap:
        sources.append((q.swapped(), True))
    dst = _distinguished(p)
    for src, swapped in sources:
        if allow_curve_auto:
            maps = _candidate_maps(_distinguished(src), dst, p.curve)
        else:
            maps = iter([(Fraction(1), Fraction(0))])
        for a, b in maps:
            moved = src.pullback(a, b)
            f = _linear_witness(p, moved)
            if f is not None:
                return EquivalenceWitness(a, b, f, swapped)
    return None


def inverse_witness(w: EquivalenceWitness) -> EquivalenceWitness:
    """Witness for the reverse direction: carries P back to P'."""
    # P = phi^* (s P') + (div f, -div f)  =>  s P' = psi^*(P) + (div g, -div g), psi = phi^-1
    ainv = 1 / w.a
    binv = -w.b / w.a
    g = w.f.pullback(ainv, binv).inverse()
    if w.swapped:
        # swapping turns (div g, -div g) into (-div g, div g)
        g = g.inverse()
    return EquivalenceWitness(ainv, binv, g, w.swapped)
