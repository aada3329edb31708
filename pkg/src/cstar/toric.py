"""Affine toric surfaces V_{d,e} = A^2 / Z_d and their hyperbolic gradings.

Z_d acts on C[X, Y] by X -> zeta X, Y -> zeta^e Y, so the invariant ring
is spanned by the monomials X^a Y^b with a + e*b = 0 mod d.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Optional

from .divisor import CurveKind, QDivisor, fractional_part, function_with_divisor, shift_pair
from .dpd import (
    DEFAULT_DEGREE_CAP,
    DpdPresentation,
    GradingCase,
    NegPointData,
    PresentationError,
)

CALIBRATION_MAX_D = 12


class ToricDataError(ValueError):
    """Well-formed but inadmissible (d, e)."""


@dataclass(frozen=True)
class ToricData:
    d: int
    e: int

    def __post_init__(self):
        if self.d < 1:
            raise ToricDataError(f"d must be positive, got {self.d}")
        if not 0 <= self.e < self.d:
            raise ToricDataError(f"e must satisfy 0 <= e < d, got e={self.e}, d={self.d}")
        if math.gcd(self.e, self.d) != 1:
            raise ToricDataError(f"gcd(e, d) must be 1, got gcd({self.e}, {self.d})")

    @classmethod
    def parse(cls, text: str) -> "ToricData":
        m = re.fullmatch(r"\s*V?\s*(-?\d+)\s*,\s*(-?\d+)\s*", text)
        if not m:
            raise ValueError(f"expected 'Vd,e', got {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    def __str__(self) -> str:
        return f"V{self.d},{self.e}"

    def canonical(self) -> "ToricData":
        """The representative min(e, e^-1 mod d) of the isomorphism class."""
        return ToricData(self.d, eqtoric_representative(self.d, self.e))

    def is_invariant(self, a: int, b: int) -> bool:
        return (a + self.e * b) % self.d == 0


def eqtoric_representative(d: int, e: int) -> int:
    if d == 1:
        return 0
    return min(e % d, pow(e, -1, d))


def vde_isomorphic(a: ToricData, b: ToricData) -> bool:
    if a.d != b.d:
        return False
    return a.e == b.e or (a.e * b.e) % a.d == 1 % a.d


def invariant_basis(t: ToricData) -> list[tuple[int, int]]:
    """Hilbert basis of {(a, b) in N^2 : a + e*b = 0 mod d}, highest X-power first."""
    d = t.d
    elems = [(a, b) for a in range(d + 1) for b in range(d + 1)
             if (a, b) != (0, 0) and t.is_invariant(a, b)]
    elem_set = set(elems)
    basis = []
    for a, b in elems:
        decomposable = any(
            (a2, b2) != (a, b) and a2 <= a and b2 <= b and (a - a2, b - b2) in elem_set
            for a2, b2 in elems)
        if not decomposable:
            basis.append((a, b))
    return sorted(basis, key=lambda ab: (-ab[0], ab[1]))


def format_monomial(a: int, b: int, names=("x", "y")) -> str:
    parts = []
    for v, e in zip(names, (a, b)):
        if e:
            parts.append(v if e == 1 else f"{v}^{e}")
    return "".join(parts) or "1"


@dataclass(frozen=True)
class ToricGrading:
    """Invariant-lattice data of V_{d,e} graded by deg X^a Y^b = (a*wx + b*wy) / g."""

    toric: ToricData
    weights: tuple[int, int]
    scale: int                 # g: gcd of all occurring degrees
    t: tuple[int, int]         # minimal invariant monomial of degree 0
    u: tuple[int, int]         # minimal invariant monomial of degree 1

    def degree(self, a: int, b: int) -> Fraction:
        wx, wy = self.weights
        return Fraction(a * wx + b * wy, self.scale)

    def minimal_monomial(self, i: int) -> Optional[tuple[int, int]]:
        """Invariant monomial of degree i with the smallest X-exponent."""
        wx, wy = self.weights
        target = i * self.scale
        # a minimal monomial is not divisible by t, so a < t_X or b < t_Y
        limit = self.t[0] + (abs(target) + self.t[1] * (-wy)) // wx + 1
        for a in range(limit + 1):
            num = a * wx - target
            if num % (-wy):
                continue
            b = num // (-wy)
            if b >= 0 and self.toric.is_invariant(a, b):
                return a, b
        return None

    def t_order(self, mono: tuple[int, int], i: int) -> int:
        """k with mono = t^k * u^i."""
        a = mono[0] - i * self.u[0]
        if self.t[0]:
            k, r = divmod(a, self.t[0])
        else:
            k, r = divmod(mono[1] - i * self.u[1], self.t[1])
        if r:
            raise ArithmeticError("monomial is not of the form t^k u^i")
        return k


def toric_grading(t: ToricData, weights: tuple[int, int]) -> ToricGrading:
    wx, wy = weights
    if not (wx > 0 > wy):
        raise PresentationError("weights must satisfy w_X > 0 > w_Y for a hyperbolic grading")
    basis = invariant_basis(t)
    g = 0
    for a, b in basis:
        g = math.gcd(g, a * wx + b * wy)
    # primitive direction of the degree-0 ray, then its first invariant multiple
    h = math.gcd(wx, -wy)
    direction = (-wy // h, wx // h)
    k = next(k for k in range(1, t.d + 1) if t.is_invariant(k * direction[0], k * direction[1]))
    tmono = (k * direction[0], k * direction[1])
    grading = ToricGrading(t, (wx, wy), g, tmono, (0, 0))
    umono = grading.minimal_monomial(1)
    if umono is None:
        raise PresentationError("degree-1 piece is empty after rescaling")
    return ToricGrading(t, (wx, wy), g, tmono, umono)


def _floor_sequence(grading: ToricGrading, sign: int, count: int) -> list[int]:
    """floor(|i| * D(0)) for i = sign*1 .. sign*count, read off minimal monomials."""
    seq = []
    for n in range(1, count + 1):
        i = sign * n
        mono = grading.minimal_monomial(i)
        if mono is None:
            raise PresentationError(f"no invariant monomial of degree {i}")
        seq.append(-grading.t_order(mono, i))
    return seq


def _recover_rational(seq: list[int]) -> Fraction:
    """q from the exact values floor(n q), n = 1..len(seq)."""
    q = max(Fraction(v, n) for n, v in enumerate(seq, start=1))
    if any(math.floor(n * q) != v for n, v in enumerate(seq, start=1)):
        raise ArithmeticError("sequence is not of the form floor(n q)")
    return q


def extract_dpd(t: ToricData, weights: tuple[int, int],
                degree_cap: int = DEFAULT_DEGREE_CAP) -> DpdPresentation:
    """Hyperbolic DPD pair of A_{d,e} graded by the one-parameter subgroup `weights`.

    The degree-i piece is A0 * t^k u^i; -k is floor(i D+(0)) for i > 0 and
    floor(|i| D-(0)) for i < 0, and D(0) is read back from these floors.
    Denominators divide the t-exponents, so the window is widened to cover them.
    """
    grading = toric_grading(t, weights)
    count = max(degree_cap, grading.t[0], grading.t[1])
    qplus = _recover_rational(_floor_sequence(grading, 1, count))
    qminus = _recover_rational(_floor_sequence(grading, -1, count))
    return DpdPresentation.hyperbolic({0: qplus}, {0: qminus})


# lattice pairs


@dataclass(frozen=True)
class LatticePair:
    vplus: tuple[int, int]
    vminus: tuple[int, int]

    def __post_init__(self):
        (ep, dp), (em, dm) = self.vplus, self.vminus
        if not (dp > 0 > dm):
            raise ValueError("need d+ > 0 > d-")
        if math.gcd(ep, dp) != 1 or math.gcd(em, dm) != 1:
            raise ValueError("lattice vectors must be primitive")

    @classmethod
    def from_point(cls, n: NegPointData) -> "LatticePair":
        return cls((n.e_plus, n.m_plus), (n.e_minus, n.m_minus))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _ordered_invariant(v: tuple[int, int], w: tuple[int, int]) -> tuple[int, int]:
    e1, d1 = v
    e2, d2 = w
    g, x, y = _xgcd(e1, d1)
    if abs(g) != 1:
        raise ValueError("first vector is not primitive")
    x, y = x * g, y * g
    # G = [[d1, -e1], [x, y]] has det 1 and sends v to (0, 1)
    a = d1 * e2 - e1 * d2
    b = x * e2 + y * d2
    if a == 0:
        raise ValueError("lattice vectors are dependent")
    d = abs(a)
    return d, b % d


def lattice_invariant(pair: LatticePair) -> tuple[int, int]:
    """Normal form (d, c) of the ray pair under GL2(Z), symmetric in the two rays."""
    return min(_ordered_invariant(pair.vplus, pair.vminus),
               _ordered_invariant(pair.vminus, pair.vplus))


# calibration between lattice normal forms and V_{d,e}

CALIBRATION_WEIGHTS = ((1, -1), (2, -1), (1, -2), (3, -2), (2, -5))


def build_calibration_table(max_d: int = CALIBRATION_MAX_D,
                            weights=CALIBRATION_WEIGHTS) -> dict[tuple[int, int], int]:
    """Map (d, c) -> eqtoric representative e, checked to be well defined and injective."""
    table: dict[tuple[int, int], int] = {}
    for d in range(1, max_d + 1):
        for e in range(d):
            if math.gcd(e, d) != 1:
                continue
            rep = eqtoric_representative(d, e)
            for w in weights:
                key = lattice_invariant(LatticePair.from_point(
                    _single_point_data(extract_dpd(ToricData(d, e), w))))
                if table.setdefault(key, rep) != rep:
                    raise AssertionError(f"calibration clash at {key}: {table[key]} vs {rep}")
    by_d: dict[int, list[int]] = {}
    for (d, _), rep in table.items():
        by_d.setdefault(d, []).append(rep)
    if any(len(v) != len(set(v)) for v in by_d.values()):
        raise AssertionError("calibration map is not injective")
    return table


@lru_cache(maxsize=1)
def calibration_table() -> dict[tuple[int, int], int]:
    raw = json.loads(resources.files("cstar").joinpath("toric_calibration.json").read_text())
    return {(int(r["d"]), int(r["c"])): int(r["e"]) for r in raw["entries"]}


def dump_calibration_table(table: dict[tuple[int, int], int]) -> str:
    lines = [json.dumps({"d": d, "c": c, "e": e}) for (d, c), e in sorted(table.items())]
    return ('{"max_d": %d, "entries": [\n  ' % CALIBRATION_MAX_D
            + ",\n  ".join(lines) + "\n]}\n")


def _single_point_data(pres: DpdPresentation) -> NegPointData:
    total = pres.pair.total()
    if len(total.support()) != 1:
        raise PresentationError("D+ + D- is not concentrated in one point")
    return NegPointData.at(pres.pair, total.support()[0])


def normalize_single_point(pres: DpdPresentation) -> Optional[DpdPresentation]:
    """Equivalent pair supported at 0 only, when D+ + D- sits at a single point
    and D+ is integral elsewhere; None otherwise."""
    if pres.case is not GradingCase.HYPERBOLIC or pres.curve is not CurveKind.AFFINE_LINE:
        return None
    pair = pres.pair
    support = pair.total().support()
    if len(support) != 1:
        return None
    p = support[0]
    frac = fractional_part(pair.dplus)
    if any(q != p for q in frac.support()):
        return None
    # kill D+ away from p, then move p to 0
    away = QDivisor(pair.curve, tuple((q, c) for q, c in pair.dplus.entries if q != p))
    shifted = shift_pair(pair, function_with_divisor(-away))
    moved = shifted.pullback(1, p)
    return pres.with_pair(moved)


def recognize_toric(pres: DpdPresentation) -> Optional[ToricData]:
    normal = normalize_single_point(pres)
    if normal is None:
        return None
    key = lattice_invariant(LatticePair.from_point(_single_point_data(normal)))
    d, c = key
    if d <= CALIBRATION_MAX_D:
        e = calibration_table().get(key)
        if e is None:
            return None
        return ToricData(d, e)
    return ToricData(d, eqtoric_representative(d, calibrated_character(d, c)))


def calibrated_character(d: int, c: int) -> int:
    """Closed form of the calibration map, used beyond the shipped table."""
    return c % d if d > 1 else 0
