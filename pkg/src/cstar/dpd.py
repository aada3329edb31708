"""Graded rings A0[D] and A0[D+, D-] built from Q-divisors, and their invariants.

Conventions at a point p with (D+ + D-)(p) < 0 follow the usual encoding

    D+(p) = -e+/m+,  m+ > 0        D-(p) = e-/m-,  m- < 0

so smoothness at p is the determinant condition e+ m- - e- m+ = -1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .divisor import (
    INF,
    CurveKind,
    DivisorPair,
    QDivisor,
    divisor_of,
    floor_div,
    fractional_part,
    point_key,
)
from .exactmath import AbelianGroupPresentation, FactoredRational, abelian_group_from_relations

DEFAULT_DEGREE_CAP = 32


class GradingCase(enum.Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"

    @classmethod
    def parse(cls, text: str) -> "GradingCase":
        key = text.strip().lower()
        for case in cls:
            if case.value == key:
                return case
        raise ValueError(f"unknown grading case {text!r}")


class MLClass(enum.Enum):
    TRIVIAL = "Trivial"
    LINE_POLY = "LinePoly"
    FULL = "Full"


class PresentationError(ValueError):
    """Raised when an operation is called outside its supported cases."""


@dataclass(frozen=True)
class DpdPresentation:
    case: GradingCase
    curve: CurveKind
    data: Union[QDivisor, DivisorPair]

    def __post_init__(self):
        if self.data.curve is not self.curve:
            raise ValueError("divisor data lives on a different curve")
        if self.case is GradingCase.HYPERBOLIC and not isinstance(self.data, DivisorPair):
            raise ValueError("a hyperbolic presentation needs a divisor pair")
        if self.case is not GradingCase.HYPERBOLIC and not isinstance(self.data, QDivisor):
            raise ValueError(f"a {self.case.value} presentation needs a single divisor")

    @classmethod
    def hyperbolic(cls, dplus, dminus, curve: CurveKind = CurveKind.AFFINE_LINE) -> "DpdPresentation":
        if not isinstance(dplus, QDivisor):
            dplus = QDivisor.of(curve, dplus)
        if not isinstance(dminus, QDivisor):
            dminus = QDivisor.of(curve, dminus)
        return cls(GradingCase.HYPERBOLIC, curve, DivisorPair(dplus, dminus))

    @classmethod
    def elliptic(cls, d) -> "DpdPresentation":
        if not isinstance(d, QDivisor):
            d = QDivisor.of(CurveKind.PROJECTIVE_LINE, d)
        return cls(GradingCase.ELLIPTIC, CurveKind.PROJECTIVE_LINE, d)

    @classmethod
    def parabolic(cls, d, curve: CurveKind = CurveKind.AFFINE_LINE) -> "DpdPresentation":
        if not isinstance(d, QDivisor):
            d = QDivisor.of(curve, d)
        return cls(GradingCase.PARABOLIC, curve, d)

    @property
    def pair(self) -> DivisorPair:
        if not isinstance(self.data, DivisorPair):
            raise PresentationError("not a hyperbolic presentation")
        return self.data

    def with_pair(self, pair: DivisorPair) -> "DpdPresentation":
        return DpdPresentation(self.case, self.curve, pair)

    def __str__(self) -> str:
        return f"{self.case.value}/{self.curve.value}: {self.data}"

    def to_json(self) -> dict:
        doc = {"case": self.case.value, "curve": self.curve.value}
        if isinstance(self.data, DivisorPair):
            doc["dplus"] = self.data.dplus.to_json()
            doc["dminus"] = self.data.dminus.to_json()
        else:
            doc["divisor"] = self.data.to_json()
        return doc

    @classmethod
    def from_json(cls, doc) -> "DpdPresentation":
        if not isinstance(doc, dict):
            raise ValueError("presentation document must be a JSON object")
        try:
            case = GradingCase.parse(str(doc["case"]))
            curve = CurveKind.parse(str(doc["curve"]))
        except KeyError as err:
            raise ValueError(f"missing field {err.args[0]!r}") from None
        if case is GradingCase.HYPERBOLIC:
            dplus = QDivisor.from_json(curve, doc.get("dplus", []))
            dminus = QDivisor.from_json(curve, doc.get("dminus", []))
            return cls(case, curve, DivisorPair(dplus, dminus))
        return cls(case, curve, QDivisor.from_json(curve, doc.get("divisor", [])))


@dataclass(frozen=True)
class NegPointData:
    point: Fraction
    e_plus: int
    m_plus: int
    e_minus: int
    m_minus: int

    @classmethod
    def at(cls, pair: DivisorPair, p) -> "NegPointData":
        qp, qm = pair.dplus[p], pair.dminus[p]
        return cls(Fraction(p), -qp.numerator, qp.denominator, -qm.numerator, -qm.denominator)

    @property
    def det(self) -> int:
        return self.e_plus * self.m_minus - self.e_minus * self.m_plus

    def to_json(self) -> dict:
        return {"point": str(self.point), "plus": [self.e_plus, self.m_plus],
                "minus": [self.e_minus, self.m_minus], "det": self.det}


@dataclass(frozen=True)
class GradedGenerator:
    degree: int
    function: FactoredRational

    def __str__(self) -> str:
        f = "" if self.function.is_constant() and self.function.scalar == 1 else str(self.function)
        if self.degree == 0:
            return f or "1"
        u = "u" if self.degree == 1 else f"u^{self.degree}"
        return f"{f}*{u}" if f else u


def _sections_generator(d: QDivisor, curve: CurveKind) -> FactoredRational:
    # H^0(O(D)) on A^1 or C* is A0 * prod (t - p)^(-D(p))
    return FactoredRational.from_roots(
        (p, -int(c)) for p, c in d.entries
        if not (curve is CurveKind.PUNCTURED_LINE and p == 0))


def graded_component(pres: DpdPresentation, i: int) -> Union[GradedGenerator, list[GradedGenerator]]:
    """Generator (or, on P^1, a basis) of the degree-i piece of the ring."""
    case, curve = pres.case, pres.curve
    if case is GradingCase.HYPERBOLIC:
        if curve is CurveKind.PROJECTIVE_LINE:
            raise PresentationError("hyperbolic presentations live on the affine or punctured line")
        if i == 0:
            return GradedGenerator(0, FactoredRational.one())
        d = pres.pair.dplus if i > 0 else pres.pair.dminus
        return GradedGenerator(i, _sections_generator(floor_div(d * abs(i)), curve))
    if i < 0:
        raise PresentationError(f"{case.value} rings have no components of negative degree")
    d = pres.data
    if case is GradingCase.PARABOLIC:
        if curve is CurveKind.PROJECTIVE_LINE:
            raise PresentationError("parabolic presentations live on the affine or punctured line")
        return GradedGenerator(i, _sections_generator(floor_div(d * i), curve))
    if curve is not CurveKind.PROJECTIVE_LINE:
        raise PresentationError("elliptic presentations live on the projective line")
    return elliptic_basis(d, i)


def elliptic_basis(d: QDivisor, i: int) -> list[GradedGenerator]:
    """Basis t^j * g0 (0 <= j <= deg) of H^0(P^1, O(floor(i D)))."""
    e = floor_div(d * i)
    n = int(e.degree())
    if n < 0:
        return []
    g0 = FactoredRational.from_roots((p, -int(c)) for p, c in e.entries if p is not INF)
    return [GradedGenerator(i, g0 * FactoredRational.from_roots([(0, j)])) for j in range(n + 1)]


def component_dimension(pres: DpdPresentation, i: int) -> int:
    if pres.case is not GradingCase.ELLIPTIC:
        raise PresentationError("finite dimensional components occur only in the elliptic case")
    return len(elliptic_basis(pres.data, i))


def in_component(pres: DpdPresentation, i: int, f: FactoredRational) -> bool:
    """Membership of f*u^i in the degree-i piece: div f + floor(iD) >= 0."""
    if pres.case is GradingCase.HYPERBOLIC:
        d = pres.pair.dplus if i >= 0 else pres.pair.dminus
    else:
        d = pres.data
    bound = floor_div(d * abs(i))
    return (divisor_of(f, pres.curve) + bound).ge_zero()


def divides(f: FactoredRational, g: FactoredRational, curve: CurveKind) -> bool:
    """True iff g / f is regular on the (affine or punctured) line."""
    return divisor_of(g / f, curve).ge_zero()


def _require_hyperbolic_affine(pres: DpdPresentation, what: str):
    if pres.case is not GradingCase.HYPERBOLIC:
        raise PresentationError(f"{what} needs a hyperbolic presentation")
    if pres.curve is not CurveKind.AFFINE_LINE:
        raise PresentationError(f"{what} needs the base curve A^1")


def ml_class(pres: DpdPresentation) -> MLClass:
    _require_hyperbolic_affine(pres, "ml_class")
    pair = pres.pair
    total = pair.total()
    if not total.le_zero():
        raise PresentationError("D+ + D- <= 0 is required")
    if total.is_zero():
        raise PresentationError("D+ + D- must be nonzero")
    small = [len(fractional_part(d).support()) <= 1 for d in (pair.dplus, pair.dminus)]
    if all(small):
        return MLClass.TRIVIAL
    if any(small):
        return MLClass.LINE_POLY
    return MLClass.FULL


def negative_points(pres: DpdPresentation) -> list[NegPointData]:
    _require_hyperbolic_affine(pres, "negative_points")
    pair = pres.pair
    return [NegPointData.at(pair, p) for p, c in pair.total().entries if c < 0]


def multiple_fibers(pres: DpdPresentation) -> list[tuple[Fraction, int]]:
    _require_hyperbolic_affine(pres, "multiple_fibers")
    pair = pres.pair
    total = pair.total()
    out = []
    for p in sorted(set(pair.dplus.support()) | set(pair.dminus.support()), key=point_key):
        if total[p] == 0 and pair.dplus[p].denominator != 1:
            out.append((p, pair.dplus[p].denominator))
    return out


def is_smooth(pres: DpdPresentation) -> bool:
    return all(n.det == -1 for n in negative_points(pres))


def _orbit_labels(points: list[NegPointData]) -> list[str]:
    labels = []
    for i, _ in enumerate(points, start=1):
        labels += [f"O{i}+", f"O{i}-"]
    return labels


def _require_no_multiple_fibers(pres: DpdPresentation):
    _require_hyperbolic_affine(pres, "class_group")
    if multiple_fibers(pres):
        raise PresentationError("class group is not available in the presence of multiple fibers")


def class_group_relations(points: list[NegPointData]) -> list[list[int]]:
    """Rows M_i (one per point) followed by sum_i E_i, in the O_i^+, O_i^- basis."""
    n = 2 * len(points)
    rows = []
    esum = [0] * n
    for k, pt in enumerate(points):
        row = [0] * n
        row[2 * k], row[2 * k + 1] = pt.m_plus, -pt.m_minus
        rows.append(row)
        esum[2 * k] += pt.e_plus
        esum[2 * k + 1] -= pt.e_minus
    if points:
        rows.append(esum)
    return rows


def class_group(pres: DpdPresentation) -> AbelianGroupPresentation:
    _require_no_multiple_fibers(pres)
    points = negative_points(pres)
    return abelian_group_from_relations(_orbit_labels(points), class_group_relations(points))


@dataclass(frozen=True)
class CanonicalClass:
    vector: tuple[int, ...]
    image: tuple[int, ...]
    is_trivial: bool
    extrapolated: bool = field(default=False)

    def to_json(self) -> dict:
        return {"vector": list(self.vector), "image": list(self.image),
                "trivial": self.is_trivial, "extrapolated": self.extrapolated}


def canonical_vector(points: list[NegPointData]) -> tuple[int, ...]:
    vec = []
    for pt in points:
        vec += [pt.m_plus - 1, -pt.m_minus - 1]
    return tuple(vec)


def canonical_class(pres: DpdPresentation) -> CanonicalClass:
    group = class_group(pres)
    points = negative_points(pres)
    vec = canonical_vector(points)
    image = group.reduce(vec)
    return CanonicalClass(vec, image, not any(image), extrapolated=len(points) != 2)


def eq3_holds(points: list[NegPointData]) -> bool:
    """m1+ + m1- == m2+ + m2- for two negative points."""
    if len(points) != 2:
        raise PresentationError("the relation concerns exactly two negative points")
    a, b = points
    return a.m_plus + a.m_minus == b.m_plus + b.m_minus


@dataclass
class ValidationReport:
    case: GradingCase
    curve: CurveKind
    violations: list[str]

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"case": self.case.value, "curve": self.curve.value,
                "valid": self.valid, "violations": list(self.violations)}


def validate(pres: DpdPresentation) -> ValidationReport:
    v = []
    case, curve = pres.case, pres.curve
    if case is GradingCase.ELLIPTIC:
        if curve is not CurveKind.PROJECTIVE_LINE:
            v.append("elliptic presentations need the projective line")
        if pres.data.degree() <= 0:
            v.append("positive degree required")
    elif case is GradingCase.PARABOLIC:
        if curve is CurveKind.PROJECTIVE_LINE:
            v.append("parabolic presentations need the affine or punctured line")
    else:
        if curve is CurveKind.PROJECTIVE_LINE:
            v.append("hyperbolic presentations need the affine or punctured line")
        for p, c in pres.pair.total().entries:
            if c > 0:
                v.append(f"D_++D_-≤ 0 violated at {p}: (D_++D_-)({p}) = {c}")
    return ValidationReport(case, curve, v)


def generator_products_closed(pres: DpdPresentation, i: int, j: int) -> bool:
    """gen(i) * gen(j) lies in A0 * gen(i + j) (same-sign degrees)."""
    gi, gj, gk = (graded_component(pres, k) for k in (i, j, i + j))
    return divides(gk.function, gi.function * gj.function, pres.curve)

