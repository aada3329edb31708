"""Recognition of normal affine C*-surfaces from their DPD presentations.

Decision order for `recognize`:

1. hyperbolic with D+ + D- = 0 and D+ integral: the ring has a unit of
   nonzero degree, giving A^1 x C* (affine line) or C*^2 (punctured line);
2. the toric recognizer succeeds: V_{d,e};
3. equivalent to (0, -[1] - [-1]), swap allowed: P^1 x P^1 minus the diagonal;
4. equivalent to (1/2[0], -1/2[0] - [1]), swap allowed: P^2 minus a smooth conic;
5. parabolic on the punctured line with integral D: A^1 x C*;
6. otherwise Other.

Every verdict comes with the invariants that can be computed for the input,
and the invariants implied by the verdict are checked again on the spot.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .divisor import (
    CurveKind,
    DivisorPair,
    EquivalenceWitness,
    QDivisor,
    format_point,
    function_with_divisor,
    pairs_equivalent,
)
from .dpd import (
    DpdPresentation,
    GradingCase,
    MLClass,
    PresentationError,
    canonical_class,
    class_group,
    in_component,
    is_smooth,
    ml_class,
    multiple_fibers,
    negative_points,
    validate,
)
from .toric import ToricData, recognize_toric, vde_isomorphic


class Verdict(enum.Enum):
    A1_TIMES_CSTAR = "A1xCstar"
    CSTAR2 = "Cstar2"
    TORIC = "Toric"
    P1XP1_MINUS_DIAGONAL = "P1xP1MinusDiagonal"
    P2_MINUS_QUADRIC = "P2MinusQuadric"
    OTHER = "Other"


def _pair(curve, dplus, dminus) -> DivisorPair:
    return DivisorPair(QDivisor.of(curve, dplus), QDivisor.of(curve, dminus))


def quadric_complement_pair() -> DivisorPair:
    """(0, -[1] - [-1]) on the affine line."""
    return _pair(CurveKind.AFFINE_LINE, {}, {1: -1, -1: -1})


def conic_complement_pair() -> DivisorPair:
    """(1/2[0], -1/2[0] - [1]) on the affine line."""
    half = Fraction(1, 2)
    return _pair(CurveKind.AFFINE_LINE, {0: half}, {0: -half, 1: -1})


UNAVAILABLE_MULTIPLE_FIBERS = "unavailable: multiple fibers"


@dataclass
class SurfaceReport:
    """Invariant report; `to_json` fixes the field names of the CLI output."""

    case: GradingCase
    curve: CurveKind
    presentation: DpdPresentation
    verdict: Verdict
    toric: Optional[ToricData] = None
    ml_class: Optional[MLClass] = None
    l: Optional[int] = None
    negative_points: list = field(default_factory=list)
    multiple_fibers: list = field(default_factory=list)
    smooth: Optional[bool] = None
    class_group: object = None          # AbelianGroupPresentation or an "unavailable" string
    canonical: object = None            # CanonicalClass or an "unavailable" string
    canonical_form: Optional[DpdPresentation] = None
    witness: Optional[EquivalenceWitness] = None
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return all(self.checks.values())

    @property
    def verdict_label(self) -> str:
        if self.verdict is Verdict.TORIC:
            return str(self.toric)
        return self.verdict.value

    def to_json(self) -> dict:
        if hasattr(self.class_group, "rank"):
            cl = {"rank": self.class_group.rank, "torsion": list(self.class_group.torsion),
                  "text": self.class_group.describe()}
        else:
            cl = self.class_group
        canon = self.canonical.to_json() if hasattr(self.canonical, "to_json") else self.canonical
        return {
            "case": self.case.value,
            "curve": self.curve.value,
            "presentation": self.presentation.to_json(),
            "verdict": self.verdict.value,
            "label": self.verdict_label,
            "toric": None if self.toric is None else {"d": self.toric.d, "e": self.toric.e},
            "ml_class": None if self.ml_class is None else self.ml_class.value,
            "l": self.l,
            "negative_points": [p.to_json() for p in self.negative_points],
            "multiple_fibers": [{"point": format_point(p), "multiplicity": m}
                                for p, m in self.multiple_fibers],
            "smooth": self.smooth,
            "class_group": cl,
            "canonical_class": canon,
            "canonical_form": None if self.canonical_form is None else self.canonical_form.to_json(),
            "witness": None if self.witness is None else self.witness.to_json(),
            "checks": dict(self.checks),
            "consistent": self.consistent,
            "notes": list(self.notes),
        }


def _fill_hyperbolic_invariants(report: SurfaceReport, pres: DpdPresentation):
    if pres.curve is not CurveKind.AFFINE_LINE:
        report.notes.append("invariants are computed on the affine line only")
        return
    if pres.pair.total().is_zero():
        report.notes.append("D+ + D- = 0: no negative points")
        return
    report.ml_class = ml_class(pres)
    report.negative_points = negative_points(pres)
    report.l = len(report.negative_points)
    report.multiple_fibers = multiple_fibers(pres)
    report.smooth = is_smooth(pres)
    if report.multiple_fibers:
        report.class_group = UNAVAILABLE_MULTIPLE_FIBERS
        report.canonical = UNAVAILABLE_MULTIPLE_FIBERS
    else:
        report.class_group = class_group(pres)
        report.canonical = canonical_class(pres)


def _has_unit_of_nonzero_degree(pres: DpdPresentation) -> bool:
    # D+ = div f makes 1/f * u and f * u^-1 mutually inverse homogeneous units
    f = function_with_divisor(pres.pair.dplus)
    return in_component(pres, 1, f.inverse()) and in_component(pres, -1, f)


def _verify(report: SurfaceReport, pres: DpdPresentation):
    """Recompute the invariants a verdict implies and store each comparison."""
    v, c = report.verdict, report.checks
    if v in (Verdict.A1_TIMES_CSTAR, Verdict.CSTAR2) and pres.case is GradingCase.HYPERBOLIC:
        c["sum_zero"] = pres.pair.total().is_zero()
        c["unit_of_nonzero_degree"] = _has_unit_of_nonzero_degree(pres)
        expected = CurveKind.AFFINE_LINE if v is Verdict.A1_TIMES_CSTAR else CurveKind.PUNCTURED_LINE
        c["base_curve"] = pres.curve is expected
    elif v is Verdict.A1_TIMES_CSTAR:
        c["integral_divisor"] = pres.data.is_integral()
        c["base_curve"] = pres.curve is CurveKind.PUNCTURED_LINE
    elif v is Verdict.TORIC:
        d = report.toric.d
        cl = report.class_group
        c["l_is_1"] = report.l == 1
        c["class_group_cyclic_of_order_d"] = (hasattr(cl, "rank") and cl.rank == 0
                                             and cl.torsion == ((d,) if d > 1 else ()))
        c["smooth_iff_d_is_1"] = report.smooth == (d == 1)
        c["ml_trivial"] = report.ml_class is MLClass.TRIVIAL
    elif v is Verdict.P1XP1_MINUS_DIAGONAL:
        cl = report.class_group
        c["smooth"] = report.smooth is True
        c["class_group_is_Z"] = hasattr(cl, "rank") and cl.rank == 1 and cl.torsion == ()
        c["canonical_trivial"] = hasattr(report.canonical, "is_trivial") and report.canonical.is_trivial
        c["ml_trivial"] = report.ml_class is MLClass.TRIVIAL
    elif v is Verdict.P2_MINUS_QUADRIC:
        c["smooth"] = report.smooth is True
        c["ml_trivial"] = report.ml_class is MLClass.TRIVIAL
        c["l_is_1"] = report.l == 1
        c["one_double_fiber"] = [m for _, m in report.multiple_fibers] == [2]
    if report.witness is not None and pres.case is GradingCase.HYPERBOLIC:
        c["witness_reproduces_input"] = (report.witness.apply(report.canonical_form.pair)
                                         == pres.pair)


def recognize(pres: DpdPresentation) -> SurfaceReport:
    check = validate(pres)
    if not check.valid:
        raise PresentationError("; ".join(check.violations))
    report = SurfaceReport(pres.case, pres.curve, pres, Verdict.OTHER)

    if pres.case is GradingCase.HYPERBOLIC:
        pair = pres.pair
        _fill_hyperbolic_invariants(report, pres)
        if pair.total().is_zero() and pair.dplus.is_integral():
            report.verdict = (Verdict.A1_TIMES_CSTAR if pres.curve is CurveKind.AFFINE_LINE
                              else Verdict.CSTAR2)
            report.canonical_form = pres.with_pair(_pair(pres.curve, {}, {}))
            f = function_with_divisor(pair.dplus)
            report.witness = EquivalenceWitness(Fraction(1), Fraction(0), f, False)
        elif pres.curve is CurveKind.AFFINE_LINE and not pair.total().is_zero():
            toric = recognize_toric(pres)
            if toric is not None:
                report.verdict, report.toric = Verdict.TORIC, toric
            else:
                for verdict, target in ((Verdict.P1XP1_MINUS_DIAGONAL, quadric_complement_pair()),
                                        (Verdict.P2_MINUS_QUADRIC, conic_complement_pair())):
                    w = pairs_equivalent(pair, target, allow_swap=True)
                    if w is not None:
                        report.verdict = verdict
                        report.canonical_form = pres.with_pair(target)
                        report.witness = w
                        break
    elif pres.case is GradingCase.PARABOLIC:
        if pres.curve is CurveKind.PUNCTURED_LINE and pres.data.is_integral():
            report.verdict = Verdict.A1_TIMES_CSTAR
            report.canonical_form = DpdPresentation.parabolic(QDivisor.zero(pres.curve), pres.curve)
        elif pres.data.is_integral():
            report.notes.append("integral parabolic data on the affine line is not one of the "
                                "recognized surfaces")
    else:
        report.notes.append("elliptic presentations are reported without recognition")

    _verify(report, pres)
    return report


# uniqueness of hyperbolic presentations


class UniquenessVerdict(enum.Enum):
    EQUIVALENT = "equivalent"
    NOT_EQUIVALENT = "not_equivalent"
    COUNTEREXAMPLE_CANDIDATE = "counterexample_candidate"
    EQTORIC = "eqtoric"
    SAME_HOMOGENEOUS = "same_homogeneous"


@dataclass
class UniquenessReport:
    verdict: UniquenessVerdict
    witness: Optional[EquivalenceWitness] = None
    isomorphic: Optional[bool] = None
    differences: list = field(default_factory=list)
    detail: str = ""

    def to_json(self) -> dict:
        return {"verdict": self.verdict.value,
                "witness": None if self.witness is None else self.witness.to_json(),
                "isomorphic": self.isomorphic,
                "differences": list(self.differences),
                "detail": self.detail}


def _invariant_summary(pres: DpdPresentation) -> dict:
    out = {"ml_class": ml_class(pres).value,
           "l": len(negative_points(pres)),
           "smooth": is_smooth(pres),
           "multiple_fibers": sorted(m for _, m in multiple_fibers(pres))}
    if not out["multiple_fibers"]:
        g = class_group(pres)
        out["class_group"] = (g.rank, g.torsion)
    return out


def uniqueness_check(p: DpdPresentation, q: DpdPresentation) -> UniquenessReport:
    for pres in (p, q):
        if pres.case is not GradingCase.HYPERBOLIC or pres.curve is not CurveKind.AFFINE_LINE:
            raise PresentationError("uniqueness_check compares hyperbolic presentations on A^1")
        check = validate(pres)
        if not check.valid:
            raise PresentationError("; ".join(check.violations))
        if pres.pair.total().is_zero():
            raise PresentationError("D+ + D- must be nonzero")

    tp, tq = recognize_toric(p), recognize_toric(q)
    if tp is not None and tq is not None:
        same = vde_isomorphic(tp, tq)
        return UniquenessReport(UniquenessVerdict.EQTORIC, isomorphic=same,
                                detail=f"{tp.canonical()} vs {tq.canonical()}")

    mp, mq = ml_class(p), ml_class(q)
    if MLClass.TRIVIAL in (mp, mq):
        rp, rq = recognize(p), recognize(q)
        if rp.verdict is rq.verdict and rp.verdict is not Verdict.OTHER:
            return UniquenessReport(UniquenessVerdict.SAME_HOMOGENEOUS, isomorphic=True,
                                    witness=pairs_equivalent(p.pair, q.pair, allow_swap=True),
                                    detail=rp.verdict_label)
        raise PresentationError("both inputs need a nontrivial ML invariant "
                                "or the same homogeneous verdict")

    w = pairs_equivalent(p.pair, q.pair, allow_swap=True)
    if w is not None:
        return UniquenessReport(UniquenessVerdict.EQUIVALENT, witness=w, isomorphic=True,
                                detail=str(w))
    sp, sq = _invariant_summary(p), _invariant_summary(q)
    diffs = [k for k in sorted(set(sp) | set(sq)) if sp.get(k) != sq.get(k)]
    if diffs:
        return UniquenessReport(UniquenessVerdict.NOT_EQUIVALENT, isomorphic=False,
                                differences=diffs, detail="invariants differ")
    return UniquenessReport(UniquenessVerdict.COUNTEREXAMPLE_CANDIDATE, differences=[],
                            detail="equal invariants but no equivalence: flagged for review")
