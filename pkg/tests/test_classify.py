import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cstar.classify import (
    UNAVAILABLE_MULTIPLE_FIBERS,
    UniquenessVerdict,
    Verdict,
    conic_complement_pair,
    quadric_complement_pair,
    recognize,
    uniqueness_check,
)
from cstar.divisor import CurveKind, EquivalenceWitness
from cstar.dpd import DpdPresentation, MLClass, PresentationError
from cstar.exactmath import FactoredRational
from cstar.toric import ToricData, extract_dpd, vde_isomorphic

A1, CSTAR = CurveKind.AFFINE_LINE, CurveKind.PUNCTURED_LINE
half, third = Fraction(1, 2), Fraction(1, 3)
H = DpdPresentation.hyperbolic

QUADRIC = DpdPresentation.hyperbolic({}, {1: -1, -1: -1})
CONIC = DpdPresentation.hyperbolic({0: half}, {0: -half, 1: -1})
FULL = H({0: half, 1: third}, {0: -half, 1: -third, 2: -1})

REPORT_KEYS = ["case", "curve", "presentation", "verdict", "label", "toric", "ml_class", "l",
               "negative_points", "multiple_fibers", "smooth", "class_group",
               "canonical_class", "canonical_form", "witness", "checks", "consistent", "notes"]


def moved(pres, a, b, roots, swap):
    w = EquivalenceWitness(Fraction(a), Fraction(b), FactoredRational.from_roots(roots), swap)
    return pres.with_pair(w.apply(pres.pair))


moves = st.tuples(
    st.fractions(-3, 3, max_denominator=3).filter(lambda q: q != 0),
    st.fractions(-3, 3, max_denominator=3),
    st.lists(st.tuples(st.integers(-3, 3), st.integers(-2, 2)), max_size=3),
    st.booleans(),
)


class TestGoldens:
    def test_quadric_complement(self):
        r = recognize(QUADRIC)
        assert r.verdict is Verdict.P1XP1_MINUS_DIAGONAL
        assert r.ml_class is MLClass.TRIVIAL and r.l == 2 and r.smooth
        assert (r.class_group.rank, r.class_group.torsion) == (1, ())
        assert r.canonical.is_trivial
        assert r.consistent and r.checks["witness_reproduces_input"]

    def test_conic_complement(self):
        r = recognize(CONIC)
        assert r.verdict is Verdict.P2_MINUS_QUADRIC
        assert r.l == 1 and r.smooth and r.multiple_fibers == [(0, 2)]
        assert r.class_group == UNAVAILABLE_MULTIPLE_FIBERS
        assert r.consistent

    def test_canonical_pairs(self):
        assert recognize(QUADRIC.with_pair(quadric_complement_pair())).verdict \
            is Verdict.P1XP1_MINUS_DIAGONAL
        assert recognize(CONIC.with_pair(conic_complement_pair())).verdict \
            is Verdict.P2_MINUS_QUADRIC

    def test_plane(self):
        r = recognize(H({}, {0: -1}))
        assert r.verdict is Verdict.TORIC and r.verdict_label == "V1,0"
        assert r.smooth and r.consistent

    def test_a2_singularity(self):
        r = recognize(H({}, {0: -3}))
        assert r.verdict_label == "V3,2"
        assert not r.smooth and r.class_group.torsion == (3,)
        assert r.canonical.is_trivial and r.consistent

    def test_zero_sum_pairs(self):
        r = recognize(H({0: 2, 1: -1}, {0: -2, 1: 1}))
        assert r.verdict is Verdict.A1_TIMES_CSTAR and r.consistent
        r = H({1: 1}, {1: -1}, CSTAR)
        r = recognize(r)
        assert r.verdict is Verdict.CSTAR2 and r.consistent
        assert r.checks["unit_of_nonzero_degree"]

    def test_fractional_zero_sum_is_other(self):
        r = recognize(H({0: half}, {0: -half}))
        assert r.verdict is Verdict.OTHER

    def test_parabolic(self):
        r = recognize(DpdPresentation.parabolic({1: 2}, CSTAR))
        assert r.verdict is Verdict.A1_TIMES_CSTAR and r.consistent
        r = recognize(DpdPresentation.parabolic({1: 2}, A1))
        assert r.verdict is Verdict.OTHER and r.notes
        r = recognize(DpdPresentation.parabolic({1: half}, CSTAR))
        assert r.verdict is Verdict.OTHER

    def test_elliptic_is_reported(self):
        r = recognize(DpdPresentation.elliptic({0: 1}))
        assert r.verdict is Verdict.OTHER and r.notes

    def test_full_ml_is_other(self):
        r = recognize(FULL)
        assert r.verdict is Verdict.OTHER and r.ml_class is MLClass.FULL

    def test_invalid_input(self):
        with pytest.raises(PresentationError):
            recognize(H({0: 1}, {0: 1}))


class TestToricRecognition:
    @pytest.mark.parametrize("d,e", [(d, e) for d in range(1, 9) for e in range(d)
                                     if __import__("math").gcd(d, e) == 1])
    @pytest.mark.parametrize("weights", [(1, -1), (2, -1), (1, -3)])
    def test_extracted_presentations(self, d, e, weights):
        src = ToricData(d, e)
        pres = extract_dpd(src, weights)
        r = recognize(pres)
        assert r.verdict is Verdict.TORIC
        assert vde_isomorphic(r.toric, src)
        assert r.consistent


class TestInvariance:
    @given(st.sampled_from([QUADRIC, CONIC, H({}, {0: -3}), H({0: third}, {0: -2 * third})]),
           moves)
    def test_verdict_survives_moves(self, pres, move):
        other = moved(pres, *move)
        a, b = recognize(pres), recognize(other)
        assert a.verdict is b.verdict
        assert a.verdict_label == b.verdict_label or vde_isomorphic(a.toric, b.toric)
        assert b.consistent

    @given(moves)
    def test_other_stays_other(self, move):
        assert recognize(moved(FULL, *move)).verdict is Verdict.OTHER


class TestUniqueness:
    def test_equivalent_after_swap(self):
        r = uniqueness_check(FULL, FULL.with_pair(FULL.pair.swapped()))
        assert r.verdict is UniquenessVerdict.EQUIVALENT and r.isomorphic
        assert r.witness.apply(FULL.with_pair(FULL.pair.swapped()).pair) == FULL.pair

    def test_equivalent_after_reparametrization(self):
        q = FULL.with_pair(FULL.pair.pullback(Fraction(2), Fraction(3)))
        r = uniqueness_check(FULL, q)
        assert r.verdict is UniquenessVerdict.EQUIVALENT
        assert r.witness.apply(q.pair) == FULL.pair

    def test_not_equivalent(self):
        q = H({0: half, 1: third}, {0: -half, 1: -third, 2: -1, 3: -1})
        r = uniqueness_check(FULL, q)
        assert r.verdict is UniquenessVerdict.NOT_EQUIVALENT
        assert r.differences == ["l"] and r.isomorphic is False

    def test_counterexample_candidate(self):
        # same invariants; the point configurations {0,1,2,3} and {0,1,2,5} are not affinely related
        p = H({0: half, 1: third}, {0: -half, 1: -third, 2: -1, 3: -1})
        q = H({0: half, 1: third}, {0: -half, 1: -third, 2: -1, 5: -1})
        r = uniqueness_check(p, q)
        assert r.verdict is UniquenessVerdict.COUNTEREXAMPLE_CANDIDATE
        assert r.isomorphic is None and r.differences == []

    def test_eqtoric(self):
        r = uniqueness_check(H({}, {0: -2}), H({}, {0: -3}))
        assert r.verdict is UniquenessVerdict.EQTORIC and r.isomorphic is False
        r = uniqueness_check(extract_dpd(ToricData(5, 2), (1, -1)),
                             extract_dpd(ToricData(5, 3), (2, -1)))
        assert r.verdict is UniquenessVerdict.EQTORIC and r.isomorphic

    def test_same_homogeneous(self):
        r = uniqueness_check(QUADRIC, moved(QUADRIC, 2, 1, [(4, 1)], True))
        assert r.verdict is UniquenessVerdict.SAME_HOMOGENEOUS and r.isomorphic

    @pytest.mark.parametrize("p,q", [
        (H({}, {}), FULL),                                   # zero sum
        (DpdPresentation.elliptic({0: 1}), FULL),            # not hyperbolic
        (H({1: half}, {1: -1}, CSTAR), FULL),                # wrong curve
        (H({0: 1}, {0: 1}), FULL),                           # invalid
        (QUADRIC, FULL),                                     # trivial ML, mixed verdicts
    ])
    def test_preconditions(self, p, q):
        with pytest.raises(PresentationError):
            uniqueness_check(p, q)


class TestJson:
    @pytest.mark.parametrize("pres", [QUADRIC, CONIC, FULL, H({}, {0: -3}),
                                      DpdPresentation.parabolic({1: 2}, CSTAR),
                                      DpdPresentation.elliptic({0: 1})])
    def test_report_fields(self, pres):
        doc = recognize(pres).to_json()
        assert list(doc) == REPORT_KEYS
        assert json.loads(json.dumps(doc)) == doc
        assert DpdPresentation.from_json(doc["presentation"]) == pres

    def test_values(self):
        doc = recognize(QUADRIC).to_json()
        assert doc["verdict"] == "P1xP1MinusDiagonal" and doc["label"] == "P1xP1MinusDiagonal"
        assert doc["class_group"]["rank"] == 1 and doc["class_group"]["torsion"] == []
        assert doc["consistent"] is True and all(doc["checks"].values())
        doc = recognize(H({}, {0: -3})).to_json()
        assert doc["toric"] == {"d": 3, "e": 2} and doc["label"] == "V3,2"
        assert recognize(CONIC).to_json()["class_group"] == UNAVAILABLE_MULTIPLE_FIBERS

    def test_uniqueness_fields(self):
        doc = uniqueness_check(FULL, FULL).to_json()
        assert list(doc) == ["verdict", "witness", "isomorphic", "differences", "detail"]
        assert doc["verdict"] == "equivalent"

