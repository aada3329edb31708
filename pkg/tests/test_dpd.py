import itertools
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import smooth_point_data
from cstar.divisor import INF, CurveKind, EquivalenceWitness, QDivisor, divisor_of, floor_div
from cstar.dpd import (
    DpdPresentation,
    GradingCase,
    MLClass,
    NegPointData,
    PresentationError,
    canonical_class,
    class_group,
    component_dimension,
    divides,
    elliptic_basis,
    eq3_holds,
    generator_products_closed,
    graded_component,
    in_component,
    is_smooth,
    ml_class,
    multiple_fibers,
    negative_points,
    validate,
)
from cstar.exactmath import FactoredRational

A1, P1, CSTAR = CurveKind.AFFINE_LINE, CurveKind.PROJECTIVE_LINE, CurveKind.PUNCTURED_LINE
half, third = Fraction(1, 2), Fraction(1, 3)

QUADRIC = DpdPresentation.hyperbolic({}, {1: -1, -1: -1})
CONIC = DpdPresentation.hyperbolic({0: half}, {0: -half, 1: -1})
VERONESE = DpdPresentation.hyperbolic({}, {0: -2})
PLANE = DpdPresentation.hyperbolic({}, {0: -1})


def roots(f: FactoredRational):
    return dict((r, m) for r, m in f.factors)


class TestPresentation:
    def test_json_round_trip(self):
        for pres in (QUADRIC, CONIC, DpdPresentation.elliptic({0: 1}),
                     DpdPresentation.parabolic({2: third}, CSTAR)):
            assert DpdPresentation.from_json(pres.to_json()) == pres

    def test_json_errors(self):
        with pytest.raises(ValueError):
            DpdPresentation.from_json({"curve": "affine_line"})
        with pytest.raises(ValueError):
            DpdPresentation.from_json({"case": "hyperbolic", "curve": "elsewhere"})
        with pytest.raises(ValueError):
            DpdPresentation.from_json([1, 2])

    def test_case_needs_matching_data(self):
        with pytest.raises(ValueError):
            DpdPresentation(GradingCase.HYPERBOLIC, A1, QDivisor.zero(A1))


class TestGradedComponents:
    def test_negative_degree_quadric(self):
        g = graded_component(QUADRIC, -1)
        assert roots(g.function) == {1: 1, -1: 1}
        assert str(g) == "(t + 1)(t - 1)*u^-1"
        assert g.function.evaluate(3) == 8

    def test_positive_degree_conic(self):
        g = graded_component(CONIC, 2)
        assert roots(g.function) == {0: -1}
        assert str(g) == "t^-1*u^2"

    def test_degree_zero(self):
        assert graded_component(CONIC, 0).function == FactoredRational.one()

    def test_elliptic_basis_size(self):
        pres = DpdPresentation.elliptic({0: 1})
        assert len(graded_component(pres, 3)) == 4
        assert component_dimension(pres, 0) == 1

    def test_elliptic_rejects_negative_degree(self):
        with pytest.raises(PresentationError):
            graded_component(DpdPresentation.elliptic({0: 1}), -1)

    def test_membership(self):
        # t^-1 u^2 lies in the degree-2 piece of the conic presentation, t^-2 u^2 does not
        assert in_component(CONIC, 2, FactoredRational.from_roots([(0, -1)]))
        assert not in_component(CONIC, 2, FactoredRational.from_roots([(0, -2)]))

    @given(st.dictionaries(st.integers(-2, 2), st.fractions(-2, 2, max_denominator=5), max_size=3),
           st.dictionaries(st.integers(-2, 2), st.fractions(-2, 2, max_denominator=5), max_size=3),
           st.integers(1, 8), st.integers(1, 8), st.booleans())
    def test_multiplicative_closure(self, dp, dm, i, j, negative):
        pres = DpdPresentation.hyperbolic(dp, dm)
        if negative:
            i, j = -i, -j
        assert generator_products_closed(pres, i, j)

    @given(st.dictionaries(st.sampled_from([0, 1, 2, INF]), st.fractions(0, 2, max_denominator=4), min_size=1,
                           max_size=3), st.integers(0, 6), st.integers(0, 6))
    def test_elliptic_dimensions(self, mapping, i, j):
        d = QDivisor.of(P1, mapping)
        assume(d.degree() > 0)
        for k in (i, j, i + j):
            assert len(elliptic_basis(d, k)) == max(0, int(floor_div(d * k).degree()) + 1)
        # products of basis elements land in the (i + j)-piece
        for a, b in itertools.product(elliptic_basis(d, i), elliptic_basis(d, j)):
            f = a.function * b.function
            assert (divisor_of(f, P1) + floor_div(d * (i + j))).ge_zero()


class TestInvariants:
    def test_ml_classes(self):
        assert ml_class(QUADRIC) is MLClass.TRIVIAL
        assert ml_class(CONIC) is MLClass.TRIVIAL
        full = DpdPresentation.hyperbolic({0: half, 1: third}, {0: -half, 1: -third, 2: -1})
        assert ml_class(full) is MLClass.FULL
        line = DpdPresentation.hyperbolic({0: half, 1: third}, {0: -1, 1: -1, 2: -1})
        assert ml_class(line) is MLClass.LINE_POLY

    def test_ml_preconditions(self):
        with pytest.raises(PresentationError):
            ml_class(DpdPresentation.hyperbolic({0: 1}, {0: -1}))
        with pytest.raises(PresentationError):
            ml_class(DpdPresentation.elliptic({0: 1}))
        with pytest.raises(PresentationError):
            ml_class(DpdPresentation.hyperbolic({1: half}, {1: -1}, CSTAR))

    def test_negative_points(self):
        pts = negative_points(QUADRIC)
        assert [p.point for p in pts] == [-1, 1]
        for p in pts:
            assert (p.e_plus, p.m_plus, p.e_minus, p.m_minus) == (0, 1, 1, -1)
            assert p.det == -1
        (p,) = negative_points(CONIC)
        assert p.point == 1 and (p.e_plus, p.m_plus, p.e_minus, p.m_minus) == (0, 1, 1, -1)
        assert negative_points(DpdPresentation.hyperbolic({}, {})) == []

    def test_encoding_signs(self):
        pair = DpdPresentation.hyperbolic({0: Fraction(-2, 3)}, {0: Fraction(1, 4)}).pair
        n = NegPointData.at(pair, 0)
        assert (n.e_plus, n.m_plus, n.e_minus, n.m_minus) == (2, 3, -1, -4)
        assert pair.dplus[0] == Fraction(-n.e_plus, n.m_plus)
        assert pair.dminus[0] == Fraction(n.e_minus, n.m_minus)

    def test_multiple_fibers(self):
        assert multiple_fibers(CONIC) == [(0, 2)]
        assert multiple_fibers(QUADRIC) == []
        assert multiple_fibers(DpdPresentation.hyperbolic({5: third}, {5: -third})) == [(5, 3)]

    def test_smoothness(self):
        assert is_smooth(QUADRIC) and is_smooth(CONIC) and is_smooth(PLANE)
        assert not is_smooth(VERONESE)
        (p,) = negative_points(VERONESE)
        assert p.det == -2

    def test_class_groups(self):
        g = class_group(QUADRIC)
        assert (g.rank, g.torsion) == (1, ())
        g = class_group(VERONESE)
        assert (g.rank, g.torsion) == (0, (2,))
        assert class_group(PLANE).is_trivial()
        with pytest.raises(PresentationError):
            class_group(CONIC)

    def test_canonical_classes(self):
        k = canonical_class(QUADRIC)
        assert k.vector == (0, 0, 0, 0) and k.is_trivial and not k.extrapolated
        assert canonical_class(VERONESE).is_trivial
        # (0, -3[0]) is the A2 singularity xy = t^3: Gorenstein, K trivial
        k3 = canonical_class(DpdPresentation.hyperbolic({}, {0: -3}))
        assert k3.vector == (0, 0) and k3.is_trivial and k3.extrapolated
        # V_{3,1} graded by (1, -1): not Gorenstein, K has order 3
        v31 = DpdPresentation.hyperbolic({0: third}, {0: -2 * third})
        assert class_group(v31).torsion == (3,)
        assert not canonical_class(v31).is_trivial

    def test_eq3_needs_two_points(self):
        with pytest.raises(PresentationError):
            eq3_holds(negative_points(CONIC))

    @given(st.lists(st.tuples(st.integers(-6, 6), st.integers(1, 6), st.integers(0, 3)),
                    min_size=2, max_size=2))
    def test_eq3_matches_group_membership(self, data):
        entries_p, entries_m = {}, {}
        for point, (e, m, shift) in enumerate(data):
            assume(Fraction(e, m).denominator == m)
            entries_p[point], entries_m[point] = smooth_point_data(e, m, shift)
        pres = DpdPresentation.hyperbolic(entries_p, entries_m)
        assume(not multiple_fibers(pres))
        pts = negative_points(pres)
        assert len(pts) == 2 and is_smooth(pres)
        assert canonical_class(pres).is_trivial == eq3_holds(pts)


class TestValidation:
    def test_positive_degree(self):
        r = validate(DpdPresentation.elliptic({0: 1, 1: -1}))
        assert not r.valid and r.violations == ["positive degree required"]

    def test_sum_condition(self):
        r = validate(DpdPresentation.hyperbolic({0: Fraction(1, 4)}, {0: Fraction(1, 4)}))
        assert not r.valid
        assert r.violations[0].startswith("D_++D_-≤ 0")

    def test_valid(self):
        r = validate(CONIC)
        assert r.valid and r.case is GradingCase.HYPERBOLIC
        assert r.to_json()["valid"] is True

    def test_wrong_curves(self):
        assert not validate(DpdPresentation.parabolic({1: 1}, P1)).valid
        bad = DpdPresentation(GradingCase.ELLIPTIC, A1, QDivisor.of(A1, {0: 1}))
        assert not validate(bad).valid


admissible = st.tuples(
    st.dictionaries(st.integers(-2, 2), st.fractions(-2, 2, max_denominator=4), max_size=3),
    st.dictionaries(st.integers(-2, 2), st.fractions(-3, 0, max_denominator=4), max_size=3),
)


class TestInvariance:
    @given(admissible, st.lists(st.tuples(st.integers(-3, 3), st.integers(-2, 2)), max_size=3),
           st.fractions(-3, 3, max_denominator=3), st.fractions(-3, 3, max_denominator=3))
    def test_moves_preserve_invariants(self, data, froots, a, b):
        dp, extra = data
        assume(a != 0)
        # D- := -D+ + (something <= 0), so D+ + D- <= 0
        pres = DpdPresentation.hyperbolic(dp, {p: -c for p, c in dp.items()})
        pres = pres.with_pair(type(pres.pair)(pres.pair.dplus,
                                              pres.pair.dminus + QDivisor.of(A1, extra)))
        assume(not pres.pair.total().is_zero())
        moved = pres.with_pair(EquivalenceWitness(a, b, FactoredRational.from_roots(froots), False)
                               .apply(pres.pair))
        assert ml_class(moved) is ml_class(pres)
        assert len(negative_points(moved)) == len(negative_points(pres))
        assert sorted(m for _, m in multiple_fibers(moved)) == \
            sorted(m for _, m in multiple_fibers(pres))
        assert is_smooth(moved) == is_smooth(pres)
        if not multiple_fibers(pres):
            g, h = class_group(pres), class_group(moved)
            assert (g.rank, g.torsion) == (h.rank, h.torsion)
            assert canonical_class(pres).is_trivial == canonical_class(moved).is_trivial


def test_divides():
    f = FactoredRational.from_roots([(1, 1)])
    g = FactoredRational.from_roots([(1, 2), (3, 1)])
    assert divides(f, g, A1) and not divides(g, f, A1)
    assert divides(FactoredRational.from_roots([(0, 3)]), FactoredRational.one(), CSTAR)
