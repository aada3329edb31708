import math
from fractions import Fraction

from hypothesis import settings
from hypothesis import strategies as st

from cstar.exactmath import LAURENT, XY, Poly2

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)
nonzero_fractions = small_fractions.filter(lambda q: q != 0)


@st.composite
def polys(draw, kind=XY, max_deg=3, max_terms=4):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        a = draw(st.integers(0, max_deg))
        lo = -max_deg if kind == LAURENT else 0
        b = draw(st.integers(lo, max_deg))
        terms[(a, b)] = draw(small_fractions)
    return Poly2(terms, kind)


def smooth_point_data(e_plus: int, m_plus: int, shift: int):
    """(D+(p), D-(p)) with e+ m- - e- m+ = -1, m- < 0.

    Solves e+ * m- - m+ * e- = -1 by the extended Euclidean algorithm and
    moves along the solution line until m- is negative.
    """
    assert m_plus > 0 and math.gcd(e_plus, m_plus) == 1
    # find (m-, e-) with e+ m- - m+ e- = -1
    g, s, r = _xgcd(e_plus, -m_plus)
    m_minus, e_minus = -s * g, -r * g
    # general solution: (m- + k m+, e- + k e+)
    k = (-m_minus) // m_plus - 1 - shift
    m_minus, e_minus = m_minus + k * m_plus, e_minus + k * e_plus
    assert m_minus < 0 and e_plus * m_minus - e_minus * m_plus == -1
    return Fraction(-e_plus, m_plus), Fraction(e_minus, m_minus)


def _xgcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0
