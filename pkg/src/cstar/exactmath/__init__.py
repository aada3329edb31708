"""Exact arithmetic: rational polynomials, factored rational functions, integer normal forms."""

from .factored import FactoredRational
from .parsing import ParseError, parse_linear_form, parse_polynomial
from .poly import LAURENT, XY, Poly2, parse_rational
from .snf import (
    AbelianGroupPresentation,
    IntMatrix,
    abelian_group_from_relations,
    smith_normal_form,
    snf_diagonal,
)

__all__ = [
    "LAURENT",
    "XY",
    "AbelianGroupPresentation",
    "FactoredRational",
    "IntMatrix",
    "ParseError",
    "Poly2",
    "abelian_group_from_relations",
    "parse_linear_form",
    "parse_polynomial",
    "parse_rational",
    "smith_normal_form",
    "snf_diagonal",
]
