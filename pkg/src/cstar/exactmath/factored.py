"""Rational functions of one variable kept in factored form over Q.

A :class:`FactoredRational` is ``scalar * prod (t - root)^mult`` with
pairwise distinct rational roots and nonzero integer multiplicities.  This
is enough to represent every function whose divisor is supported on
rational points, which is all the divisor code needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable


@dataclass(frozen=True)
class FactoredRational:
    scalar: Fraction
    factors: tuple[tuple[Fraction, int], ...] = ()

    def __post_init__(self):
        scalar = Fraction(self.scalar)
        if scalar == 0:
            raise ValueError("FactoredRational must be nonzero")
        merged: dict[Fraction, int] = {}
        for root, mult in self.factors:
            root = Fraction(root)
            merged[root] = merged.get(root, 0) + int(mult)
        factors = tuple(sorted((r, m) for r, m in merged.items() if m != 0))
        object.__setattr__(self, "scalar", scalar)
        object.__setattr__(self, "factors", factors)

    @classmethod
    def one(cls) -> "FactoredRational":
        return cls(Fraction(1))

    @classmethod
    def from_roots(cls, roots: Iterable[tuple], scalar=1) -> "FactoredRational":
        return cls(Fraction(scalar), tuple(roots))

    def multiplicity(self, root) -> int:
        return dict(self.factors).get(Fraction(root), 0)

    def is_constant(self) -> bool:
        return not self.factors

    def degree(self) -> int:
        """Degree as a rational function: zeros minus poles (all finite)."""
        return sum(m for _, m in self.factors)

    def __mul__(self, other: "FactoredRational") -> "FactoredRational":
        if not isinstance(other, FactoredRational):
            return NotImplemented
        return FactoredRational(self.scalar * other.scalar, self.factors + other.factors)

    def inverse(self) -> "FactoredRational":
        return FactoredRational(1 / self.scalar, tuple((r, -m) for r, m in self.factors))

    def __truediv__(self, other: "FactoredRational") -> "FactoredRational":
        if not isinstance(other, FactoredRational):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n: int) -> "FactoredRational":
        return FactoredRational(self.scalar ** n, tuple((r, m * n) for r, m in self.factors))

    def evaluate(self, t) -> Fraction:
        t = Fraction(t)
        val = self.scalar
        for r, m in self.factors:
            val *= (t - r) ** m
        return val

    def pullback(self, a, b) -> "FactoredRational":
        """The function t -> f(a*t + b), again in factored form."""
        a, b = Fraction(a), Fraction(b)
        if a == 0:
            raise ValueError("affine map must be invertible")
        # a*t + b - r = a * (t - (r - b)/a)
        scalar = self.scalar * a ** self.degree()
        return FactoredRational(scalar, tuple(((r - b) / a, m) for r, m in self.factors))

    def __str__(self) -> str:
        parts = []
        if self.scalar != 1 or not self.factors:
            parts.append(str(self.scalar) if self.scalar.denominator == 1 else f"({self.scalar})")
        for r, m in self.factors:
            if r == 0:
                base = "t"
            elif r > 0:
                base = f"(t - {r})"
            else:
                base = f"(t + {-r})"
            parts.append(base if m == 1 else f"{base}^{m}")
        return "".join(parts) if parts else "1"
