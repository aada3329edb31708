"""Derivations of Q[x, y] and Q[t, u, u^-1].

A derivation is stored by the images of the two generators; on the Laurent
ring the image of u^-1 is forced to be -u^-2 * D(u).  Exponentials of
locally nilpotent derivations are returned as substitution maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exactmath import LAURENT, XY, IntMatrix, Poly2, smith_normal_form, snf_diagonal
from .exactmath.parsing import ParseError, parse_linear_form
from .exactmath.poly import VARIABLES

DEFAULT_LND_BOUND = 64


class DerivationError(ValueError):
    pass


@dataclass(frozen=True)
class PolyDerivation:
    images: tuple[Poly2, Poly2]

    def __post_init__(self):
        p, q = self.images
        if p.kind != q.kind:
            raise DerivationError("generator images live in different rings")

    @classmethod
    def of(cls, p: Poly2, q: Poly2) -> "PolyDerivation":
        return cls((p, q))

    @classmethod
    def zero(cls, kind: str = XY) -> "PolyDerivation":
        z = Poly2.zero(kind)
        return cls((z, z))

    @classmethod
    def parse(cls, text: str, kind: str | None = None) -> "PolyDerivation":
        """Parse ``P dx + Q dy`` (or ``P dt + Q du``)."""
        rest, p, q, kind = parse_linear_form(text, kind)
        if not rest.is_zero():
            raise ParseError(f"term {rest} carries no differential symbol")
        return cls((p, q))

    @property
    def kind(self) -> str:
        return self.images[0].kind

    def is_zero(self) -> bool:
        return self.images[0].is_zero() and self.images[1].is_zero()

    def __call__(self, f: Poly2) -> Poly2:
        if f.kind != self.kind:
            raise DerivationError(f"ring mismatch: {f.kind} vs {self.kind}")
        p, q = self.images
        return f.diff(0) * p + f.diff(1) * q

    def _same(self, other: "PolyDerivation"):
        if not isinstance(other, PolyDerivation):
            raise TypeError("expected a PolyDerivation")
        if other.kind != self.kind:
            raise DerivationError(f"ring mismatch: {self.kind} vs {other.kind}")

    def __add__(self, other):
        self._same(other)
        return PolyDerivation((self.images[0] + other.images[0], self.images[1] + other.images[1]))

    def __neg__(self):
        return PolyDerivation((-self.images[0], -self.images[1]))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        # scalars or ring elements (f * D is again a derivation)
        return PolyDerivation((self.images[0] * c, self.images[1] * c))

    __rmul__ = __mul__

    def generators(self) -> list[Poly2]:
        g0, g1 = Poly2.gens(self.kind)
        gens = [g0, g1]
        if self.kind == LAURENT:
            gens.append(g1 ** -1)
        return gens

    def __str__(self) -> str:
        v = VARIABLES[self.kind]
        parts = []
        for name, img in zip(v, self.images):
            if img.is_zero():
                continue
            if len(img) == 1:
                (mono, c), = img.items()
                unit = Poly2({mono: abs(c)}, self.kind)
                body = "" if (mono == (0, 0) and abs(c) == 1) else f"{unit} "
                sign = "-" if c < 0 else "+"
            else:
                body, sign = f"({img}) ", "+"
            term = f"{body}d{name}"
            if not parts:
                parts.append(("-" if sign == "-" else "") + term)
            else:
                parts.append(f" {sign} {term}")
        return "".join(parts) if parts else "0"

    def to_json(self) -> dict:
        v = VARIABLES[self.kind]
        return {"ring": self.kind, "text": str(self),
                "images": {v[0]: str(self.images[0]), v[1]: str(self.images[1])}}


def bracket(a: PolyDerivation, b: PolyDerivation) -> PolyDerivation:
    """[a, b] = a o b - b o a, evaluated on the generators."""
    a._same(b)
    g0, g1 = Poly2.gens(a.kind)
    return PolyDerivation(tuple(a(b(g)) - b(a(g)) for g in (g0, g1)))


def euler(weights: tuple[int, int], kind: str = XY) -> PolyDerivation:
    """The grading derivation w1*v1 d/dv1 + w2*v2 d/dv2."""
    g0, g1 = Poly2.gens(kind)
    return PolyDerivation((g0 * weights[0], g1 * weights[1]))


def homogeneous_components(d: PolyDerivation, weights: tuple[int, int]) -> dict[int, PolyDerivation]:
    """Split d into parts raising the weighted degree by exactly i."""
    kind = d.kind
    buckets: dict[int, list[dict]] = {}
    for j, img in enumerate(d.images):
        for (a, b), c in img.items():
            deg = a * weights[0] + b * weights[1] - weights[j]
            buckets.setdefault(deg, [{}, {}])[j][(a, b)] = c
    return {deg: PolyDerivation((Poly2(t0, kind), Poly2(t1, kind)))
            for deg, (t0, t1) in sorted(buckets.items())}


@dataclass(frozen=True)
class LndVerdict:
    nilpotent: bool
    order: Optional[int]
    bound: int

    def __bool__(self) -> bool:
        return self.nilpotent

    def __str__(self) -> str:
        if self.nilpotent:
            return f"Nilpotent({self.order})"
        return f"NotNilpotentWithinBound({self.bound})"


def is_lnd(d: PolyDerivation, bound: int = DEFAULT_LND_BOUND) -> LndVerdict:
    """Smallest k <= bound with d^k killing every generator (u^-1 included on
    the Laurent ring); an inconclusive verdict otherwise."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    order = 0
    for g in d.generators():
        v = g
        for k in range(1, bound + 1):
            v = d(v)
            if v.is_zero():
                order = max(order, k)
                break
        else:
            return LndVerdict(False, None, bound)
    return LndVerdict(True, order, bound)


@dataclass(frozen=True)
class RingMap:
    """Endomorphism given by substitution of the generators."""

    images: tuple[Poly2, Poly2]

    @classmethod
    def identity(cls, kind: str = XY) -> "RingMap":
        return cls(Poly2.gens(kind))

    @property
    def kind(self) -> str:
        return self.images[0].kind

    def __call__(self, f: Poly2) -> Poly2:
        return f.subs(self.images)

    def compose(self, inner: "RingMap") -> "RingMap":
        """self o inner: first inner, then self."""
        return RingMap(tuple(self(img) for img in inner.images))

    def is_identity(self) -> bool:
        return self.images == Poly2.gens(self.kind)

    def __str__(self) -> str:
        v = VARIABLES[self.kind]
        return "; ".join(f"{name} -> {img}" for name, img in zip(v, self.images))

    def to_json(self) -> dict:
        v = VARIABLES[self.kind]
        return {v[0]: str(self.images[0]), v[1]: str(self.images[1])}


def _exp_apply(d: PolyDerivation, g: Poly2, bound: int) -> Poly2:
    total = g
    term = g
    for k in range(1, bound + 1):
        term = d(term) * Fraction(1, k)
        if term.is_zero():
            return total
        total = total + term
    raise DerivationError("derivation is not nilpotent on the generators")


def exp_auto(d: PolyDerivation, bound: int = DEFAULT_LND_BOUND) -> RingMap:
    """exp(d) as a substitution map; d must be locally nilpotent."""
    if not is_lnd(d, bound):
        raise DerivationError(f"{d} is not locally nilpotent within {bound} steps")
    g0, g1 = Poly2.gens(d.kind)
    return RingMap((_exp_apply(d, g0, bound), _exp_apply(d, g1, bound)))


def conjugate_by(delta: PolyDerivation, phi: RingMap, phi_inv: RingMap) -> PolyDerivation:
    """The derivation phi_inv o delta o phi."""
    g0, g1 = Poly2.gens(delta.kind)
    return PolyDerivation(tuple(phi_inv(delta(phi(g))) for g in (g0, g1)))


def conjugate(delta: PolyDerivation, d: PolyDerivation,
              bound: int = DEFAULT_LND_BOUND) -> PolyDerivation:
    """exp(-d) o delta o exp(d), computed exactly."""
    delta._same(d)
    return conjugate_by(delta, exp_auto(d, bound), exp_auto(-d, bound))


# Jordan-Chevalley decomposition of linear derivations


@dataclass(frozen=True)
class JordanParts:
    semisimple: PolyDerivation
    nilpotent: PolyDerivation
    eigenvalues: tuple[Fraction, Fraction]


def linear_matrix(delta: PolyDerivation) -> list[list[Fraction]]:
    """M with (delta(x), delta(y))^T = M (x, y)^T; rejects non-linear input."""
    if delta.kind != XY:
        raise DerivationError("linear derivations are supported on Q[x, y] only")
    rows = []
    for img in delta.images:
        for (a, b), _ in img.items():
            if a + b != 1:
                raise DerivationError(f"{delta} is not linear")
        rows.append([img.coeff(1, 0), img.coeff(0, 1)])
    return rows


def _from_matrix(m) -> PolyDerivation:
    x, y = Poly2.gens(XY)
    return PolyDerivation(tuple(x * row[0] + y * row[1] for row in m))


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def linear_eigenvalues(delta: PolyDerivation) -> tuple[Fraction, Fraction]:
    m = linear_matrix(delta)
    tr = m[0][0] + m[1][1]
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    root = _rational_sqrt(tr * tr - 4 * det)
    if root is None:
        raise DerivationError(f"eigenvalues of {delta} are not rational")
    return (tr - root) / 2, (tr + root) / 2


def jordan_chevalley(delta: PolyDerivation) -> JordanParts:
    m = linear_matrix(delta)
    lam1, lam2 = linear_eigenvalues(delta)
    if lam1 != lam2:
        s = m
    else:
        s = [[lam1, Fraction(0)], [Fraction(0), lam1]]
    n = [[m[i][j] - s[i][j] for j in range(2)] for i in range(2)]
    return JordanParts(_from_matrix(s), _from_matrix(n), (lam1, lam2))


def generalized_eigenforms(delta: PolyDerivation) -> list[tuple[Poly2, Fraction]]:
    """Linear forms spanning the generalized eigenspaces of delta on degree-1 forms."""
    m = linear_matrix(delta)
    lam1, lam2 = linear_eigenvalues(delta)
    x, y = Poly2.gens(XY)
    if lam1 == lam2:
        return [(x, lam1), (y, lam1)]
    forms = []
    for lam in (lam1, lam2):
        # left null vector r of (M - lam I): r0*(m00-lam) + r1*m10 = 0, r0*m01 + r1*(m11-lam) = 0
        a, b = m[0][0] - lam, m[1][0]
        if a == 0 and b == 0:
            # first equation vacuous; M - lam I has rank one, so the second is not
            r = (m[1][1] - lam, -m[0][1])
        else:
            r = (b, -a)
        forms.append((x * r[0] + y * r[1], lam))
    return forms


def in_generalized_eigenspace(delta: PolyDerivation, f: Poly2, alpha) -> bool:
    alpha = Fraction(alpha)
    v = f
    for _ in range(max(f.total_degree(), 0) + 2):
        if v.is_zero():
            return True
        v = delta(v) - v * alpha
    return v.is_zero()


# eigenvalue lattice


@dataclass(frozen=True)
class EigenData:
    values: tuple[tuple[Fraction, ...], ...]
    rank: int
    basis: tuple[tuple[Fraction, ...], ...]
    coordinates: tuple[tuple[int, ...], ...]   # surjection M -> Z^rank


def eigen_lattice(values: Sequence) -> EigenData:
    """Rank of the subgroup of Q^m generated by `values` and a Z-basis for it."""
    vals = tuple(tuple(Fraction(c) for c in (v if isinstance(v, (tuple, list)) else (v,)))
                 for v in values)
    if not vals:
        return EigenData((), 0, (), ())
    dim = len(vals[0])
    if any(len(v) != dim for v in vals):
        raise ValueError("eigenvalue tuples of different lengths")
    den = 1
    for v in vals:
        for c in v:
            den = den * c.denominator // math.gcd(den, c.denominator)
    rows = [[int(c * den) for c in v] for v in vals]
    if not any(any(r) for r in rows):
        return EigenData(vals, 0, (), tuple(() for _ in vals))
    s, u, vmat = smith_normal_form(IntMatrix.of(rows))
    diag = snf_diagonal(s)
    r = sum(1 for x in diag if x)
    uinv = u.inverse()
    vinv = vmat.inverse()
    basis = tuple(tuple(Fraction(diag[j] * vinv[j, k], den) for k in range(dim)) for j in range(r))
    coords = tuple(tuple(uinv[i, j] for j in range(r)) for i in range(len(vals)))
    return EigenData(vals, r, basis, coords)


# normalization of semisimple derivations


class NormalizationError(DerivationError):
    """A guard of the degree-lowering loop failed; `reason` names which."""

    def __init__(self, reason: str, message: str, iterations: int = 0):
        super().__init__(f"{reason}: {message}")
        self.reason = reason
        self.iterations = iterations


@dataclass(frozen=True)
class NormalizationResult:
    c: Optional[Fraction]
    conjugators: tuple[PolyDerivation, ...]
    residual: PolyDerivation
    iterations: int
    reference: PolyDerivation
    witnesses: tuple[LndVerdict, ...] = field(default=())

    def automorphism(self, bound: int = DEFAULT_LND_BOUND) -> tuple[RingMap, RingMap]:
        return chain_automorphism(self.conjugators, self.residual.kind, bound)

    def to_json(self) -> dict:
        return {"c": None if self.c is None else str(self.c),
                "conjugators": [str(d) for d in self.conjugators],
                "residual": str(self.residual),
                "reference": str(self.reference),
                "iterations": self.iterations}


def chain_automorphism(conjugators: Sequence[PolyDerivation], kind: str = XY,
                       bound: int = DEFAULT_LND_BOUND) -> tuple[RingMap, RingMap]:
    """(phi, phi_inv) with original == conjugate_by(residual, phi, phi_inv).

    Each pass applied conjugate(., c_j), so phi_inv = exp(c_1) o ... o exp(c_n)
    and phi = exp(-c_n) o ... o exp(-c_1).
    """
    phi = RingMap.identity(kind)
    phi_inv = RingMap.identity(kind)
    for d in conjugators:
        phi = exp_auto(-d, bound).compose(phi)
        phi_inv = phi_inv.compose(exp_auto(d, bound))
    return phi, phi_inv


def proportionality(d: PolyDerivation, ref: PolyDerivation) -> Optional[Fraction]:
    """c with d == c * ref, or None."""
    if d.is_zero():
        return Fraction(0)
    for img_d, img_r in zip(d.images, ref.images):
        for mono, c in img_r.items():
            ratio = img_d.coeff(*mono) / c
            return ratio if d == ref * ratio else None
    return None


def normalize_semisimple(delta: PolyDerivation, weights: tuple[int, int],
                         bound: int = 32, lnd_bound: int = DEFAULT_LND_BOUND) -> NormalizationResult:
    """Remove positive-degree components one at a time by exp-conjugation.

    At each pass the top component d_l (l > 0) must be locally nilpotent and
    d' = d_l / (c l) must satisfy [[delta, d'], d'] = 0, where c is read off
    the degree-0 part c E (c = 1 if that part is not a nonzero multiple of the
    grading derivation E); then exp(d') delta exp(-d') = delta - d_l lowers
    the top degree.  The recorded conjugator is -d', the argument handed to
    `conjugate`.
    """
    ref = euler(weights, delta.kind)
    current = delta
    chain: list[PolyDerivation] = []
    witnesses: list[LndVerdict] = []
    previous_top = None
    for it in range(bound + 1):
        comps = homogeneous_components(current, weights)
        if not comps:
            break
        low, top = min(comps), max(comps)
        if low < 0:
            raise NormalizationError("negative_component",
                                     f"component of degree {low} < 0 in {current}", it)
        if top == 0:
            break
        if previous_top is not None and top >= previous_top:
            raise NormalizationError("degree_not_decreasing",
                                     f"top degree {top} after removing degree {previous_top}", it)
        if it == bound:
            raise NormalizationError("iteration_cap", f"{bound} passes without reaching degree 0", it)
        part = comps[top]
        verdict = is_lnd(part, lnd_bound)
        if not verdict:
            raise NormalizationError("top_not_lnd",
                                     f"top component {part} is not nilpotent within {lnd_bound}", it)
        # [c E, d_l] = c l d_l when the degree-0 part is c times the grading derivation
        scale = proportionality(comps[0], ref) if 0 in comps else None
        step = part * (Fraction(1, top) / (scale or 1))
        if not bracket(bracket(current, step), step).is_zero():
            raise NormalizationError("bracket_condition",
                                     f"[[delta, d'], d'] != 0 for d' = {step}", it)
        current = conjugate(current, -step, lnd_bound)
        chain.append(-step)
        witnesses.append(verdict)
        previous_top = top
    return NormalizationResult(proportionality(current, ref), tuple(chain), current,
                               len(chain), ref, tuple(witnesses))


def linearize(delta: PolyDerivation, weights: tuple[int, int], bound: int = 32,
              lnd_bound: int = DEFAULT_LND_BOUND) -> NormalizationResult:
    """Run the normalization loop for `weights`, then for the inverted grading.

    Both gradings describe the same C*-action. Parts that are negative for one
    are positive for the other, so a triangular conjugate of a diagonal action
    descends in exactly one of them. The first failure is re-raised if neither works.
    """
    try:
        return normalize_semisimple(delta, weights, bound, lnd_bound)
    except NormalizationError as first:
        if first.reason != "negative_component":
            raise
        try:
            return normalize_semisimple(delta, (-weights[0], -weights[1]), bound, lnd_bound)
        except NormalizationError:
            raise first from None
