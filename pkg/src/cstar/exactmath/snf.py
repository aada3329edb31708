"""Integer matrices, Smith normal form and finitely generated abelian groups."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class IntMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        if not rows or not rows[0]:
            raise ValueError("IntMatrix dimensions must be positive")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.entries))
        return IntMatrix(tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                               for row in self.entries))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.entries)))

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return bareiss_det(self.tolist())

    def inverse(self) -> "IntMatrix":
        """Inverse of a unimodular matrix."""
        n = self.rows
        if n != self.cols:
            raise ValueError("inverse of a non-square matrix")
        a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
             for i, row in enumerate(self.entries)]
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c] != 0), None)
            if p is None:
                raise ValueError("singular matrix")
            a[c], a[p] = a[p], a[c]
            piv = a[c][c]
            a[c] = [v / piv for v in a[c]]
            for r in range(n):
                if r != c and a[r][c] != 0:
                    f = a[r][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        inv = [row[n:] for row in a]
        if any(v.denominator != 1 for row in inv for v in row):
            raise ValueError("matrix is not unimodular")
        return IntMatrix(tuple(tuple(int(v) for v in row) for row in inv))


def bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _row_op(a, i, k, q):
    # row_i -= q * row_k
    a[i] = [x - q * y for x, y in zip(a[i], a[k])]


def _col_op(a, j, k, q):
    # col_j -= q * col_k
    for row in a:
        row[j] -= q * row[k]


def _swap_rows(a, i, k):
    a[i], a[k] = a[k], a[i]


def _swap_cols(a, j, k):
    for row in a:
        row[j], row[k] = row[k], row[j]


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (S, U, V) with U @ m @ V == S diagonal and s_1 | s_2 | ...

    The pivot is always the nonzero entry of smallest absolute value in the
    remaining block, first found in row-major order, so U and V are
    reproducible.
    """
    rows, cols = m.rows, m.cols
    a = m.tolist()
    u = IntMatrix.identity(rows).tolist()
    v = IntMatrix.identity(cols).tolist()

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            i, j = best
            if i != t:
                _swap_rows(a, t, i)
                _swap_rows(u, t, i)
            if j != t:
                _swap_cols(a, t, j)
                _swap_cols(v, t, j)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // p
                    _row_op(a, i, t, q)
                    _row_op(u, i, t, q)
                    dirty |= a[i][t] != 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // p
                    _col_op(a, j, t, q)
                    _col_op(v, j, t, q)
                    dirty |= a[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            # bring a non-multiple into row t; the next pass yields a smaller pivot
            _row_op(a, t, bad[0], -1)
            _row_op(u, t, bad[0], -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return IntMatrix.of(a), IntMatrix.of(u), IntMatrix.of(v)


def snf_diagonal(s: IntMatrix) -> list[int]:
    return [s[i, i] for i in range(min(s.rows, s.cols))]


@dataclass(frozen=True)
class AbelianGroupPresentation:
    """Z^rank + sum Z/t_i, presented as Z^generators modulo relation rows."""

    generators: tuple[str, ...]
    rank: int
    torsion: tuple[int, ...]
    relations: tuple[tuple[int, ...], ...] = ()
    _snf: tuple = field(default=(), repr=False, compare=False)

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def reduce(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Image of a generator-coordinate vector in Z^rank x prod Z/t_i.

        Torsion coordinates are listed first, reduced into [0, t_i); free
        coordinates follow.
        """
        if len(vector) != len(self.generators):
            raise ValueError("vector length does not match generator count")
        if not self.relations:
            return tuple(int(x) for x in vector)
        diag, v = self._snf
        w = [sum(int(vector[i]) * v[i][j] for i in range(len(vector)))
             for j in range(len(vector))]
        tors, free = [], []
        for j, wj in enumerate(w):
            s = diag[j] if j < len(diag) else 0
            if s == 1:
                continue
            if s == 0:
                free.append(wj)
            else:
                tors.append(wj % s)
        return tuple(tors + free)

    def contains(self, vector: Sequence[int]) -> bool:
        """True iff the vector lies in the relation subgroup (is zero in the group)."""
        return not any(self.reduce(vector))

    def describe(self) -> str:
        parts = [f"Z/{t}" for t in self.torsion]
        if self.rank:
            parts.insert(0, "Z" if self.rank == 1 else f"Z^{self.rank}")
        return " + ".join(parts) if parts else "0"


def abelian_group_from_relations(gens: Sequence[str],
                                 rels: IntMatrix | Sequence[Sequence[int]] | None
                                 ) -> AbelianGroupPresentation:
    gens = tuple(gens)
    if isinstance(rels, IntMatrix):
        rows = rels.entries
    else:
        rows = tuple(tuple(int(x) for x in r) for r in (rels or ()))
    if any(len(r) != len(gens) for r in rows):
        raise ValueError("each relation needs one column per generator")
    if not rows or not gens:
        return AbelianGroupPresentation(gens, len(gens), (), rows)
    s, _, v = smith_normal_form(IntMatrix(rows))
    diag = snf_diagonal(s)
    nonzero = [d for d in diag if d]
    return AbelianGroupPresentation(
        generators=gens,
        rank=len(gens) - len(nonzero),
        torsion=tuple(d for d in nonzero if d > 1),
        relations=rows,
        _snf=(tuple(diag), v.entries),
    )
