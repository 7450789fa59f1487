"""Grounded operator matrix, exact determinants and incidence factorizations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Sequence

from .algebra import ONE, ZERO, Poly, RationalFunction
from .graph import BoundaryGraph


class PolyMatrix:
    """Dense matrix of :class:`Poly` entries (immutable)."""

    __slots__ = ("rows", "shape")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(Poly._coerce(x) for x in r) for r in rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "shape", (len(rows), ncols))

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> PolyMatrix:
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"PolyMatrix({[[str(x) for x in r] for r in self.rows]})"

    @property
    def is_square(self) -> bool:
        return self.shape[0] == self.shape[1]

    def transpose(self) -> PolyMatrix:
        n, m = self.shape
        return PolyMatrix([[self.rows[i][j] for i in range(n)] for j in range(m)])

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = ZERO
                for t in range(k):
                    a, b = self.rows[i][t], other.rows[t][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> PolyMatrix:
        return PolyMatrix([[self.rows[i][j] for j in cols] for i in rows])

    def minor(self, drop_row: int, drop_col: int) -> PolyMatrix:
        return minor(self, drop_row, drop_col)

    def det(self) -> Poly:
        return det_fraction_free(self)

    def to_json(self) -> list:
        return [[x.to_json() for x in r] for r in self.rows]


def minor(m: PolyMatrix, drop_row: int, drop_col: int) -> PolyMatrix:
    """Delete one row and one column (0-based indices)."""
    n, k = m.shape
    if not (0 <= drop_row < n and 0 <= drop_col < k):
        raise IndexError(f"({drop_row}, {drop_col}) out of range for shape {m.shape}")
    return m.submatrix(
        [i for i in range(n) if i != drop_row], [j for j in range(k) if j != drop_col]
    )


def det_fraction_free(m: PolyMatrix) -> Poly:
    """Determinant over Q[z] by Bareiss elimination with exact division.

    The empty matrix has determinant 1.
    """
    if not m.is_square:
        raise ValueError(f"determinant of a non-square {m.shape} matrix")
    n = m.shape[0]
    if n == 0:
        return ONE
    a = [list(r) for r in m.rows]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ZERO
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (piv * a[i][j] - a[i][k] * a[k][j]).exact_div(prev)
            a[i][k] = ZERO
        prev = piv
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def _perm_sign(p: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def det_leibniz(m: PolyMatrix) -> Poly:
    """Permutation-sum determinant; only for small cross-checks."""
    if not m.is_square:
        raise ValueError("non-square matrix")
    n = m.shape[0]
    total = ZERO
    for p in permutations(range(n)):
        term = ONE
        for i, j in enumerate(p):
            term = term * m.rows[i][j]
            if term.is_zero():
                break
        if term:
            total = total + (term if _perm_sign(p) > 0 else -term)
    return total


def build_theta(g: BoundaryGraph) -> PolyMatrix:
    """``chi (M + V - z I) chi*`` over the interior vertices, in model order."""
    n = g.n_interior
    pos = {x: i for i, x in enumerate(g.interior)}
    off = [[Fraction(0)] * n for _ in range(n)]
    for e in g.edges:
        if e.u in pos and e.v in pos:
            i, j = pos[e.u], pos[e.v]
            off[i][j] += e.w
            off[j][i] += e.w
    rows = []
    for i, x in enumerate(g.interior):
        rows.append(
            [Poly.linear(-1, g.potential[x]) if i == j else Poly.const(off[i][j]) for j in range(n)]
        )
    return PolyMatrix(rows)


def greens_function_linear_algebra(g: BoundaryGraph) -> list[list[RationalFunction]]:
    """Resolvent entries ``(-1)^(l+m) det(minor(theta, l, m)) / det(theta)``."""
    theta = build_theta(g)
    n = theta.shape[0]
    den = det_fraction_free(theta)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            cof = det_fraction_free(minor(theta, i, j))
            if (i + j) % 2:
                cof = -cof
            out[i][j] = out[j][i] = RationalFunction(cof, den)
    return out


# ---------------------------------------------------------------------------
# Incidence factorizations  chi B D B* chi* = theta
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IncidenceMatrices:
    """Incidence matrix over rows X and columns E + S, and the diagonal weights.

    ``b[r][c]`` is indexed by vertex position (model order) and column index
    into the deformed edge space.  Rows of boundary vertices are kept; use
    :meth:`grounded` for the chi-restricted version.
    """

    form: str
    b: tuple[tuple[int, ...], ...]
    d: tuple[Poly, ...]
    n_interior: int

    def grounded(self, drop: Iterable[int] = ()) -> list[tuple[int, ...]]:
        """Interior rows of ``b`` except those in ``drop``."""
        drop = set(drop)
        return [self.b[r] for r in range(self.n_interior) if r not in drop]

    def product(self) -> PolyMatrix:
        """``chi B D B* chi*``."""
        rows = self.grounded()
        n = len(rows)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = ZERO
                for c, dc in enumerate(self.d):
                    s = rows[i][c] * rows[j][c]
                    if s:
                        acc = acc + dc.scale(s)
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def square_block(self, columns: Sequence[int], drop: Iterable[int] = ()) -> PolyMatrix:
        """Constant matrix on the grounded rows (minus ``drop``) and the given columns."""
        rows = self.grounded(drop)
        return PolyMatrix([[Poly.const(r[c]) for c in columns] for r in rows])


def build_incidence(g: BoundaryGraph, form: str, reverse: bool = False) -> IncidenceMatrices:
    """Incidence data for the Laplacian-type (``"L"``) or signless (``"Q"``) form.

    L-form orientation: each edge points from its earlier endpoint (in model
    order) to its later one; ``reverse=True`` flips every edge.
    """
    from .factors import weight_table

    form = form.upper()
    if form not in ("L", "Q"):
        raise ValueError(f"form must be 'L' or 'Q', not {form!r}")
    pos = {x: i for i, x in enumerate(g.vertices)}
    n_e = len(g.edges)
    ncols = n_e + g.n_interior
    b = [[0] * ncols for _ in g.vertices]
    for c, e in enumerate(g.edges):
        i, j = sorted((pos[e.u], pos[e.v]))
        if form == "L":
            o, t = (j, i) if reverse else (i, j)
            b[t][c] += 1
            b[o][c] -= 1
        else:
            b[i][c] += 1
            b[j][c] += 1
    for k in range(g.n_interior):
        b[k][n_e + k] = 1
    table = weight_table(g, form)
    return IncidenceMatrices(form, tuple(map(tuple, b)), table.weights, g.n_interior)


__all__ = [
    "PolyMatrix",
    "IncidenceMatrices",
    "build_incidence",
    "build_theta",
    "det_fraction_free",
    "det_leibniz",
    "greens_function_linear_algebra",
    "minor",
]
