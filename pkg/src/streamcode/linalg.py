"""Dense matrices over GF(p^2) and exact elimination.

Entries are integer codes (see `streamcode.gf`). Base-field matrices are just
matrices whose codes are all below ``p``. Pivoting takes the first nonzero
entry, so every routine here is deterministic.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .gf import ExtElem, QuadExtField

__all__ = [
    "FieldMatrix",
    "SingularMatrixError",
    "GuardExceeded",
    "SolveStatus",
    "SolveResult",
    "rank",
    "solve",
    "invert",
    "left_null_space",
    "cauchy_matrix",
    "is_mds_parity",
    "is_mds_generator",
    "submatrix",
    "dump_matrix",
    "load_matrix",
    "matrix_to_dict",
    "matrix_from_dict",
]


class SingularMatrixError(ValueError):
    def __init__(self, column: int):
        super().__init__(f"matrix is singular: no pivot in column {column}")
        self.column = column


class GuardExceeded(RuntimeError):
    """A desk-scale guard refused an exhaustive computation."""


Index = int | slice | range | Sequence[int]


def _indices(sel: Index | None, size: int) -> list[int]:
    if sel is None:
        return list(range(size))
    if isinstance(sel, int):
        sel = [sel]
    elif isinstance(sel, slice):
        return list(range(size))[sel]
    out = list(sel)
    for i in out:
        if not 0 <= i < size:
            raise IndexError(f"index {i} out of range for dimension {size}")
    return out


@dataclass(frozen=True)
class FieldMatrix:
    field: QuadExtField
    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("data shape does not match declared dimensions")

    @classmethod
    def from_rows(cls, field: QuadExtField, rows: Iterable[Iterable[int]], cols: int | None = None) -> FieldMatrix:
        data = tuple(tuple(r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(field, len(data), cols, data)

    @classmethod
    def zeros(cls, field: QuadExtField, rows: int, cols: int) -> FieldMatrix:
        return cls(field, rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: QuadExtField, size: int) -> FieldMatrix:
        return cls(field, size, size, tuple(tuple(int(i == j) for j in range(size)) for i in range(size)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data[i][j]

    def entry(self, i: int, j: int) -> ExtElem:
        return self.field.elem(self.data[i][j])

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.data)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    @property
    def T(self) -> FieldMatrix:
        return FieldMatrix(self.field, self.cols, self.rows, tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: FieldMatrix) -> FieldMatrix:
        if self.field != other.field:
            raise ValueError("matrices over different fields")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ADD, MUL = self.field.ADD, self.field.MUL
        out = []
        for r in self.data:
            acc = [0] * other.cols
            for a, brow in zip(r, other.data):
                if a:
                    ma = MUL[a]
                    acc = [ADD[s][ma[b]] for s, b in zip(acc, brow)]
            out.append(tuple(acc))
        return FieldMatrix(self.field, self.rows, other.cols, tuple(out))

    def __add__(self, other: FieldMatrix) -> FieldMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        ADD = self.field.ADD
        return FieldMatrix(self.field, self.rows, self.cols,
                           tuple(tuple(ADD[a][b] for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def scale(self, c: int) -> FieldMatrix:
        m = self.field.MUL[c]
        return FieldMatrix(self.field, self.rows, self.cols, tuple(tuple(m[a] for a in r) for r in self.data))

    def __neg__(self) -> FieldMatrix:
        return self.scale(self.field.neg(1))

    def submatrix(self, rows: Index | None = None, cols: Index | None = None) -> FieldMatrix:
        return submatrix(self, rows, cols)

    def hstack(self, other: FieldMatrix) -> FieldMatrix:
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        return FieldMatrix(self.field, self.rows, self.cols + other.cols,
                           tuple(a + b for a, b in zip(self.data, other.data)))

    def with_entries(self, updates: dict[tuple[int, int], int]) -> FieldMatrix:
        rows = self.tolist()
        for (i, j), v in updates.items():
            rows[i][j] = v
        return FieldMatrix.from_rows(self.field, rows, self.cols)

    def is_base(self) -> bool:
        p = self.field.p
        return all(x < p for r in self.data for x in r)

    def __str__(self) -> str:
        fmt = self.field.format
        cells = [[fmt(x) if x >= self.field.p else str(x) for x in r] for r in self.data]
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join(" ".join(c.rjust(width) for c in r) for r in cells)


def submatrix(A: FieldMatrix, rows: Index | None = None, cols: Index | None = None) -> FieldMatrix:
    """Select rows and columns (ranges, slices or index lists), preserving order."""
    ri = _indices(rows, A.rows)
    ci = _indices(cols, A.cols)
    data = tuple(tuple(A.data[i][j] for j in ci) for i in ri)
    return FieldMatrix(A.field, len(ri), len(ci), data)


# -- elimination kernels on plain lists -------------------------------------------


def rref_rows(field: QuadExtField, rows: list[list[int]], pivot_cols: int | None = None) -> tuple[list[list[int]], list[int]]:
    """Gauss-Jordan reduction in place; returns (rows, pivot columns).

    Pivots are searched only in the first `pivot_cols` columns, but row
    operations span the full width (handy for augmented systems).
    """
    SUB, MUL = field.SUB, field.MUL
    inv = field.inv
    m = len(rows)
    width = len(rows[0]) if rows else 0
    if pivot_cols is None:
        pivot_cols = width
    pivots: list[int] = []
    r = 0
    for c in range(pivot_cols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        if prow[c] != 1:
            mi = MUL[inv(prow[c])]
            prow = [mi[x] for x in prow]
            rows[r] = prow
        for i in range(m):
            if i != r:
                f = rows[i][c]
                if f:
                    mf = MUL[f]
                    rows[i] = [SUB[x][mf[y]] for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank_rows(field: QuadExtField, rows: list[list[int]]) -> int:
    """Rank by forward elimination only (cheaper than a full RREF)."""
    SUB, MUL = field.SUB, field.MUL
    inv = field.inv
    rows = [list(r) for r in rows]
    m = len(rows)
    if not m:
        return 0
    width = len(rows[0])
    rk = 0
    for c in range(width):
        if rk == m:
            break
        piv = next((i for i in range(rk, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        prow = rows[rk]
        mi = MUL[inv(prow[c])]
        for i in range(rk + 1, m):
            f = rows[i][c]
            if f:
                mf = MUL[mi[f]]
                rows[i] = [SUB[x][mf[y]] for x, y in zip(rows[i], prow)]
        rk += 1
    return rk


def rank(A: FieldMatrix) -> int:
    if A.rows == 0 or A.cols == 0:
        return 0
    if A.rows > A.cols:
        A = A.T
    return rank_rows(A.field, [list(r) for r in A.data])


class SolveStatus(enum.Enum):
    UNIQUE = "unique"
    UNDERDETERMINED = "underdetermined"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class SolveResult:
    status: SolveStatus
    x: tuple[int, ...] | None = None
    """A particular solution; unique when status is UNIQUE."""
    free_columns: tuple[int, ...] = ()

    @property
    def unique(self) -> bool:
        return self.status is SolveStatus.UNIQUE


def solve(A: FieldMatrix, b: Sequence[int]) -> SolveResult:
    """Solve A x = b for a column vector x."""
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {A.rows}")
    aug = [list(r) + [v] for r, v in zip(A.data, b)]
    if not aug:
        return SolveResult(SolveStatus.UNIQUE if A.cols == 0 else SolveStatus.UNDERDETERMINED,
                           (0,) * A.cols, tuple(range(A.cols)))
    aug, pivots = rref_rows(A.field, aug, A.cols)
    for r in aug[len(pivots):]:
        if r[-1]:
            return SolveResult(SolveStatus.INCONSISTENT)
    x = [0] * A.cols
    for r, c in zip(aug, pivots):
        x[c] = r[-1]
    free = tuple(c for c in range(A.cols) if c not in set(pivots))
    status = SolveStatus.UNIQUE if not free else SolveStatus.UNDERDETERMINED
    return SolveResult(status, tuple(x), free)


def invert(A: FieldMatrix) -> FieldMatrix:
    if A.rows != A.cols:
        raise ValueError(f"cannot invert a {A.rows}x{A.cols} matrix")
    n = A.rows
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(A.data)]
    aug, pivots = rref_rows(A.field, aug, n)
    if len(pivots) < n:
        missing = next(c for c in range(n) if c not in pivots)
        raise SingularMatrixError(missing)
    return FieldMatrix(A.field, n, n, tuple(tuple(r[n:]) for r in aug))


def left_null_space(A: FieldMatrix) -> list[tuple[int, ...]]:
    """Basis of {v : v A = 0}; its size is rows - rank."""
    field = A.field
    if A.rows == 0:
        return []
    # v A = 0  <=>  A^T v^T = 0: null space of A^T.
    At = [list(r) for r in A.T.data] if A.cols else []
    if not At:
        return [tuple(int(i == j) for j in range(A.rows)) for i in range(A.rows)]
    red, pivots = rref_rows(field, At, A.rows)
    pivset = set(pivots)
    basis = []
    neg = field.neg
    for f in range(A.rows):
        if f in pivset:
            continue
        v = [0] * A.rows
        v[f] = 1
        for r, c in zip(red, pivots):
            v[c] = neg(r[f])
        basis.append(tuple(v))
    return basis


def cauchy_matrix(field: QuadExtField, xs: Sequence[int], ys: Sequence[int]) -> FieldMatrix:
    """Entry (i, j) = (x_i - y_j)^-1 over the base field."""
    p = field.p
    xs = [x % p for x in xs]
    ys = [y % p for y in ys]
    pts = xs + ys
    if len(set(pts)) != len(pts):
        raise ValueError("Cauchy evaluation points collide (xs and ys must be distinct and disjoint)")
    rows = [[pow((x - y) % p, p - 2, p) for y in ys] for x in xs]
    return FieldMatrix.from_rows(field, rows, len(ys))


def square_submatrix_count(rows: int, cols: int) -> int:
    return sum(comb(rows, s) * comb(cols, s) for s in range(1, min(rows, cols) + 1))


def is_mds_parity(P: FieldMatrix, max_submatrices: int = 10**6) -> bool:
    """True iff every square submatrix of P is nonsingular (exhaustive)."""
    count = square_submatrix_count(P.rows, P.cols)
    if count > max_submatrices:
        raise GuardExceeded(f"{count} square submatrices exceed the guard of {max_submatrices}")
    field = P.field
    data = P.data
    for s in range(1, min(P.rows, P.cols) + 1):
        for ri in combinations(range(P.rows), s):
            sub_rows = [data[i] for i in ri]
            for ci in combinations(range(P.cols), s):
                if rank_rows(field, [[r[j] for j in ci] for r in sub_rows]) < s:
                    return False
    return True


def is_mds_generator(G: FieldMatrix, max_subsets: int = 10**5) -> bool:
    """True iff every set of `rows` columns of G is independent.

    Equivalently the code corrects any cols - rows erasures.
    """
    k, n = G.rows, G.cols
    if k == 0:
        return True
    count = comb(n, k)
    if count > max_subsets:
        raise GuardExceeded(f"{count} column subsets exceed the guard of {max_subsets}")
    cols = list(zip(*G.data))
    return all(rank_rows(G.field, [list(cols[j]) for j in S]) == k for S in combinations(range(n), k))


# -- text dump ---------------------------------------------------------------------


def matrix_to_dict(A: FieldMatrix) -> dict:
    fmt = A.field.format
    return {
        "rows": A.rows,
        "cols": A.cols,
        "entries": [fmt(x) for r in A.data for x in r],
    }


def matrix_from_dict(field: QuadExtField, d: dict) -> FieldMatrix:
    rows, cols = int(d["rows"]), int(d["cols"])
    entries = [field.parse(e) for e in d["entries"]]
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, found {len(entries)}")
    return FieldMatrix.from_rows(field, (entries[i * cols:(i + 1) * cols] for i in range(rows)), cols)


def dump_matrix(A: FieldMatrix) -> str:
    doc = {"p": A.field.p, "r": A.field.r, **matrix_to_dict(A)}
    return json.dumps(doc, indent=1) + "\n"


def load_matrix(text: str) -> FieldMatrix:
    doc = json.loads(text)
    field = QuadExtField(int(doc["p"]), int(doc["r"]))
    return matrix_from_dict(field, doc)
