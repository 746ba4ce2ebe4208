"""The generator family G'' -> M -> G' -> G -> G~ -> H.

G'' is a systematic Cauchy MDS generator. The spreading matrix M is unit upper
triangular with band N-1 and is chosen so that G' = M G'' has the staircase
support used by the decoder. G replaces the top-right (B-N+1)-square block of
G' with alpha*I, alpha outside the base field. G~ = M^-1 G is the systematic
form and H its parity-check matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from .gf import ExtElem, QuadExtField, field_for_length
from .linalg import FieldMatrix, SingularMatrixError, cauchy_matrix, invert, solve, submatrix

__all__ = [
    "ParameterError",
    "CodeParams",
    "CodeTables",
    "derive_params",
    "build_gpp",
    "build_spreading_matrix",
    "build_g",
    "systematic_form",
    "parity_check",
    "rate",
    "capacity",
    "build_code",
    "build_variant",
    "h_restricted",
    "grid_params",
]


class ParameterError(ValueError):
    """(W, T, B, N) violate W > T >= B >= N >= 1."""


@dataclass(frozen=True)
class CodeParams:
    W: int
    T: int
    B: int
    N: int
    n: int
    k: int
    p: int

    @property
    def field(self) -> QuadExtField:
        return field_for_length(self.n)

    @property
    def alpha_size(self) -> int:
        """Side of the alpha block, B - N + 1."""
        return self.B - self.N + 1

    def __str__(self) -> str:
        return f"(T={self.T},B={self.B},N={self.N},W={self.W})"


def derive_params(T: int, B: int, N: int, W: int | None = None) -> CodeParams:
    for name, v in (("T", T), ("B", B), ("N", N)):
        if not isinstance(v, int) or v < 1:
            raise ParameterError(f"{name} must be an integer >= 1, got {v!r}")
    if W is None:
        W = T + 1
    if not T >= B:
        raise ParameterError(f"T ≥ B violated (T={T}, B={B})")
    if not B >= N:
        raise ParameterError(f"B ≥ N violated (B={B}, N={N})")
    if not W > T:
        raise ParameterError(f"W > T violated (W={W}, T={T})")
    k = T - N + 1
    n = k + B
    return CodeParams(W=W, T=T, B=B, N=N, n=n, k=k, p=field_for_length(n).p)


def grid_params(t_max: int = 9) -> list[CodeParams]:
    """All (T, B, N) with t_max >= T >= B >= N >= 1, default W."""
    return [derive_params(T, B, N) for T in range(1, t_max + 1)
            for B in range(1, T + 1) for N in range(1, B + 1)]


def rate(params: CodeParams) -> Fraction:
    return Fraction(params.k, params.n)


def capacity(params: CodeParams) -> Fraction:
    T, B, N = params.T, params.B, params.N
    return Fraction(T - N + 1, T + B - N + 1)


def build_gpp(params: CodeParams) -> FieldMatrix:
    """[I_k | P''] with P'' Cauchy on xs = 0..k-1, ys = k..n-1."""
    k, n = params.k, params.n
    field = params.field
    P = cauchy_matrix(field, range(k), range(k, n))
    return FieldMatrix.identity(field, k).hstack(P)


def _band_unknowns(params: CodeParams, i: int) -> tuple[list[int], list[int]]:
    """Band offsets t (m_{i,i+t}) and parity offsets j forced to zero for row i."""
    k, N = params.k, params.N
    ts = list(range(1, min(N - 1, k - 1 - i) + 1))
    js = [j for j in range(N - 1) if k + j > i + N - 1]
    return ts, js


def build_spreading_matrix(gpp: FieldMatrix, params: CodeParams) -> tuple[FieldMatrix, FieldMatrix]:
    """Return (M, M^-1).

    Row i of M is e_i plus band entries chosen so that row i of M G'' vanishes
    on parity columns k+j with k+j > i+N-1, j < N-1. Each row is an
    independent square Cauchy system.
    """
    k = params.k
    field = gpp.field
    neg = field.neg
    rows = [[int(a == b) for b in range(k)] for a in range(k)]
    for i in range(k):
        ts, js = _band_unknowns(params, i)
        if len(ts) != len(js):
            raise AssertionError(f"band system for row {i} is not square ({len(ts)}x{len(js)})")
        if not ts:
            continue
        # sum_t m_t * P''[i+t][j] = -P''[i][j]  for j in js
        A = FieldMatrix.from_rows(field, [[gpp[i + t, k + j] for t in ts] for j in js], len(ts))
        b = [neg(gpp[i, k + j]) for j in js]
        res = solve(A, b)
        if not res.unique:
            raise SingularMatrixError(i)
        for t, m in zip(ts, res.x):
            rows[i][i + t] = m
    M = FieldMatrix.from_rows(field, rows, k)
    return M, invert(M)


def _alpha_block(params: CodeParams) -> list[tuple[int, int]]:
    s, base = params.alpha_size, params.k + params.N - 1
    return [(i, base + j) for i in range(s) for j in range(s)]


def build_g(gp: FieldMatrix, params: CodeParams, alpha: ExtElem | int) -> FieldMatrix:
    code = alpha.code if isinstance(alpha, ExtElem) else alpha
    if gp.field.is_base(code):
        raise ValueError("alpha must lie outside the base field")
    base = params.k + params.N - 1
    return gp.with_entries({(i, c): code if i == c - base else 0 for i, c in _alpha_block(params)})


def systematic_form(g: FieldMatrix, minv: FieldMatrix) -> FieldMatrix:
    return minv @ g


def parity_check(gtilde: FieldMatrix) -> FieldMatrix:
    """H = [-P~^T | I_B] for systematic G~ = [I_k | P~]."""
    k, n = gtilde.rows, gtilde.cols
    field = gtilde.field
    left = -submatrix(gtilde, None, range(k, n)).T
    return left.hstack(FieldMatrix.identity(field, n - k))


def h_restricted(H: FieldMatrix, params: CodeParams, l: int) -> FieldMatrix:
    """H^(l): the top-left (N+l) x (l+T+1) slice of H."""
    rows = min(params.N + l, H.rows)
    cols = min(l + params.T + 1, H.cols)
    return submatrix(H, range(rows), range(cols))


@dataclass(frozen=True)
class CodeTables:
    params: CodeParams
    Gpp: FieldMatrix
    M: FieldMatrix
    Minv: FieldMatrix
    Gp: FieldMatrix
    G: FieldMatrix
    Gtilde: FieldMatrix
    H: FieldMatrix
    alpha: ExtElem

    @property
    def field(self) -> QuadExtField:
        return self.G.field

    @cached_property
    def columns(self) -> tuple[tuple[int, ...], ...]:
        """Columns of G as code tuples, for the decoders."""
        return tuple(zip(*self.G.data))

    def matrices(self) -> dict[str, FieldMatrix]:
        return {"Gpp": self.Gpp, "M": self.M, "Minv": self.Minv, "Gp": self.Gp,
                "G": self.G, "Gtilde": self.Gtilde, "H": self.H}

    # Sub-codes used by the decoder and the property checks.

    @property
    def G1(self) -> FieldMatrix:
        p = self.params
        return submatrix(self.G, None, range(p.k + p.N - 1))

    @property
    def G2(self) -> FieldMatrix:
        s = self.params.alpha_size
        return submatrix(self.G, range(s, self.params.k), range(s, self.params.n))

    @property
    def G3(self) -> FieldMatrix:
        p = self.params
        return submatrix(self.G, range(p.alpha_size), range(p.k + p.N - 1, p.n))

    @property
    def G_TB(self) -> FieldMatrix:
        """Lower-right (T-B) x B block of G."""
        p = self.params
        return submatrix(self.G, range(p.alpha_size, p.k), range(p.n - p.B, p.n))

    @property
    def Minv_BTB(self) -> FieldMatrix | None:
        """Upper-right B x (T-B) block of M^-1; None when B > k."""
        p = self.params
        if p.B > p.k:
            return None
        return submatrix(self.Minv, range(p.B), range(p.alpha_size, p.k))


def _assemble(params: CodeParams, g_override: dict | None = None, alpha: ExtElem | None = None) -> CodeTables:
    field = params.field
    alpha = alpha or field.omega
    gpp = build_gpp(params)
    M, Minv = build_spreading_matrix(gpp, params)
    gp = M @ gpp
    g = build_g(gp, params, alpha)
    if g_override is not None:
        g = g.with_entries(g_override)
    gt = systematic_form(g, Minv)
    return CodeTables(params, gpp, M, Minv, gp, g, gt, parity_check(gt), alpha)


@lru_cache(maxsize=None)
def build_code(params: CodeParams) -> CodeTables:
    return _assemble(params)


def build_variant(params: CodeParams, block: str) -> CodeTables:
    """Negative-control tables with the alpha block replaced.

    ``block="zero"`` zeroes it; ``block="base"`` restores the G' values, so
    every entry of G lies in the base field.
    """
    field = params.field
    gpp = build_gpp(params)
    M, _ = build_spreading_matrix(gpp, params)
    gp = M @ gpp
    if block == "zero":
        upd = {ij: 0 for ij in _alpha_block(params)}
    elif block == "base":
        upd = {ij: gp[ij] for ij in _alpha_block(params)}
    else:
        raise ValueError(f"unknown block variant {block!r}")
    return _assemble(params, upd, field.omega)
