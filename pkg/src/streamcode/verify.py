"""Executable checks on a constructed code.

Parity-check conditions (columns h_j of H, and of the shortened H^(l)):

* B1: for l in [0, B-N], h_l of H^(l) is outside the span of h_{l+1..l+B-1}.
* R1: for l in [0, B-N], h_l of H^(l) is outside the span of every N-1 of
  h_{l+1..l+T}.
* B2: for l in [B-N+1, T-N+1], h_l..h_{l+B-1} of H are independent.
* R2: any N columns among h_{B-N+1..n-1} are independent.

Together they are equivalent to delay-T recovery. The structural properties
of the generator (MDS sub-codes, rank facts about its blocks) and exhaustive
block recovery are checked here as well. Every failing report carries a
witness.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .channel import block_pattern_count, enumerate_block_patterns
from .construction import CodeParams, CodeTables, build_code, grid_params, h_restricted
from .decoder import (
    DecoderInternalError,
    InadmissiblePatternError,
    apply_erasures,
    encode_block,
    oracle_decode_all,
    structured_decode,
)
from .linalg import (
    FieldMatrix,
    GuardExceeded,
    is_mds_generator,
    left_null_space,
    rank,
    rank_rows,
    solve,
    submatrix,
)

__all__ = [
    "ConditionReport",
    "RecoveryReport",
    "PointReport",
    "check_B1",
    "check_R1",
    "check_B2",
    "check_R2",
    "check_conditions",
    "check_code_properties",
    "check_recovery_exhaustive",
    "verify_point",
    "sweep",
    "SUBSET_GUARD",
    "PATTERN_GUARD",
]

SUBSET_GUARD = 10**5
PATTERN_GUARD = 10**5


@dataclass(frozen=True)
class ConditionReport:
    condition: str
    index: int | tuple[int, ...] | None
    passed: bool
    witness: tuple | None = None
    informational: bool = False
    note: str = ""

    def __post_init__(self) -> None:
        if not self.passed and not self.informational and self.witness is None:
            raise ValueError(f"{self.condition}: a failing report needs a witness")

    @property
    def blocking(self) -> bool:
        """Counts against the overall verdict."""
        return not self.passed and not self.informational

    def format(self) -> str:
        status = "pass" if self.passed else ("info" if self.informational else "FAIL")
        idx = "" if self.index is None else f" [{self.index}]"
        extra = f" witness={self.witness}" if not self.passed and self.witness is not None else ""
        note = f" ({self.note})" if self.note else ""
        return f"{self.condition}{idx}: {status}{extra}{note}"


def _columns(A: FieldMatrix, idx: Sequence[int]) -> list[list[int]]:
    return [[A[i, j] for i in range(A.rows)] for j in idx]


def _dependence(A: FieldMatrix, idx: Sequence[int], need_first: bool = False) -> tuple[int, ...] | None:
    """Coefficients c with sum_j c_j h_{idx[j]} = 0, c nonzero (c_0 != 0 if need_first)."""
    vecs = FieldMatrix.from_rows(A.field, _columns(A, idx), A.rows) if idx else None
    if vecs is None:
        return None
    for v in left_null_space(vecs):
        if not need_first or v[0]:
            return v
    return None


def _outside_span(A: FieldMatrix, target: int, others: Sequence[int]) -> tuple[int, ...] | None:
    """None if column `target` is outside span(others); else a witness."""
    field = A.field
    cols = _columns(A, [target, *others])
    if rank_rows(field, cols) == rank_rows(field, cols[1:]) + 1:
        return None
    return _dependence(A, [target, *others], need_first=True) or (0,)


def check_B1(H: FieldMatrix, params: CodeParams) -> list[ConditionReport]:
    out = []
    for l in range(params.B - params.N + 1):
        Hl = h_restricted(H, params, l)
        others = list(range(l + 1, min(l + params.B, Hl.cols)))
        w = _outside_span(Hl, l, others)
        out.append(ConditionReport("B1", l, w is None, None if w is None else (tuple(others), w)))
    return out


def check_R1(H: FieldMatrix, params: CodeParams, guard: int = SUBSET_GUARD) -> list[ConditionReport]:
    T, N = params.T, params.N
    if comb(T, N - 1) > guard:
        raise GuardExceeded(f"C({T},{N - 1}) subsets exceed the guard of {guard}")
    out = []
    for l in range(params.B - N + 1):
        Hl = h_restricted(H, params, l)
        pool = range(l + 1, min(l + T + 1, Hl.cols))
        bad = None
        for S in combinations(pool, N - 1):
            w = _outside_span(Hl, l, S)
            if w is not None:
                bad = (S, w)
                break
        out.append(ConditionReport("R1", l, bad is None, bad))
    return out


def check_B2(H: FieldMatrix, params: CodeParams) -> list[ConditionReport]:
    """B columns per l; the (B+1)-column reading is reported as informational."""
    B, N, n = params.B, params.N, params.n
    out = []
    for l in range(B - N + 1, params.T - N + 2):
        cols = list(range(l, min(l + B, n)))
        ok = rank_rows(H.field, _columns(H, cols)) == len(cols)
        out.append(ConditionReport("B2", l, ok, None if ok else (tuple(cols), _dependence(H, cols))))
        wide = list(range(l, min(l + B + 1, n)))
        ok_wide = rank_rows(H.field, _columns(H, wide)) == len(wide)
        out.append(ConditionReport("B2+1", l, ok_wide, None, informational=True,
                                   note=f"{len(wide)} columns, H has rank {H.rows}"))
    return out


def check_R2(H: FieldMatrix, params: CodeParams, guard: int = SUBSET_GUARD) -> list[ConditionReport]:
    B, N, n = params.B, params.N, params.n
    hi = params.T + B - N + 1
    pool = list(range(B - N + 1, min(hi, n - 1) + 1))
    if comb(len(pool), N) > guard:
        raise GuardExceeded(f"C({len(pool)},{N}) subsets exceed the guard of {guard}")
    note = f"upper index {hi} clamped to {n - 1}" if hi > n - 1 else ""
    for S in combinations(pool, N):
        if rank_rows(H.field, _columns(H, S)) < N:
            return [ConditionReport("R2", None, False, (S, _dependence(H, list(S)))), ]
    return [ConditionReport("R2", None, True, note=note)]


def check_conditions(tables: CodeTables) -> list[ConditionReport]:
    H, p = tables.H, tables.params
    return check_B1(H, p) + check_R1(H, p) + check_B2(H, p) + check_R2(H, p)


# -- generator properties -----------------------------------------------------------


def _mds_report(name: str, G: FieldMatrix, max_subsets: int) -> ConditionReport:
    label = f"({G.cols},{G.rows})"
    try:
        ok = is_mds_generator(G, max_subsets)
    except GuardExceeded as exc:
        return ConditionReport(name, None, False, informational=True, note=f"skipped: {exc}")
    if ok:
        return ConditionReport(name, None, True, note=label)
    cols = list(zip(*G.data))
    S = next(S for S in combinations(range(G.cols), G.rows)
             if rank_rows(G.field, [list(cols[j]) for j in S]) < G.rows)
    return ConditionReport(name, None, False, (S,), note=label)


def check_code_properties(tables: CodeTables, *, mds_max_n: int = 10,
                          max_subsets: int = SUBSET_GUARD) -> list[ConditionReport]:
    p = tables.params
    f = tables.field
    out: list[ConditionReport] = []

    if p.n <= mds_max_n:
        out.append(_mds_report("P8 G' MDS", tables.Gp, max_subsets))
    else:
        out.append(ConditionReport("P8 G' MDS", None, True, informational=True,
                                   note=f"skipped for n={p.n} > {mds_max_n}"))
    out.append(_mds_report("P9 MDS1", tables.G1, max_subsets))
    out.append(_mds_report("P10 MDS2", tables.G2, max_subsets))

    # Property 4: rank facts about the lower-right (T-B) x B block.
    GTB = tables.G_TB
    h = p.T - p.B
    r = rank(GTB)
    out.append(ConditionReport("P4 rank", None, r == min(h, p.B),
                               None if r == min(h, p.B) else (r,), note=f"rank {r}, shape {GTB.shape}"))
    bad = None
    cols = list(zip(*GTB.data)) if GTB.rows else [()] * GTB.cols
    for w in range(1, p.B + 1):
        for S in combinations(range(p.B), w):
            rk = rank_rows(f, [list(cols[j]) for j in S]) if GTB.rows else 0
            if rk != min(h, w):
                bad = (S, rk)
                break
        if bad:
            break
    out.append(ConditionReport("P4 subsets", None, bad is None, bad))

    # Property 5: the first B-N+1 rows of the upper-right B x (T-B) block of
    # M^-1 lie in the span of its last N-1 rows.
    Mb = tables.Minv_BTB
    if Mb is None:
        out.append(ConditionReport("P5 span", None, True, informational=True,
                                   note=f"not applicable: B={p.B} > k={p.k}"))
    else:
        s = p.alpha_size
        tail = submatrix(Mb, range(s, p.B))
        bad = None
        for i in range(s):
            res = solve(tail.T, Mb.row(i)) if tail.rows else None
            in_span = (not any(Mb.row(i))) if res is None else res.status.name != "INCONSISTENT"
            if not in_span:
                bad = (i, Mb.row(i))
                break
        out.append(ConditionReport("P5 span", None, bad is None, bad))

    # Property 12: G~[i][T+i] has a nonzero extension part.
    bad_i = [i for i in range(p.alpha_size) if f.is_base(tables.Gtilde[i, p.T + i])]
    out.append(ConditionReport("P12 f_ii", None, not bad_i, tuple(bad_i) or None))

    # G~ agrees with G'' on its first T columns.
    mism = [(i, j) for i in range(p.k) for j in range(p.T) if tables.Gtilde[i, j] != tables.Gpp[i, j]]
    out.append(ConditionReport("G~ prefix", None, not mism, tuple(mism[:4]) or None,
                               note=f"first {p.T} columns equal G''"))

    # Parity check annihilates the generator.
    prod = tables.Gtilde @ tables.H.T
    nz = [(i, j) for i in range(prod.rows) for j in range(prod.cols) if prod[i, j]]
    out.append(ConditionReport("G~ H^T = 0", None, not nz, tuple(nz[:4]) or None))
    return out


# -- exhaustive recovery ------------------------------------------------------------


@dataclass
class RecoveryReport:
    params: CodeParams
    delay: int
    patterns: int = 0
    symbols: int = 0
    failures: list[tuple[tuple[int, ...], int, str]] = field(default_factory=list)
    methods: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def format(self) -> str:
        head = (f"recovery {self.params} delay={self.delay}: patterns={self.patterns} "
                f"symbols={self.symbols} failures={len(self.failures)}")
        lines = [head]
        for pat, l, why in self.failures[:5]:
            lines.append(f"  erased={list(pat)} u[{l}]: {why}")
        return "\n".join(lines)


def check_recovery_exhaustive(
    tables: CodeTables,
    *,
    delay: int | None = None,
    seed: int = 0,
    guard: int = PATTERN_GUARD,
    structured: bool = True,
    stop_after: int | None = None,
) -> RecoveryReport:
    """Decode one random codeword under every admissible block pattern.

    Each symbol must be recovered by min(l + delay, n-1) (delay defaults to
    T). The oracle's earliest decoding time is checked against that deadline
    and, when `structured` is set, the structured decoder must agree with
    the oracle value and also meet its own deadline.
    """
    p = tables.params
    delay = p.T if delay is None else delay
    count = block_pattern_count(p.n, p.B, p.N)
    if count > guard:
        raise GuardExceeded(f"{count} block patterns exceed the guard of {guard}")
    rng = random.Random(seed)
    u = [rng.randrange(tables.field.order) for _ in range(p.k)]
    cw = encode_block(tables, u)
    rep = RecoveryReport(p, delay)
    for pat in enumerate_block_patterns(p.n, p.B, p.N):
        rep.patterns += 1
        rec = apply_erasures(cw, pat)
        oracle = oracle_decode_all(tables, rec)
        sres = None
        if structured:
            try:
                sres = structured_decode(tables, rec).symbols
            except (DecoderInternalError, InadmissiblePatternError) as exc:
                rep.failures.append((pat.erased, getattr(exc, "l", -1), f"structured: {exc}"))
        for l in range(p.k):
            rep.symbols += 1
            dl = min(l + delay, p.n - 1)
            o = oracle[l]
            if o is None or o[1] > dl:
                rep.failures.append((pat.erased, l, f"oracle: {'never' if o is None else 'at ' + str(o[1])} > {dl}"))
                continue
            if o[0] != u[l]:
                rep.failures.append((pat.erased, l, "oracle value differs from the message"))
            if sres is not None:
                s = sres[l]
                rep.methods[s.method.value] = rep.methods.get(s.method.value, 0) + 1
                if s.value != o[0]:
                    rep.failures.append((pat.erased, l, f"structured value {s.value} != oracle {o[0]}"))
                elif s.time > dl:
                    rep.failures.append((pat.erased, l, f"structured time {s.time} > {dl}"))
        if stop_after is not None and len(rep.failures) >= stop_after:
            break
    return rep


# -- sweep --------------------------------------------------------------------------


@dataclass
class PointReport:
    params: CodeParams
    conditions: list[ConditionReport]
    properties: list[ConditionReport]
    recovery: RecoveryReport | None

    @property
    def passed(self) -> bool:
        return (not any(r.blocking for r in self.conditions + self.properties)
                and (self.recovery is None or self.recovery.passed))

    def format(self) -> str:
        p = self.params
        lines = [f"== T={p.T} B={p.B} N={p.N} W={p.W} n={p.n} k={p.k} p={p.p}: "
                 f"{'PASS' if self.passed else 'FAIL'}"]
        lines += ["  " + r.format() for r in self.conditions + self.properties]
        if self.recovery is not None:
            lines += ["  " + ln for ln in self.recovery.format().splitlines()]
        return "\n".join(lines)


def verify_point(params: CodeParams, *, recovery: bool = True, properties: bool = True) -> PointReport:
    tables = build_code(params)
    return PointReport(
        params,
        check_conditions(tables),
        check_code_properties(tables) if properties else [],
        check_recovery_exhaustive(tables) if recovery else None,
    )


def sweep(t_max: int, *, recovery: bool = True, properties: bool = True,
          points: Iterable[CodeParams] | None = None) -> list[PointReport]:
    pts = grid_params(t_max) if points is None else list(points)
    return [verify_point(p, recovery=recovery, properties=properties) for p in pts]
