"""Delay-constrained block decoding.

Two decoders share one contract: given a received block (codes, or ERASED),
recover each message symbol u[l] by time min(l+T, n-1).

`BlockDecoder` follows the structured case analysis of the construction:
trivial reads, MDS2 recovery after a burst, MDS1 recovery under arbitrary
erasures, and the alpha-cancellation step. `oracle_decode_all` knows nothing
about the structure: it row-reduces the received columns in time order and
reports the first time each u[l] becomes uniquely determined.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

from .channel import ErasurePattern
from .construction import CodeTables

__all__ = [
    "ERASED",
    "UNDECODABLE",
    "Method",
    "SymbolResult",
    "DecodeReport",
    "InadmissiblePatternError",
    "DecoderInternalError",
    "DecoderMismatchError",
    "BlockDecoder",
    "decode_deadline",
    "encode_block",
    "apply_erasures",
    "structured_decode",
    "oracle_decode",
    "oracle_decode_all",
    "decode_block",
]

ERASED = None


class _Undecodable:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "UNDECODABLE"

    def __bool__(self) -> bool:
        return False


UNDECODABLE = _Undecodable()


class Method(enum.Enum):
    TRIVIAL = "trivial"
    BURST_MDS2 = "burst-MDS2"
    ALPHA_DIRECT = "alpha-direct"
    ARBITRARY_MDS1 = "arbitrary-MDS1"
    ALPHA_CANCEL = "alpha-cancel"
    MDS2 = "mds2"
    ORACLE = "oracle"


class InadmissiblePatternError(ValueError):
    def __init__(self, window: tuple[int, int], erased: Sequence[int]):
        super().__init__(f"inadmissible erasures {list(erased)} in window [{window[0]}, {window[1]}]")
        self.window = window
        self.erased = tuple(erased)


class DecoderInternalError(RuntimeError):
    """The structured decoder hit a step its case analysis says cannot fail."""

    def __init__(self, l: int, reason: str):
        super().__init__(f"u[{l}]: {reason}")
        self.l = l


class DecoderMismatchError(AssertionError):
    pass


@dataclass(frozen=True)
class SymbolResult:
    l: int
    value: int | None
    time: int | None
    method: Method | None
    deadline: int
    pivot: int | None = None
    """Coefficient of u[l] after base-field cancellation (alpha-cancel only)."""

    @property
    def on_time(self) -> bool:
        return self.value is not None and self.time is not None and self.time <= self.deadline


@dataclass(frozen=True)
class DecodeReport:
    symbols: tuple[SymbolResult, ...]
    warnings: tuple[str, ...] = ()

    @property
    def values(self) -> list[int | None]:
        return [s.value for s in self.symbols]

    @property
    def complete(self) -> bool:
        return all(s.on_time for s in self.symbols)

    def format(self, field) -> str:
        lines = [f"# l value time deadline method"]
        for s in self.symbols:
            v = "?" if s.value is None else field.format(s.value)
            t = "-" if s.time is None else str(s.time)
            m = "-" if s.method is None else s.method.value
            lines.append(f"{s.l} {v} {t} {s.deadline} {m}")
        lines.extend(f"# warning: {w}" for w in self.warnings)
        return "\n".join(lines) + "\n"


def decode_deadline(l: int, params) -> int:
    if not 0 <= l < params.k:
        raise ValueError(f"message index {l} outside [0, {params.k})")
    return min(l + params.T, params.n - 1)


def encode_block(tables: CodeTables, u: Sequence[int]) -> list[int]:
    G = tables.G
    if len(u) != G.rows:
        raise ValueError(f"message length {len(u)} != k={G.rows}")
    ADD, MUL = tables.field.ADD, tables.field.MUL
    out = [0] * G.cols
    for a, row in zip(u, G.data):
        if a:
            ma = MUL[a]
            out = [ADD[s][ma[g]] for s, g in zip(out, row)]
    return out


def apply_erasures(codeword: Sequence[int], pattern: ErasurePattern | Sequence[int]) -> list[int | None]:
    erased = set(pattern.erased if isinstance(pattern, ErasurePattern) else pattern)
    return [ERASED if t in erased else x for t, x in enumerate(codeword)]


class _Basis:
    """Incremental Gauss-Jordan basis of coefficient vectors with extra columns.

    Each added vector has `m` coefficients followed by extras carried along
    by the row operations (right-hand sides, tracked combinations).
    """

    __slots__ = ("m", "rows", "pivots", "SUB", "MUL", "inv")

    def __init__(self, field, m: int):
        self.m = m
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []
        self.SUB, self.MUL, self.inv = field.SUB, field.MUL, field.inv

    @property
    def rank(self) -> int:
        return len(self.rows)

    def add(self, vec: list[int]) -> int | None:
        """Reduce `vec` and keep it if independent; returns its pivot or None."""
        SUB, MUL = self.SUB, self.MUL
        for r, c in zip(self.rows, self.pivots):
            f = vec[c]
            if f:
                mf = MUL[f]
                vec = [SUB[x][mf[y]] for x, y in zip(vec, r)]
        piv = next((c for c in range(self.m) if vec[c]), None)
        if piv is None:
            return None
        if vec[piv] != 1:
            mi = MUL[self.inv(vec[piv])]
            vec = [mi[x] for x in vec]
        for i, r in enumerate(self.rows):
            f = r[piv]
            if f:
                mf = MUL[f]
                self.rows[i] = [SUB[x][mf[y]] for x, y in zip(r, vec)]
        self.rows.append(vec)
        self.pivots.append(piv)
        return piv


class BlockDecoder:
    """Structured decoder that advances one message index at a time.

    `received` may be filled in lazily (streaming); step(l) reads only
    columns up to decode_deadline(l). Known symbols are cancelled from the
    received columns before each step.
    """

    def __init__(self, tables: CodeTables, received: list[int | None]):
        p = tables.params
        if len(received) != p.n:
            raise ValueError(f"received block has length {len(received)}, expected {p.n}")
        self.tables = tables
        self.params = p
        self.received = received
        f = tables.field
        self._SUB, self._MUL, self._ADD = f.SUB, f.MUL, f.ADD
        self._G = tables.G.data
        self._Gcols = tables.columns
        self.acc = [0] * p.n          # sum of known u[r] G[r][t]
        self.avail = list(range(p.n))  # earliest time the cancelled column is usable
        self.results: list[SymbolResult] = []

    @property
    def next_index(self) -> int:
        return len(self.results)

    def _ytilde(self, t: int) -> int:
        return self._SUB[self.received[t]][self.acc[t]]

    def _classify(self, l: int, d: int) -> str:
        rec = self.received
        E = [t for t in range(l, d + 1) if rec[t] is ERASED]
        N, B = self.params.N, self.params.B
        if len(E) <= N:
            return "arbitrary"
        if len(E) <= B and E[-1] - E[0] + 1 == len(E):
            return "burst"
        raise InadmissiblePatternError((l, d), E)

    def _solve(self, l: int, unknowns: Sequence[int], cols: Sequence[int]) -> tuple[dict[int, int], int]:
        """Solve for `unknowns` from received columns, taken greedily in order."""
        m = len(unknowns)
        if m == 0:
            return {}, -1
        Gc = self._Gcols
        others = [r for r in range(l, self.params.k) if r not in set(unknowns)]
        basis = _Basis(self.tables.field, m)
        last = -1
        for t in cols:
            if self.received[t] is ERASED:
                continue
            col = Gc[t]
            if any(col[r] for r in others):
                raise DecoderInternalError(l, f"column {t} involves rows outside the solve set")
            if basis.add([col[r] for r in unknowns] + [self._ytilde(t)]) is not None:
                last = max(last, self.avail[t])
                if basis.rank == m:
                    break
        if basis.rank < m:
            raise DecoderInternalError(l, f"only {basis.rank} of {m} equations in columns {list(cols)}")
        return {unknowns[c]: r[m] for r, c in zip(basis.rows, basis.pivots)}, last

    def step(self) -> SymbolResult:
        p = self.params
        l = self.next_index
        if l >= p.k:
            raise IndexError("all message symbols already decoded")
        k, T, B, N = p.k, p.T, p.B, p.N
        d = min(l + T, p.n - 1)
        rec = self.received
        f = self.tables.field
        G = self._G
        kind = self._classify(l, d)
        pivot = None
        if rec[l] is not ERASED:
            value = f.div(self._ytilde(l), G[l][l])
            time = self.avail[l]
            method = Method.TRIVIAL
        elif l <= B - N and kind == "burst":
            # Rows l+1..B-N only touch the erased prefix and their own alpha
            # columns, so columns B..T+l-1 carry MDS2 rows alone.
            mds2 = list(range(B - N + 1, k))
            vals, t2 = self._solve(l, mds2, range(B, T + l))
            c = l + T
            if rec[c] is ERASED:
                raise DecoderInternalError(l, f"alpha column {c} erased inside a burst")
            y = self._ytilde(c)
            for r, v in vals.items():
                y = self._SUB[y][self._MUL[v][G[r][c]]]
            if not G[l][c]:
                raise DecoderInternalError(l, f"alpha entry G[{l}][{c}] is zero")
            value = f.div(y, G[l][c])
            time = max(self.avail[c], t2)
            method = Method.BURST_MDS2 if mds2 else Method.ALPHA_DIRECT
        elif l <= B - N and rec[l + T] is ERASED:
            vals, time = self._solve(l, list(range(l, k)), range(l, T))
            value = vals[l]
            method = Method.ARBITRARY_MDS1
        elif l <= B - N:
            value, time, pivot = self._alpha_cancel(l)
            method = Method.ALPHA_CANCEL
        else:
            vals, time = self._solve(l, list(range(l, k)), range(l, d + 1))
            value = vals[l]
            method = Method.MDS2
        if time > d:
            raise DecoderInternalError(l, f"decoded at {time}, after the deadline {d}")
        res = SymbolResult(l, value, time, method, d, pivot)
        self._learn(l, value, time)
        self.results.append(res)
        return res

    def _alpha_cancel(self, l: int) -> tuple[int, int, int]:
        """Cancel rows l+1..k-1 from column l+T with base-field combinations of
        columns l+1..T-1; what remains is a non-base multiple of u[l]."""
        k, T = self.params.k, self.params.T
        rows = list(range(l + 1, k))
        m = len(rows)
        Gc = self._Gcols
        SUB, MUL, ADD = self._SUB, self._MUL, self._ADD
        c = l + T
        target = Gc[c]
        comb_g, comb_y, last = 0, 0, self.avail[c]
        if m:
            basis = _Basis(self.tables.field, m)
            for t in range(l + 1, T):
                if self.received[t] is ERASED:
                    continue
                col = Gc[t]
                if basis.add([col[r] for r in rows] + [col[l], self._ytilde(t)]) is not None:
                    last = max(last, self.avail[t])
                    if basis.rank == m:
                        break
            if basis.rank < m:
                raise DecoderInternalError(l, f"rank {basis.rank} < {m} for alpha cancellation")
            for r, pc in zip(basis.rows, basis.pivots):
                g = target[rows[pc]]
                if g:
                    mg = MUL[g]
                    comb_g = ADD[comb_g][mg[r[m]]]
                    comb_y = ADD[comb_y][mg[r[m + 1]]]
        pivot = SUB[target[l]][comb_g]
        if pivot == 0:
            raise DecoderInternalError(l, "coefficient of u[l] cancelled to zero")
        y = SUB[self._ytilde(c)][comb_y]
        return self.tables.field.div(y, pivot), last, pivot

    def _learn(self, l: int, value: int, time: int) -> None:
        row = self._G[l]
        ADD, MUL = self._ADD, self._MUL
        mv = MUL[value]
        for t in range(self.params.n):
            g = row[t]
            if g:
                self.acc[t] = ADD[self.acc[t]][mv[g]]
                if time > self.avail[t]:
                    self.avail[t] = time

    def run(self, through: int | None = None) -> list[SymbolResult]:
        """Decode every remaining symbol whose deadline is <= through."""
        k = self.params.k
        while self.next_index < k:
            l = self.next_index
            if through is not None and decode_deadline(l, self.params) > through:
                break
            self.step()
        return self.results


def structured_decode(
    tables: CodeTables,
    received: Sequence[int | None],
    *,
    cross_check: bool = False,
) -> DecodeReport:
    """Run the structured decoder on a full block.

    With `cross_check`, every symbol is compared with the oracle and a
    disagreement raises DecoderMismatchError.
    """
    dec = BlockDecoder(tables, list(received))
    results = dec.run()
    if cross_check:
        oracle = oracle_decode_all(tables, received)
        for s, o in zip(results, oracle):
            if o is None or o[0] != s.value or o[1] > s.deadline:
                raise DecoderMismatchError(f"u[{s.l}]: structured {s.value}@{s.time}, oracle {o}")
    return DecodeReport(tuple(results))


def oracle_decode_all(
    tables: CodeTables,
    received: Sequence[int | None],
    through: int | None = None,
) -> list[tuple[int, int] | None]:
    """(value, earliest time) for each u[l], or None if never determined.

    Column t contributes the equation sum_r u[r] G[r][t] = y[t]. u[l] is
    determined exactly when e_l lies in the span of the equations so far,
    which in reduced row echelon form means some row equals e_l.
    """
    p = tables.params
    k = p.k
    G = tables.G.data
    basis = _Basis(tables.field, k)
    found: list[tuple[int, int] | None] = [None] * k
    last = p.n - 1 if through is None else min(through, p.n - 1)
    for t in range(last + 1):
        y = received[t]
        if y is ERASED:
            continue
        if basis.add([G[r][t] for r in range(k)] + [y]) is None:
            continue
        for row, c in zip(basis.rows, basis.pivots):
            if found[c] is None and not any(row[j] for j in range(k) if j != c):
                found[c] = (row[k], t)
        if basis.rank == k:
            break
    return found


def oracle_decode(tables: CodeTables, received: Sequence[int | None], l: int):
    """u[l] if the columns received by its deadline determine it, else UNDECODABLE."""
    d = decode_deadline(l, tables.params)
    r = oracle_decode_all(tables, received, through=d)[l]
    return UNDECODABLE if r is None else r[0]


def decode_block(
    tables: CodeTables,
    received: Sequence[int | None],
    *,
    on_warning: Callable[[str], None] | None = None,
) -> DecodeReport:
    """Structured decoding, falling back to the oracle outside the channel model."""
    try:
        return structured_decode(tables, received)
    except InadmissiblePatternError as exc:
        msg = f"{exc}; using the oracle decoder"
        if on_warning is not None:
            on_warning(msg)
        else:
            warnings.warn(msg, stacklevel=2)
    p = tables.params
    found = oracle_decode_all(tables, received)
    syms = []
    for l in range(p.k):
        d = decode_deadline(l, p)
        r = found[l]
        if r is None:
            syms.append(SymbolResult(l, None, None, None, d))
        else:
            syms.append(SymbolResult(l, r[0], r[1], Method.ORACLE, d))
    return DecodeReport(tuple(syms), (msg,))
