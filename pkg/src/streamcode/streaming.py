"""Block code to streaming code by diagonal interleaving.

Message s_i (k symbols) enters at time i. The codeword on the diagonal that
starts at time d encodes u = [s_d[0], s_{d+1}[1], ..., s_{d+k-1}[k-1]] and
places its symbol c in packet x_{d+c}. Equivalently x_i = sum_l s_{i-l} G_l
with G_l holding the l-th superdiagonal of G. Messages before time 0 are
zero, so early diagonals see known zeros at negative times.
"""

from __future__ import annotations

import random
import struct
import warnings
from collections import deque
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, NamedTuple, Sequence

from .channel import SlidingWindowSpec, sample_sequence
from .construction import CodeParams, CodeTables, build_code, derive_params
from .decoder import (
    ERASED,
    BlockDecoder,
    InadmissiblePatternError,
    decode_deadline,
    oracle_decode_all,
)
from .gf import ELEM_BYTES
from .linalg import FieldMatrix

__all__ = [
    "conv_generators",
    "Packet",
    "Release",
    "StreamEncoder",
    "StreamDecoder",
    "SequenceError",
    "TraceFormatError",
    "TraceHeader",
    "write_trace",
    "read_trace",
    "SimulationResult",
    "run_stream",
    "simulate",
]


def conv_generators(G: FieldMatrix, params: CodeParams) -> list[FieldMatrix]:
    """G_0..G_{n-1} with G_l[r][r+l] = G[r][r+l] and zeros elsewhere."""
    k, n = params.k, params.n
    out = []
    for l in range(n):
        rows = [[G[r, c] if c == r + l else 0 for c in range(n)] for r in range(k)]
        out.append(FieldMatrix.from_rows(G.field, rows, n))
    return out


@dataclass(frozen=True)
class Packet:
    seq: int
    payload: tuple[int, ...] | None
    """n symbol codes, or None when the whole packet is erased."""

    @property
    def erased(self) -> bool:
        return self.payload is None


class Release(NamedTuple):
    """Message `index` released at clock index+T; `delay` is the largest
    per-symbol decoding delay, None if some symbol missed its deadline."""

    index: int
    symbols: tuple[int | None, ...]
    delay: int | None


class SequenceError(ValueError):
    """A packet arrived out of order."""


class StreamEncoder:
    def __init__(self, tables: CodeTables):
        self.tables = tables
        p = tables.params
        self.clock = 0
        # history[j] = s_{clock-1-j}; zero before time 0
        self.history: deque[tuple[int, ...]] = deque([(0,) * p.k] * (p.n - 1), maxlen=max(p.n - 1, 1))

    def encode_step(self, s: Sequence[int], seq: int | None = None) -> Packet:
        p = self.tables.params
        if seq is not None and seq != self.clock:
            raise SequenceError(f"encoder clock is {self.clock}, got message for time {seq}")
        if len(s) != p.k:
            raise ValueError(f"message has {len(s)} symbols, expected k={p.k}")
        s = tuple(s)
        ADD, MUL = self.tables.field.ADD, self.tables.field.MUL
        G = self.tables.G.data
        hist = self.history
        out = []
        for c in range(p.n):
            acc = 0
            for r in range(min(p.k, c + 1)):
                lag = c - r
                g = G[r][c]
                if not g:
                    continue
                msg = s if lag == 0 else hist[lag - 1]
                if msg[r]:
                    acc = ADD[acc][MUL[msg[r]][g]]
            out.append(acc)
        hist.appendleft(s)
        pkt = Packet(self.clock, tuple(out))
        self.clock += 1
        return pkt


@dataclass
class _Diagonal:
    start: int
    decoder: BlockDecoder
    fallback: bool = False


class StreamDecoder:
    """Per-diagonal block decoding; message s_i is released at clock i+T.

    decode_step returns the releases due at this clock. A symbol that could
    not be recovered by its deadline is None.
    """

    def __init__(self, tables: CodeTables):
        self.tables = tables
        self.params = tables.params
        self.clock = 0
        self.diagonals: dict[int, _Diagonal] = {}
        self.warnings: list[str] = []
        n = self.params.n
        for d in range(-(n - 1), 0):
            rec: list = [None] * n
            for c in range(-d):
                rec[c] = 0
            self.diagonals[d] = _Diagonal(d, BlockDecoder(tables, rec))

    def decode_step(self, packet: Packet) -> list[Release]:
        p = self.params
        if packet.seq != self.clock:
            kind = "late or duplicate" if packet.seq < self.clock else "out-of-order"
            raise SequenceError(f"{kind} packet seq={packet.seq}, expected {self.clock}")
        if packet.payload is not None and len(packet.payload) != p.n:
            raise ValueError(f"packet {packet.seq} carries {len(packet.payload)} symbols, expected {p.n}")
        t = self.clock
        self.diagonals[t] = _Diagonal(t, BlockDecoder(self.tables, [None] * p.n))
        for c in range(p.n):
            diag = self.diagonals.get(t - c)
            if diag is not None:
                diag.decoder.received[c] = ERASED if packet.payload is None else packet.payload[c]
        out = []
        i = t - p.T
        if i >= 0:
            got = [self._symbol(i - j, j, t) for j in range(p.k)]
            vals = tuple(v for v, _ in got)
            delay = None if None in vals else max(at - i for _, at in got)
            out.append(Release(i, vals, delay))
            done = i - (p.k - 1)
            self.diagonals.pop(done, None)
        self.clock += 1
        return out

    def _symbol(self, d: int, j: int, now: int) -> tuple[int | None, int | None]:
        """Symbol j of diagonal d and the absolute time it was recovered."""
        diag = self.diagonals[d]
        dec = diag.decoder
        if not diag.fallback:
            try:
                dec.run(through=now - d)
            except InadmissiblePatternError as exc:
                msg = f"diagonal {d}: {exc}; using the oracle decoder"
                self.warnings.append(msg)
                warnings.warn(msg, stacklevel=3)
                diag.fallback = True
        if not diag.fallback:
            res = dec.results[j]
            return res.value, d + res.time
        deadline = decode_deadline(j, self.params)
        r = oracle_decode_all(self.tables, dec.received, through=deadline)[j]
        return (None, None) if r is None else (r[0], d + r[1])


# -- packet-trace files ------------------------------------------------------------

TRACE_MAGIC = b"SCT1"
_HEADER = struct.Struct("<4sIIIIII")
_SEQ = struct.Struct("<Q")


class TraceFormatError(ValueError):
    def __init__(self, offset: int, reason: str):
        super().__init__(f"malformed trace at byte {offset}: {reason}")
        self.offset = offset


@dataclass(frozen=True)
class TraceHeader:
    p: int
    r: int
    T: int
    B: int
    N: int
    W: int

    @classmethod
    def for_tables(cls, tables: CodeTables) -> TraceHeader:
        pr = tables.params
        return cls(tables.field.p, tables.field.r, pr.T, pr.B, pr.N, pr.W)

    def params(self) -> CodeParams:
        return derive_params(self.T, self.B, self.N, self.W)


def write_trace(fh: BinaryIO, header: TraceHeader, packets: Iterable[Packet]) -> None:
    field = build_code(header.params()).field
    fh.write(_HEADER.pack(TRACE_MAGIC, header.p, header.r, header.T, header.B, header.N, header.W))
    for pkt in packets:
        fh.write(_SEQ.pack(pkt.seq))
        if pkt.payload is None:
            fh.write(b"\x01")
        else:
            fh.write(b"\x00")
            fh.write(b"".join(field.to_bytes(x) for x in pkt.payload))


def read_trace(data: bytes) -> tuple[TraceHeader, list[Packet]]:
    if len(data) < _HEADER.size:
        raise TraceFormatError(len(data), "truncated header")
    magic, p, r, T, B, N, W = _HEADER.unpack_from(data, 0)
    if magic != TRACE_MAGIC:
        raise TraceFormatError(0, f"bad magic {magic!r}")
    header = TraceHeader(p, r, T, B, N, W)
    try:
        params = header.params()
    except ValueError as exc:
        raise TraceFormatError(8, str(exc)) from None
    field = params.field
    if (field.p, field.r) != (p, r):
        raise TraceFormatError(4, f"field ({p}, {r}) does not match parameters (expected ({field.p}, {field.r}))")
    n = params.n
    off = _HEADER.size
    packets = []
    while off < len(data):
        if off + _SEQ.size + 1 > len(data):
            raise TraceFormatError(off, "truncated record")
        (seq,) = _SEQ.unpack_from(data, off)
        if seq != len(packets):
            raise TraceFormatError(off, f"sequence number {seq}, expected {len(packets)}")
        flag = data[off + _SEQ.size]
        off += _SEQ.size + 1
        if flag == 1:
            packets.append(Packet(seq, None))
            continue
        if flag != 0:
            raise TraceFormatError(off - 1, f"bad erasure flag {flag}")
        if off + n * ELEM_BYTES > len(data):
            raise TraceFormatError(off, "truncated payload")
        try:
            payload = tuple(field.from_bytes(data, off + i * ELEM_BYTES) for i in range(n))
        except ValueError:
            bad = next(i for i in range(n) if max(struct.unpack_from("<II", data, off + i * ELEM_BYTES)) >= p)
            raise TraceFormatError(off + bad * ELEM_BYTES, "coefficient out of range") from None
        packets.append(Packet(seq, payload))
        off += n * ELEM_BYTES
    return header, packets


# -- simulation --------------------------------------------------------------------


@dataclass
class SimulationResult:
    params: CodeParams
    messages: int
    erasures: int
    missed_deadlines: int
    wrong_symbols: int
    warnings: list[str] = field(default_factory=list)

    def summary(self) -> str:
        return (f"messages={self.messages} erased_packets={self.erasures} "
                f"missed_deadlines={self.missed_deadlines} wrong_symbols={self.wrong_symbols}")


def run_stream(
    tables: CodeTables,
    messages: Sequence[Sequence[int]],
    erasures: Sequence[int],
) -> SimulationResult:
    """Encode `messages`, drop packets where erasures[t] is 1, decode, compare.

    The stream is padded with zero messages so that every message reaches
    its release time; `erasures` may be shorter than the padded stream
    (missing entries mean received).
    """
    p = tables.params
    enc = StreamEncoder(tables)
    dec = StreamDecoder(tables)
    L = len(messages)
    zero = (0,) * p.k
    missed = wrong = 0
    lost = 0
    for t in range(L + p.T):
        pkt = enc.encode_step(messages[t] if t < L else zero)
        if t < len(erasures) and erasures[t]:
            pkt = Packet(pkt.seq, None)
            lost += 1
        for i, s, _ in dec.decode_step(pkt):
            if i >= L:
                continue
            for got, want in zip(s, messages[i]):
                if got is None:
                    missed += 1
                elif got != want:
                    wrong += 1
    return SimulationResult(p, L, lost, missed, wrong, list(dec.warnings))


def simulate(
    params: CodeParams,
    length: int,
    seed: int,
    *,
    loss_seed: int | None = None,
    event_rate: float = 0.05,
    loss_mix: float = 0.5,
) -> SimulationResult:
    """Random messages through a sampled admissible channel."""
    tables = build_code(params)
    rng = random.Random(seed)
    q = tables.field.order
    messages = [tuple(rng.randrange(q) for _ in range(params.k)) for _ in range(length)]
    spec = SlidingWindowSpec.for_params(params)
    erasures = sample_sequence(spec, max(length + params.T, params.W),
                               seed if loss_seed is None else loss_seed,
                               event_rate=event_rate, burst_mix=loss_mix)
    return run_stream(tables, messages, erasures)
