"""The (W, B, N) sliding-window erasure model.

A binary erasure sequence is admissible when every length-W window holds
either at most N erasures, or at most B erasures that are all consecutive.
Windows hanging off either end are truncated, which is the same as padding
the sequence with zeros.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

from .linalg import GuardExceeded

__all__ = [
    "ErasurePattern",
    "SlidingWindowSpec",
    "Admissibility",
    "enumerate_block_patterns",
    "is_admissible",
    "sample_sequence",
    "to_bits",
    "from_bits",
    "MAX_BLOCK_LENGTH",
]

MAX_BLOCK_LENGTH = 24


@dataclass(frozen=True)
class ErasurePattern:
    n: int
    erased: tuple[int, ...]

    def __post_init__(self) -> None:
        e = self.erased
        if any(not 0 <= i < self.n for i in e):
            raise ValueError(f"erasure coordinates {e} out of range for n={self.n}")
        if list(e) != sorted(set(e)):
            raise ValueError("erasure coordinates must be sorted and distinct")

    @classmethod
    def of(cls, n: int, erased) -> ErasurePattern:
        return cls(n, tuple(sorted(set(erased))))

    def __contains__(self, i: int) -> bool:
        return i in self.erased

    def __len__(self) -> int:
        return len(self.erased)

    @property
    def is_burst(self) -> bool:
        """Nonempty and consecutive."""
        e = self.erased
        return bool(e) and e[-1] - e[0] + 1 == len(e)

    def mask(self) -> list[int]:
        s = set(self.erased)
        return [int(i in s) for i in range(self.n)]

    def __str__(self) -> str:
        return "".join(map(str, self.mask()))


@dataclass(frozen=True)
class SlidingWindowSpec:
    W: int
    B: int
    N: int

    def __post_init__(self) -> None:
        if not self.B >= self.N >= 1:
            raise ValueError(f"need B >= N >= 1, got B={self.B}, N={self.N}")
        if self.W < self.B:
            raise ValueError(f"window W={self.W} shorter than burst B={self.B}")

    @classmethod
    def for_params(cls, params) -> SlidingWindowSpec:
        return cls(params.W, params.B, params.N)

    def window_ok(self, positions: Sequence[int]) -> bool:
        c = len(positions)
        if c <= self.N:
            return True
        return c <= self.B and positions[-1] - positions[0] + 1 == c


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    window: tuple[int, int] | None = None
    """First violating window [start, end] (inclusive, clipped to the sequence)."""

    def __bool__(self) -> bool:
        return self.ok


def enumerate_block_patterns(n: int, B: int, N: int) -> list[ErasurePattern]:
    """Every run of length 1..B and every subset of size 0..N, deduplicated.

    Order: by size, then lexicographically.
    """
    if n > MAX_BLOCK_LENGTH:
        raise GuardExceeded(f"block length {n} exceeds the enumeration guard {MAX_BLOCK_LENGTH}")
    seen: set[tuple[int, ...]] = set()
    for s in range(0, min(N, n) + 1):
        seen.update(combinations(range(n), s))
    for length in range(1, min(B, n) + 1):
        for start in range(n - length + 1):
            seen.add(tuple(range(start, start + length)))
    return [ErasurePattern(n, e) for e in sorted(seen, key=lambda e: (len(e), e))]


def block_pattern_count(n: int, B: int, N: int) -> int:
    """Closed form for len(enumerate_block_patterns(n, B, N)) (assumes n >= B)."""
    subsets = sum(comb(n, s) for s in range(N + 1))
    runs = sum(n - L + 1 for L in range(N + 1, B + 1))
    return subsets + runs


def is_admissible(e: Sequence[int], spec: SlidingWindowSpec) -> Admissibility:
    """Scan every window of length W (and the truncated edge windows)."""
    ones = [i for i, v in enumerate(e) if v]
    if not ones:
        return Admissibility(True)
    W = spec.W
    length = len(e)
    # Windows [s, s+W-1] for s from 1-W to length-1; only those containing
    # an erasure matter, and the set in a window changes only at erasures.
    lo = 0
    hi = 0
    for s in range(ones[0] - W + 1, ones[-1] + 1):
        while lo < len(ones) and ones[lo] < s:
            lo += 1
        while hi < len(ones) and ones[hi] <= s + W - 1:
            hi += 1
        if not spec.window_ok(ones[lo:hi]):
            return Admissibility(False, (max(s, 0), min(s + W - 1, length - 1)))
    return Admissibility(True)


def sample_sequence(
    spec: SlidingWindowSpec,
    length: int,
    seed: int,
    *,
    event_rate: float = 0.05,
    burst_mix: float = 0.5,
) -> list[int]:
    """Admissible erasure sequence built event by event.

    At each free slot an event starts with probability `event_rate`. A burst
    event (probability `burst_mix`) erases 1..B consecutive slots. Otherwise up
    to N isolated erasures are placed inside a span of at most W slots. Each
    event is followed by at least W-1 zeros, so no window sees two events.
    """
    if length < spec.W:
        raise ValueError(f"length {length} shorter than the window W={spec.W}")
    if not (0.0 <= event_rate <= 1.0 and 0.0 <= burst_mix <= 1.0):
        raise ValueError("event_rate and burst_mix must lie in [0, 1]")
    rng = random.Random(seed)
    seq = [0] * length
    i = 0
    while i < length:
        if event_rate == 0.0 or rng.random() >= event_rate:
            i += 1
            continue
        if rng.random() < burst_mix:
            size = rng.randint(1, spec.B)
            offsets = list(range(size))
        else:
            count = rng.randint(1, spec.N)
            span = rng.randint(count, spec.W)
            offsets = sorted(rng.sample(range(span), count))
        for o in offsets:
            if i + o < length:
                seq[i + o] = 1
        i += offsets[-1] + spec.W
    return seq


def to_bits(e: Sequence[int]) -> str:
    return "".join("1" if v else "0" for v in e)


def from_bits(text: str) -> list[int]:
    text = text.strip()
    if set(text) - {"0", "1"}:
        raise ValueError("erasure sequence must contain only '0' and '1'")
    return [int(c) for c in text]
