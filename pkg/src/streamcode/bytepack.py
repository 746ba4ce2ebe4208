"""Lossless byte <-> field-symbol packing.

The field is not byte aligned, so bytes are framed as: an 8-byte
little-endian length, the data, zero padding to a multiple of 4 bytes. Each
32-bit word becomes `digits_per_word(p)` base-p digits (least significant
first), and the digit stream is cut into rows of k symbols, the last row
zero-padded.
"""

from __future__ import annotations

import struct

__all__ = ["digits_per_word", "pack_bytes", "unpack_bytes"]

_LEN = struct.Struct("<Q")


def digits_per_word(p: int) -> int:
    d, cap = 0, 1
    while cap < 1 << 32:
        cap *= p
        d += 1
    return d


def pack_bytes(data: bytes, p: int, k: int) -> list[tuple[int, ...]]:
    framed = _LEN.pack(len(data)) + data
    framed += b"\x00" * (-len(framed) % 4)
    d = digits_per_word(p)
    digits: list[int] = []
    for (w,) in struct.iter_unpack("<I", framed):
        for _ in range(d):
            w, r = divmod(w, p)
            digits.append(r)
    digits += [0] * (-len(digits) % k)
    return [tuple(digits[i:i + k]) for i in range(0, len(digits), k)]


def unpack_bytes(rows: list[tuple[int, ...]] | list[list[int]], p: int) -> bytes:
    d = digits_per_word(p)
    digits = [x for row in rows for x in row]
    if any(not 0 <= x < p for x in digits):
        raise ValueError(f"symbol outside the base field GF({p})")
    words = []
    for i in range(0, len(digits) - d + 1, d):
        w = 0
        for x in reversed(digits[i:i + d]):
            w = w * p + x
        if w >= 1 << 32:
            raise ValueError(f"digit group {i // d} does not encode a 32-bit word")
        words.append(w)
    raw = b"".join(struct.pack("<I", w) for w in words)
    if len(raw) < _LEN.size:
        raise ValueError("packed stream too short for its length header")
    (length,) = _LEN.unpack_from(raw)
    if _LEN.size + length > len(raw):
        raise ValueError(f"length header {length} exceeds the packed data")
    return raw[_LEN.size:_LEN.size + length]
