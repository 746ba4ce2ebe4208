from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from streamcode.bytepack import digits_per_word, pack_bytes, unpack_bytes


def test_digits_per_word():
    assert digits_per_word(2) == 32
    assert digits_per_word(11) == 10  # 11**9 < 2**32 <= 11**10
    assert digits_per_word(65537) == 2


def test_examples():
    rows = pack_bytes(b"hello", 11, 4)
    assert all(len(r) == 4 and all(0 <= x < 11 for x in r) for r in rows)
    assert unpack_bytes(rows, 11) == b"hello"
    assert unpack_bytes(pack_bytes(b"", 3, 2), 3) == b""


def test_rejects_corrupt_input():
    rows = pack_bytes(b"abc", 11, 4)
    with pytest.raises(ValueError):
        unpack_bytes([(11,) + rows[0][1:]] + rows[1:], 11)
    with pytest.raises(ValueError):
        unpack_bytes(rows[:1], 11)
    with pytest.raises(ValueError):
        unpack_bytes([(10,) * 4] * len(rows), 11)


@given(st.binary(max_size=300), st.sampled_from([2, 3, 5, 11, 13, 17, 23]), st.integers(1, 9))
def test_round_trip(data, p, k):
    rows = pack_bytes(data, p, k)
    assert all(len(r) == k for r in rows)
    assert unpack_bytes(rows, p) == data
