"""Prime fields GF(p) and their quadratic extensions GF(p^2) = GF(p)[w]/(w^2 - r).

Extension elements are stored in two forms. `ExtElem` is the user-facing value
type with arithmetic operators. Inside matrices and decoders an element is an
integer *code* ``a + b*p``; the hot loops index the lookup rows exposed as
``field.ADD``, ``field.SUB`` and ``field.MUL`` (``MUL[x][y]`` is the code of
``x*y``). Rows are built lazily, so large ``p`` costs nothing until used.

Codes below ``p`` are exactly the embedded base field.
"""

from __future__ import annotations

import re
import struct
from dataclasses import dataclass, field
from functools import lru_cache

__all__ = [
    "PrimeField",
    "FieldElem",
    "QuadExtField",
    "ExtElem",
    "smallest_prime_at_least",
    "find_nonresidue",
    "ext_add",
    "ext_mul",
    "ext_neg",
    "ext_inv",
    "embed",
    "is_in_base",
    "field_for_length",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def smallest_prime_at_least(n: int) -> int:
    """Smallest prime p with p >= n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    p = max(n, 2)
    while not is_prime(p):
        p += 1
    return p


def find_nonresidue(p: int) -> int:
    """Smallest r in [2, p) with no square root mod p (Euler's criterion)."""
    if p == 2:
        raise ValueError("p = 2 has no quadratic non-residue; use an odd prime")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    for r in range(2, p):
        if pow(r, (p - 1) // 2, p) == p - 1:
            return r
    raise AssertionError("unreachable: every odd prime has a non-residue")


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __call__(self, value: int) -> FieldElem:
        return FieldElem(value % self.p, self)

    def inv(self, value: int) -> int:
        if value % self.p == 0:
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.p)
        return pow(value, self.p - 2, self.p)


@dataclass(frozen=True)
class FieldElem:
    value: int
    field: PrimeField

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.field.p:
            raise ValueError(f"{self.value} is not a canonical GF({self.field.p}) value")

    def _coerce(self, other: FieldElem | int) -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError("operands from different fields")
            return other.value
        return other % self.field.p

    def __add__(self, other: FieldElem | int) -> FieldElem:
        return self.field(self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other: FieldElem | int) -> FieldElem:
        return self.field(self.value - self._coerce(other))

    def __mul__(self, other: FieldElem | int) -> FieldElem:
        return self.field(self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self) -> FieldElem:
        return self.field(-self.value)

    def inverse(self) -> FieldElem:
        return self.field(self.field.inv(self.value))

    def __truediv__(self, other: FieldElem | int) -> FieldElem:
        return self * self.field(self.field.inv(self._coerce(other)))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.p})"


class _LazyRows(dict):
    """dict of table rows, each built on first access."""

    def __init__(self, build):
        super().__init__()
        self._build = build

    def __missing__(self, x: int) -> list[int]:
        row = self._build(x)
        self[x] = row
        return row


_TEXT_RE = re.compile(r"^\s*(\d+)\s*(?:\+\s*(\d+)\s*\*\s*w)?\s*$")
_BIN = struct.Struct("<II")


@dataclass(frozen=True)
class QuadExtField:
    """GF(p^2) modelled as pairs a + b*w with w^2 = r."""

    p: int
    r: int
    ADD: _LazyRows = field(init=False, repr=False, compare=False)
    SUB: _LazyRows = field(init=False, repr=False, compare=False)
    MUL: _LazyRows = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        p, r = self.p, self.r
        if p == 2 or not is_prime(p):
            raise ValueError(f"base modulus must be an odd prime, got {p}")
        if not 0 < r < p or pow(r, (p - 1) // 2, p) != p - 1:
            raise ValueError(f"{r} is not a quadratic non-residue mod {p}")
        q = p * p
        object.__setattr__(self, "ADD", _LazyRows(lambda x: [self._add(x, y) for y in range(q)]))
        object.__setattr__(self, "SUB", _LazyRows(lambda x: [self._sub(x, y) for y in range(q)]))
        object.__setattr__(self, "MUL", _LazyRows(lambda x: [self._mul(x, y) for y in range(q)]))

    @classmethod
    def for_prime(cls, p: int) -> QuadExtField:
        return _ext_field(p)

    @property
    def order(self) -> int:
        return self.p * self.p

    # -- raw arithmetic on codes ------------------------------------------------

    def _add(self, x: int, y: int) -> int:
        p = self.p
        return (x % p + y % p) % p + ((x // p + y // p) % p) * p

    def _sub(self, x: int, y: int) -> int:
        p = self.p
        return (x % p - y % p) % p + ((x // p - y // p) % p) * p

    def _mul(self, x: int, y: int) -> int:
        p = self.p
        a, b = x % p, x // p
        c, d = y % p, y // p
        return (a * c + b * d * self.r) % p + ((a * d + b * c) % p) * p

    def add(self, x: int, y: int) -> int:
        return self.ADD[x][y]

    def sub(self, x: int, y: int) -> int:
        return self.SUB[x][y]

    def mul(self, x: int, y: int) -> int:
        return self.MUL[x][y]

    def neg(self, x: int) -> int:
        return self.SUB[0][x]

    def inv(self, x: int) -> int:
        """Inverse via the norm: (a + bw)^-1 = (a - bw) / (a^2 - r b^2)."""
        if x == 0:
            raise ZeroDivisionError("inverse of zero in GF(%d^2)" % self.p)
        p = self.p
        a, b = x % p, x // p
        norm = (a * a - self.r * b * b) % p
        ninv = pow(norm, p - 2, p)
        return (a * ninv) % p + ((-b * ninv) % p) * p

    def div(self, x: int, y: int) -> int:
        return self.MUL[x][self.inv(y)]

    def pow(self, x: int, e: int) -> int:
        acc, base = 1, x
        while e:
            if e & 1:
                acc = self.MUL[acc][base]
            base = self.MUL[base][base]
            e >>= 1
        return acc

    def is_base(self, x: int) -> bool:
        return x < self.p

    # -- conversions ------------------------------------------------------------

    def code(self, a: int, b: int = 0) -> int:
        return a % self.p + (b % self.p) * self.p

    def elem(self, code: int) -> ExtElem:
        return ExtElem(code % self.p, code // self.p, self)

    @property
    def omega(self) -> ExtElem:
        return ExtElem(0, 1, self)

    def format(self, code: int) -> str:
        return f"{code % self.p}+{code // self.p}*w"

    def parse(self, text: str) -> int:
        """Parse ``"a+b*w"`` (or a bare base value ``"a"``) into a code."""
        m = _TEXT_RE.match(text)
        if not m:
            raise ValueError(f"malformed field element {text!r}")
        a, b = int(m.group(1)), int(m.group(2) or 0)
        if a >= self.p or b >= self.p:
            raise ValueError(f"coefficient out of range for GF({self.p}^2): {text!r}")
        return a + b * self.p

    def to_bytes(self, code: int) -> bytes:
        return _BIN.pack(code % self.p, code // self.p)

    def from_bytes(self, data: bytes, offset: int = 0) -> int:
        a, b = _BIN.unpack_from(data, offset)
        if a >= self.p or b >= self.p:
            raise ValueError(f"coefficient out of range for GF({self.p}^2) at byte {offset}")
        return a + b * self.p


ELEM_BYTES = _BIN.size


@lru_cache(maxsize=None)
def _ext_field(p: int) -> QuadExtField:
    return QuadExtField(p, find_nonresidue(p))


def field_for_length(n: int) -> QuadExtField:
    """The extension field used for a length-n code: p = smallest prime >= max(n, 3)."""
    return _ext_field(smallest_prime_at_least(max(n, 3)))


@dataclass(frozen=True)
class ExtElem:
    a: int
    b: int
    field: QuadExtField = field(repr=False)

    def __post_init__(self) -> None:
        p = self.field.p
        if not (0 <= self.a < p and 0 <= self.b < p):
            raise ValueError(f"coefficients ({self.a}, {self.b}) not canonical mod {p}")

    @property
    def code(self) -> int:
        return self.a + self.b * self.field.p

    def _other(self, other: ExtElem | int) -> int:
        if isinstance(other, ExtElem):
            if other.field != self.field:
                raise ValueError("operands from different fields")
            return other.code
        return other % self.field.p

    def __add__(self, other: ExtElem | int) -> ExtElem:
        return self.field.elem(self.field.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other: ExtElem | int) -> ExtElem:
        return self.field.elem(self.field.sub(self.code, self._other(other)))

    def __rsub__(self, other: int) -> ExtElem:
        return self.field.elem(self.field.sub(self._other(other), self.code))

    def __mul__(self, other: ExtElem | int) -> ExtElem:
        return self.field.elem(self.field.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self) -> ExtElem:
        return self.field.elem(self.field.neg(self.code))

    def inverse(self) -> ExtElem:
        return self.field.elem(self.field.inv(self.code))

    def __truediv__(self, other: ExtElem | int) -> ExtElem:
        return self.field.elem(self.field.div(self.code, self._other(other)))

    def __pow__(self, e: int) -> ExtElem:
        if e < 0:
            return self.inverse() ** (-e)
        return self.field.elem(self.field.pow(self.code, e))

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __str__(self) -> str:
        return f"{self.a}+{self.b}*w"


def ext_add(x: ExtElem, y: ExtElem) -> ExtElem:
    return x + y


def ext_mul(x: ExtElem, y: ExtElem) -> ExtElem:
    return x * y


def ext_neg(x: ExtElem) -> ExtElem:
    return -x


def ext_inv(x: ExtElem) -> ExtElem:
    return x.inverse()


def embed(x: FieldElem | int, ext: QuadExtField | None = None) -> ExtElem:
    """Base element x as x + 0w."""
    if isinstance(x, FieldElem):
        ext = ext or _ext_field(x.field.p)
        if ext.p != x.field.p:
            raise ValueError("base and extension moduli differ")
        return ExtElem(x.value, 0, ext)
    if ext is None:
        raise ValueError("an extension field is required to embed a plain integer")
    return ExtElem(x % ext.p, 0, ext)


def is_in_base(x: ExtElem) -> bool:
    return x.b == 0
