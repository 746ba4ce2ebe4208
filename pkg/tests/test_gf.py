from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from streamcode.gf import (
    ExtElem,
    PrimeField,
    QuadExtField,
    embed,
    ext_add,
    ext_inv,
    ext_mul,
    ext_neg,
    field_for_length,
    find_nonresidue,
    is_in_base,
    smallest_prime_at_least,
)

SMALL_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]


@pytest.mark.parametrize("n, p", [(8, 11), (2, 2), (14, 17), (1, 2), (11, 11), (24, 29)])
def test_smallest_prime_at_least(n, p):
    assert smallest_prime_at_least(n) == p


def test_smallest_prime_has_no_prime_gap_below():
    for n in range(1, 200):
        p = smallest_prime_at_least(n)
        assert p >= n
        assert all(any(m % d == 0 for d in range(2, m)) or m < 2 for m in range(n, p))


@pytest.mark.parametrize("p, r", [(11, 2), (3, 2), (7, 3), (5, 2), (17, 3), (23, 5)])
def test_find_nonresidue(p, r):
    assert find_nonresidue(p) == r
    squares = {x * x % p for x in range(p)}
    assert r not in squares
    assert all(c in squares for c in range(2, r))


def test_nonresidue_rejects_two_and_composites():
    with pytest.raises(ValueError, match="p = 2"):
        find_nonresidue(2)
    with pytest.raises(ValueError):
        find_nonresidue(9)


def test_ext_field_rejects_residue():
    with pytest.raises(ValueError):
        QuadExtField(11, 3)  # 3 = 5^2 mod 11
    with pytest.raises(ValueError):
        QuadExtField(2, 1)


def test_identity_and_omega_square():
    F = QuadExtField.for_prime(11)
    one = F.elem(1)
    for code in range(F.order):
        x = F.elem(code)
        assert one * x == x
    w = F.omega
    assert w * w == F.elem(F.code(F.r, 0))
    assert str(w * w) == "2+0*w"


def test_every_nonzero_element_of_gf121_has_inverse():
    F = QuadExtField.for_prime(11)
    for code in range(1, F.order):
        x = F.elem(code)
        assert x * ext_inv(x) == F.elem(1)
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_inverse_matches_brute_force_search():
    F = QuadExtField.for_prime(7)
    for x in range(1, F.order):
        brute = [y for y in range(F.order) if F._mul(x, y) == 1]
        assert brute == [F.inv(x)]


def test_multiplication_formula_matches_definition():
    F = QuadExtField.for_prime(13)
    for a, b, c, d in [(1, 2, 3, 4), (12, 0, 5, 7), (0, 1, 0, 1), (6, 6, 6, 6)]:
        got = ExtElem(a, b, F) * ExtElem(c, d, F)
        assert (got.a, got.b) == ((a * c + b * d * F.r) % 13, (a * d + b * c) % 13)


def test_embed_is_a_ring_homomorphism_on_gf11():
    Fp = PrimeField(11)
    F = QuadExtField.for_prime(11)
    assert str(embed(Fp(0))) == "0+0*w"
    for a in range(11):
        for b in range(11):
            assert embed(Fp(a)) * embed(Fp(b)) == embed(Fp(a) * Fp(b))
            assert embed(Fp(a)) + embed(Fp(b)) == embed(Fp(a) + Fp(b))
            assert embed(Fp(a), F) == F.elem(a)


def test_is_in_base():
    F = QuadExtField.for_prime(11)
    assert not is_in_base(F.omega)
    assert is_in_base(F.elem(7))
    assert all(is_in_base(F.elem(c)) == F.is_base(c) for c in range(F.order))


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_frobenius_fixes_exactly_the_base_field(p):
    F = QuadExtField.for_prime(p)
    fixed = [c for c in range(F.order) if F.pow(c, p) == c]
    assert fixed == list(range(p))


@pytest.mark.parametrize("p", [3, 5, 11])
def test_multiplicative_group_is_cyclic_of_order_q_minus_1(p):
    F = QuadExtField.for_prime(p)
    q = F.order
    assert all(F.pow(c, q - 1) == 1 for c in range(1, q))


def test_field_choice_is_deterministic():
    assert field_for_length(8) is field_for_length(8)
    assert (field_for_length(8).p, field_for_length(8).r) == (11, 2)
    # n = 2 would give p = 2; the extension needs an odd prime.
    assert field_for_length(2).p == 3


def test_text_and_binary_forms_round_trip():
    F = QuadExtField.for_prime(11)
    for c in range(F.order):
        assert F.parse(F.format(c)) == c
        assert F.from_bytes(F.to_bytes(c)) == c
    assert F.to_bytes(F.code(3, 7)) == bytes([3, 0, 0, 0, 7, 0, 0, 0])
    assert F.parse("5") == 5
    for bad in ["", "11+0*w", "1+w", "a+b*w", "1+2*x"]:
        with pytest.raises(ValueError):
            F.parse(bad)


def test_prime_field_elements():
    Fp = PrimeField(7)
    assert (Fp(3) * Fp(5)).value == 1
    assert (Fp(3) / Fp(3)).value == 1
    assert (-Fp(2)).value == 5
    with pytest.raises(ValueError):
        PrimeField(8)
    with pytest.raises(ZeroDivisionError):
        Fp(0).inverse()


elems = st.builds(lambda c: QuadExtField.for_prime(13).elem(c), st.integers(0, 168))


@given(elems, elems, elems)
def test_field_axioms(x, y, z):
    assert ext_add(x, y) == ext_add(y, x)
    assert ext_mul(x, y) == ext_mul(y, x)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert ext_add(x, ext_neg(x)) == x.field.elem(0)
    if y:
        assert (x / y) * y == x


@given(elems, st.integers(0, 400), st.integers(0, 400))
def test_power_laws(x, a, b):
    assert x ** (a + b) == (x ** a) * (x ** b)
