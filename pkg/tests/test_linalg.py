from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from streamcode.construction import build_code, derive_params
from streamcode.gf import QuadExtField
from streamcode.linalg import (
    FieldMatrix,
    GuardExceeded,
    SingularMatrixError,
    SolveStatus,
    cauchy_matrix,
    dump_matrix,
    invert,
    is_mds_generator,
    is_mds_parity,
    left_null_space,
    load_matrix,
    rank,
    solve,
    submatrix,
)

F11 = QuadExtField.for_prime(11)


def rand_matrix(rng, field, rows, cols, base=True, rank_cap=None):
    top = field.p if base else field.order
    A = FieldMatrix.from_rows(field, [[rng.randrange(top) for _ in range(cols)] for _ in range(rows)], cols)
    if rank_cap is not None and rows and cols:
        # force low rank by multiplying thin factors
        L = FieldMatrix.from_rows(field, [[rng.randrange(top) for _ in range(rank_cap)] for _ in range(rows)], rank_cap)
        R = FieldMatrix.from_rows(field, [[rng.randrange(top) for _ in range(cols)] for _ in range(rank_cap)], cols)
        A = L @ R
    return A


def det_by_permutation(field, rows):
    """Leibniz determinant; independent of elimination."""
    from itertools import permutations

    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1
        for i in range(n):
            term = field.mul(term, rows[i][perm[i]])
        total = field.sub(total, term) if inv % 2 else field.add(total, term)
    return total


def test_rank_identity_and_zero():
    assert rank(FieldMatrix.identity(F11, 4)) == 4
    assert rank(FieldMatrix.zeros(F11, 3, 5)) == 0
    assert rank(FieldMatrix.zeros(F11, 0, 3)) == 0


def test_rank_matches_determinant_for_small_square():
    rng = random.Random(5)
    for _ in range(200):
        A = rand_matrix(rng, F11, 3, 3)
        assert (rank(A) == 3) == (det_by_permutation(F11, A.data) != 0)


def test_rank_product_bounds_on_200_pairs():
    rng = random.Random(2024)
    for _ in range(200):
        K, L, M = rng.randint(1, 6), rng.randint(1, 6), rng.randint(1, 6)
        A = rand_matrix(rng, F11, K, L, rank_cap=rng.randint(1, min(K, L)))
        B = rand_matrix(rng, F11, L, M, rank_cap=rng.randint(1, min(L, M)))
        rA, rB, rAB = rank(A), rank(B), rank(A @ B)
        assert rAB <= min(rA, rB)
        assert rAB >= rA + rB - L


def test_solve_identity():
    b = [3, 5, F11.code(1, 2)]
    res = solve(FieldMatrix.identity(F11, 3), b)
    assert res.status is SolveStatus.UNIQUE and list(res.x) == b


def test_solve_cauchy_2x2_by_substitution():
    C = cauchy_matrix(F11, [0, 1], [2, 3])
    b = [7, 4]
    res = solve(C, b)
    assert res.unique
    Ax = [F11.add(F11.mul(C[i, 0], res.x[0]), F11.mul(C[i, 1], res.x[1])) for i in range(2)]
    assert Ax == b


def test_solve_reports_inconsistent_and_underdetermined():
    Z = FieldMatrix.zeros(F11, 2, 2)
    assert solve(Z, [1, 0]).status is SolveStatus.INCONSISTENT
    res = solve(Z, [0, 0])
    assert res.status is SolveStatus.UNDERDETERMINED and res.free_columns == (0, 1)
    with pytest.raises(ValueError):
        solve(Z, [1])


def test_invert_identity_and_singular():
    I = FieldMatrix.identity(F11, 4)
    assert invert(I) == I
    S = FieldMatrix.from_rows(F11, [[1, 2], [2, 4]])
    with pytest.raises(SingularMatrixError, match="column 1") as info:
        invert(S)
    assert info.value.column == 1


def test_invert_spreading_matrix_643():
    t = build_code(derive_params(6, 4, 3))
    assert invert(t.M) @ t.M == FieldMatrix.identity(t.field, 4)
    assert t.Minv == invert(t.M)


def test_left_null_space_of_full_row_rank_generator_is_empty():
    t = build_code(derive_params(6, 4, 3))
    assert left_null_space(t.G) == []


def test_left_null_space_basis():
    rng = random.Random(9)
    for _ in range(50):
        A = rand_matrix(rng, F11, 5, 3, rank_cap=rng.randint(1, 3))
        basis = left_null_space(A)
        assert len(basis) == A.rows - rank(A)
        for v in basis:
            vA = FieldMatrix.from_rows(F11, [v]) @ A
            assert not any(vA.data[0])
        if basis:
            assert rank(FieldMatrix.from_rows(F11, basis)) == len(basis)


def test_cauchy_entries():
    assert cauchy_matrix(F11, [0], [1]).data == ((10,),)
    C = cauchy_matrix(F11, [0, 1, 2, 3], [4, 5, 6, 7])
    for i, x in enumerate([0, 1, 2, 3]):
        for j, y in enumerate([4, 5, 6, 7]):
            assert F11.mul(C[i, j], (x - y) % 11) == 1
    with pytest.raises(ValueError):
        cauchy_matrix(F11, [0, 1], [1, 2])


def test_cauchy_4x4_every_square_submatrix_nonsingular_by_determinant():
    from itertools import combinations

    C = cauchy_matrix(F11, [0, 1, 2, 3], [4, 5, 6, 7])
    for s in range(1, 5):
        for ri in combinations(range(4), s):
            for ci in combinations(range(4), s):
                assert det_by_permutation(F11, [[C[i, j] for j in ci] for i in ri]) != 0
    assert is_mds_parity(C)


def test_is_mds_parity_negative_cases():
    assert not is_mds_parity(FieldMatrix.from_rows(F11, [[1, 1], [1, 1]]))
    assert not is_mds_parity(FieldMatrix.from_rows(F11, [[0]]))
    big = cauchy_matrix(QuadExtField.for_prime(29), range(12), range(12, 24))
    with pytest.raises(GuardExceeded):
        is_mds_parity(big, max_submatrices=1000)


def test_is_mds_generator_matches_parity_test():
    P = cauchy_matrix(F11, range(4), range(4, 8))
    G = FieldMatrix.identity(F11, 4).hstack(P)
    assert is_mds_generator(G)
    bad = G.with_entries({(0, 4): 0})
    assert not is_mds_generator(bad)
    assert not is_mds_parity(submatrix(bad, None, range(4, 8)))


def test_submatrix_selection():
    t = build_code(derive_params(6, 4, 3))
    G = t.G
    assert submatrix(G, range(G.rows), range(G.cols)) == G
    assert submatrix(G, None, None) == G
    GTB = submatrix(G, [2, 3], range(4, 8))
    assert GTB.data == (G.data[2][4:8], G.data[3][4:8])
    assert GTB == t.G_TB
    E = submatrix(G, [], [])
    assert E.shape == (0, 0)
    with pytest.raises(IndexError):
        submatrix(G, [4], None)


def test_puncture_shorten_duality():
    """Dual of a punctured code = the dual shortened on the same coordinates."""
    from itertools import combinations

    rng = random.Random(11)
    for _ in range(20):
        k, r = rng.randint(1, 4), rng.randint(1, 4)
        n = k + r
        P = rand_matrix(rng, F11, k, r)
        G = FieldMatrix.identity(F11, k).hstack(P)
        H = (-P.T).hstack(FieldMatrix.identity(F11, r))
        assert not any(x for row in (G @ H.T).data for x in row)
        for s in range(1, r):
            for S in combinations(range(n), s):
                keep = [j for j in range(n) if j not in S]
                Gp = submatrix(G, None, keep)
                # rows of span(H) vanishing on S, restricted to the rest
                coeffs = left_null_space(submatrix(H, None, list(S)))
                if not coeffs:
                    Hs = FieldMatrix.zeros(F11, 0, len(keep))
                else:
                    Hs = submatrix(FieldMatrix.from_rows(F11, coeffs, H.rows) @ H, None, keep)
                if Hs.rows:
                    assert not any(x for row in (Gp @ Hs.T).data for x in row)
                assert rank(Hs) == len(keep) - rank(Gp)


def test_dump_round_trip_is_bit_exact():
    t = build_code(derive_params(6, 4, 3))
    for M in t.matrices().values():
        text = dump_matrix(M)
        assert load_matrix(text) == M
        assert dump_matrix(load_matrix(text)) == text
    doc = json.loads(dump_matrix(t.G))
    assert doc["entries"][6] == "0+1*w"
    assert (doc["p"], doc["r"], doc["rows"], doc["cols"]) == (11, 2, 4, 8)


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 120), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=60)
@given(matrices, st.lists(st.integers(0, 120), min_size=4, max_size=4))
def test_solve_is_truthful(rows, b):
    A = FieldMatrix.from_rows(F11, rows)
    b = b[: A.rows]
    res = solve(A, b)
    if res.status is SolveStatus.INCONSISTENT:
        aug = A.hstack(FieldMatrix.from_rows(F11, [[x] for x in b]))
        assert rank(aug) == rank(A) + 1
        return
    x = FieldMatrix.from_rows(F11, [[v] for v in res.x])
    assert [r[0] for r in (A @ x).data] == list(b)
    assert res.unique == (rank(A) == A.cols)


@settings(max_examples=40)
@given(matrices, matrices, matrices)
def test_matmul_associative_when_shapes_allow(a, b, c):
    A, B, C = (FieldMatrix.from_rows(F11, m) for m in (a, b, c))
    if A.cols == B.rows and B.cols == C.rows:
        assert (A @ B) @ C == A @ (B @ C)
    assert A.T.T == A
