import numpy as np
import pytest
import sympy
from sympy.matrices.normalforms import invariant_factors
from hypothesis import given, strategies as st

import oracles
from regsandpile.abelian import AbelianGroupType
from regsandpile.linalg import (BigIntMatrix, ModMatrix, cokernel_type, corank_mod_p, det_mod_p,
                                determinant, lattice_contains, rank_mod_p, smith_normal_form,
                                snf_mod_pk, subgroup_order)

K4_REDUCED = [[3, -1, -1], [-1, 3, -1], [-1, -1, 3]]


def valuation(x, p):
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def random_matrix(rng, max_dim=8, bound=5, square=False):
    m = int(rng.integers(1, max_dim + 1))
    n = m if square else int(rng.integers(1, max_dim + 1))
    return rng.integers(-bound, bound + 1, size=(m, n)).tolist()


matrices = st.integers(1, 6).flatmap(
    lambda m: st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n),
                           min_size=m, max_size=m)))
square = st.integers(1, 7).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n))


def test_snf_examples():
    assert smith_normal_form([[2, 0], [0, 3]]).invariant_factors == (1, 6)
    assert smith_normal_form(np.eye(3, dtype=int)).invariant_factors == (1, 1, 1)
    assert smith_normal_form(K4_REDUCED).invariant_factors == (1, 4, 4)


def test_snf_mod_pk_examples():
    assert snf_mod_pk([[4, 0], [0, 6]], 2, 3) == (2, 1)
    assert snf_mod_pk([[4, 0], [0, 6]], 2, 1) == (1, 1)


def test_rank_mod_p_examples():
    assert rank_mod_p(np.zeros((4, 4), dtype=int), 2) == 0
    for p in (2, 3, 7):
        assert rank_mod_p(np.eye(6, dtype=int), p) == 6


def test_symmetric_zero_diagonal_has_even_rank_mod_2():
    rng = np.random.default_rng(4)
    for _ in range(50):
        a = np.triu(rng.integers(0, 2, (5, 5)), 1)
        assert rank_mod_p(a + a.T, 2) % 2 == 0


def test_determinant_examples():
    c5 = [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -1, 2, -1], [0, 0, -1, 2]]
    assert abs(determinant(c5)) == 5
    assert determinant([[1, 1], [1, 1]]) == 0
    assert abs(determinant(K4_REDUCED)) == 16


def test_determinant_large_matches_exact():
    # n >= 24 uses the multimodular path
    rng = np.random.default_rng(0)
    for n in (24, 30, 40):
        M = rng.integers(-9, 10, (n, n)).tolist()
        assert determinant(M) == oracles.det_exact(M)


def test_cokernel_examples():
    assert cokernel_type([[1, 0], [0, 1]]) == AbelianGroupType()
    assert cokernel_type([[2, 0], [0, 3]]) == AbelianGroupType((6,))
    assert cokernel_type([[0, 0], [0, 0], [0, 0]]) == AbelianGroupType((), 2)


def test_cokernel_large_against_sympy():
    # exercises the mod-determinant diagonalization used for n >= 24
    rng = np.random.default_rng(2)
    for n in (24, 28):
        M = rng.integers(-3, 4, (n, n)).tolist()
        ref = invariant_factors(sympy.Matrix(M), domain=sympy.ZZ)
        ref = [abs(int(x)) for x in ref if abs(int(x)) > 1]
        assert list(cokernel_type(M).invariant_factors) == ref


@given(matrices)
def test_cokernel_matches_determinantal_divisors(M):
    G = cokernel_type(M)
    factors, free = oracles.cokernel_bruteforce(M)
    assert list(G.invariant_factors) == factors
    assert G.free_rank == free


@given(matrices)
def test_snf_divisibility_chain(M):
    d = smith_normal_form(M).invariant_factors
    assert all(b % a == 0 for a, b in zip(d, d[1:]))


@given(square)
def test_snf_product_is_abs_det(M):
    det = oracles.det_exact(M)
    snf = smith_normal_form(M)
    if det:
        prod = 1
        for x in snf.invariant_factors:
            prod *= x
        assert prod == abs(det) == abs(determinant(M))
    else:
        assert snf.free_corank > 0 and determinant(M) == 0


@given(matrices, st.randoms(use_true_random=False))
def test_cokernel_invariant_under_signed_permutations(M, rnd):
    A = np.array(M)
    rows = list(range(A.shape[0]))
    cols = list(range(A.shape[1]))
    rnd.shuffle(rows)
    rnd.shuffle(cols)
    B = A[rows][:, cols]
    B[rnd.randrange(B.shape[0])] *= -1
    assert cokernel_type(B) == cokernel_type(A)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_snf_mod_pk_matches_capped_valuations(p):
    rng = np.random.default_rng(p)
    k = 4
    for _ in range(200):
        M = random_matrix(rng, max_dim=6)
        snf = smith_normal_form(M)
        m, n = len(M), len(M[0])
        vals = [min(valuation(d, p), k) for d in snf.invariant_factors]
        vals += [k] * (n - len(snf.invariant_factors))  # free columns are killed only at p^k
        expected = tuple(sorted((v for v in vals if v), reverse=True))
        assert snf_mod_pk(M, p, k) == expected, (M, snf)


def test_snf_mod_pk_random_8x8():
    rng = np.random.default_rng(50)
    for _ in range(50):
        M = rng.integers(-5, 6, (8, 8)).tolist()
        snf = smith_normal_form(M)
        vals = [min(valuation(d, 2), 4) for d in snf.invariant_factors] + [4] * snf.free_corank
        assert snf_mod_pk(M, 2, 4) == tuple(sorted((v for v in vals if v), reverse=True))


@given(matrices, st.sampled_from([2, 3, 5, 7]))
def test_rank_mod_p_counts_units(M, p):
    snf = smith_normal_form(M)
    assert rank_mod_p(M, p) == sum(1 for d in snf.invariant_factors if d % p)
    assert corank_mod_p(M, p) == len(M[0]) - rank_mod_p(M, p)


@given(square, st.sampled_from([2, 3, 5]))
def test_det_mod_p(M, p):
    assert det_mod_p(M, p) == oracles.det_exact(M) % p


def test_mod_matrix_reduces_entries():
    M = ModMatrix(8, np.array([[9, -1], [16, 3]]))
    assert M.entries.tolist() == [[1, 7], [0, 3]]


def test_bigint_matrix_roundtrip():
    rows = [[10 ** 30, -1], [2, 3]]
    M = BigIntMatrix.from_rows(rows)
    assert M.to_rows() == rows
    assert BigIntMatrix.from_record(M.to_record()) == M
    assert abs(determinant(M)) == abs(3 * 10 ** 30 + 2)


def test_lattice_helpers():
    assert lattice_contains([[2, 0], [0, 3]], [4, 9])
    assert not lattice_contains([[2, 0], [0, 3]], [1, 0])
    assert subgroup_order([[1, 1]], [2, 4]) == 4
