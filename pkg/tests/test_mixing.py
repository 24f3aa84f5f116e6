import itertools
import random
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from regsandpile.abelian import AbelianGroupType, exterior_square_order, rank2
from regsandpile.mixing import (FiniteDistribution, LiftPreconditionError, VectorClass,
                                aff_and_sum, d_infinity, directed_class_law, directed_gap,
                                directed_profiles, exact_dist_directed, exact_dist_matching,
                                is_alpha_typical, matching_gap, matching_profiles,
                                pair_sum_in_i2, predicted_symmetric_size, r_set,
                                r_set_symmetric, r_set_symmetric_size, r_set_size,
                                symmetric_even_diag_lift, total_mixing_gap, total_variation,
                                vector_classes, verify_lift)

Z2 = AbelianGroupType.cyclic(2)
Z3 = AbelianGroupType.cyclic(3)
Z4 = AbelianGroupType.cyclic(4)
Z2Z2 = AbelianGroupType((2, 2))

# exact totals, frozen from the first computation (cross-checked by brute-force
# convolution over all q for n <= 8)
DIRECTED_D3 = {1: Fraction(0), 2: Fraction(0), 3: Fraction(1, 6), 4: Fraction(1, 3),
               5: Fraction(27, 40), 6: Fraction(487, 720), 7: Fraction(21593, 23520),
               8: Fraction(2473, 2240), 9: Fraction(91123, 72576), 10: Fraction(550807, 403200)}
DIRECTED_D45 = {(4, 4): Fraction(5, 18), (4, 5): Fraction(31, 432), (6, 4): Fraction(2209, 3600),
                (6, 5): Fraction(36679, 162000)}
MATCHING_D3 = {2: Fraction(0), 4: Fraction(11, 6), 6: Fraction(4589, 1800)}


def vec_strategy(size, min_n=1, max_n=6):
    return st.lists(st.integers(0, size - 1), min_size=min_n, max_size=max_n).map(tuple)


# --- cosets and R sets --------------------------------------------------------

def test_aff_and_sum_examples():
    aff, s = aff_and_sum((0, 1, 1), Z2)
    assert aff.elements() == {0, 1} and s == 0
    aff, s = aff_and_sum((1, 1, 1, 1, 1), Z3)
    assert aff.elements() == {1} and s == 2
    aff, s = aff_and_sum((0, 2, 2), Z4)
    assert aff.elements() == {0, 2} and s == 0


def test_r_set_examples():
    assert len(r_set((0, 1, 1), 3, Z2)) == 4
    assert len(r_set_symmetric((0, 1, 1), 3, Z2)) == 2
    assert r_set((0, 0, 0), 5, Z3) == [(0, 0, 0)]


@pytest.mark.parametrize("V", [Z2, Z4, Z2Z2], ids=str)
@pytest.mark.parametrize("n", [3, 4, 5])
def test_r_set_sizes(V, n):
    rng = random.Random(n)
    checked = 0
    while checked < 4:
        q = tuple(rng.randrange(V.order) for _ in range(n))
        if aff_and_sum(q, V)[0].elements() != set(range(V.order)):
            continue
        d = rng.choice([2, 3, 4])
        assert len(r_set(q, d, V)) == V.order ** (n - 1) == r_set_size(q, d, V)
        rs = r_set_symmetric(q, d, V)
        assert len(rs) == predicted_symmetric_size(V, n)
        assert Fraction(len(rs)) == Fraction(V.order ** (n - 1), 2 ** rank2(V) * exterior_square_order(V))
        assert r_set_symmetric_size(q, d, V) == len(rs)
        checked += 1


# --- profiles ----------------------------------------------------------------

@given(vec_strategy(2, 1, 6), st.integers(2, 3))
def test_directed_profile_marginals(q, h):
    mq = VectorClass.of(q, Z2).counts
    for P in directed_profiles(q, h, Z2):
        assert P.n == len(q)
        assert all(P.marginal(i) == mq for i in range(h))


@given(vec_strategy(2, 1, 3).map(lambda v: v + v), st.integers(1, 2))
def test_matching_profile_constraints(q, h):
    mq = VectorClass.of(q, Z2).counts
    for P in matching_profiles(q, h, Z2):
        assert P.marginal(0) == mq
        for i in range(1, h + 1):
            J = P.joint(0, i)
            assert all(J.get((a, b), 0) == J.get((b, a), 0) for a in range(2) for b in range(2))
            assert all(J.get((c, c), 0) % 2 == 0 for c in range(2))


# --- exact engines against brute force ---------------------------------------------

def test_directed_matches_permutation_enumeration_576():
    q = (0, 0, 1, 1)
    law = exact_dist_directed(q, 2, Z2)
    brute = oracles.directed_law(q, 2, 2)
    assert dict(law.support and {r: law[r] for r in law.support}) == brute


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("h", [1, 2])
def test_directed_matches_bruteforce_all_q(n, h):
    for q in itertools.product(range(2), repeat=n):
        law = exact_dist_directed(q, h, Z2)
        brute = oracles.directed_law(q, h, 2)
        assert {r: law[r] for r in law.support} == brute


def test_directed_matches_bruteforce_z3():
    for q in [(0, 1, 2), (0, 1, 1, 2), (2, 2, 0, 1)]:
        law = exact_dist_directed(q, 2, Z3)
        assert {r: law[r] for r in law.support} == oracles.directed_law(q, 2, 3)


@pytest.mark.parametrize("h", [1, 2])
def test_matching_matches_enumeration_n4(h):
    for q in itertools.product(range(2), repeat=4):
        law = exact_dist_matching(q, h, Z2)
        assert {r: law[r] for r in law.support} == oracles.matching_law(q, h, 2)


def test_matching_matches_enumeration_n6_z3():
    for q in [(0, 1, 2, 0, 1, 2), (0, 0, 1, 1, 1, 2)]:
        law = exact_dist_matching(q, 1, Z3)
        assert {r: law[r] for r in law.support} == oracles.matching_law(q, 1, 3)


def test_matching_example_three_matchings():
    law = exact_dist_matching((0, 0, 1, 1), 1, Z2)
    assert law[(0, 0, 1, 1)] == Fraction(1, 3)
    assert law[(1, 1, 0, 0)] == Fraction(2, 3)


@pytest.mark.parametrize("n", [2, 5, 8, 10])
def test_directed_sums_to_one(n):
    rng = random.Random(n)
    for _ in range(3):
        q = tuple(rng.randrange(2) for _ in range(n))
        law = directed_class_law(q, 3, Z2)
        total = sum(p * VectorClass(Z2, mr).size for mr, p in law.items())
        assert total == 1


@pytest.mark.parametrize("n", [4, 6, 8])
def test_matching_sums_to_one_and_support(n):
    rng = random.Random(n)
    for _ in range(2):
        q = tuple(rng.randrange(2) for _ in range(n))
        law = exact_dist_matching(q, 3, Z2)
        assert law.total() == 1
        aff, s = aff_and_sum(q, Z2)
        for r in law.support:
            assert sum(r) % 2 == (3 * s) % 2
            assert pair_sum_in_i2(Z2, q, r)


@given(vec_strategy(4, 1, 4), st.integers(2, 3))
def test_directed_support_in_r_set(q, h):
    law = exact_dist_directed(q, h, Z4)
    assert law.total() == 1
    assert law.support <= set(r_set(q, h, Z4))


def test_constant_q_point_mass():
    law = exact_dist_directed((0,) * 6, 3, Z2)
    assert law.support == {(0,) * 6} and law[(0,) * 6] == 1


def test_convolution_agrees_with_profiles():
    for q in [(0, 1, 1, 0, 1), (0, 1, 2, 2, 1, 0), (0, 0, 0, 1, 1, 2)]:
        V = Z2 if max(q) < 2 else Z3
        assert directed_class_law(q, 3, V) == directed_class_law(q, 3, V, method="convolution")


# --- distances and gaps ------------------------------------------------------

def test_d_infinity_examples():
    P = FiniteDistribution({"a": Fraction(1, 2), "b": Fraction(1, 2)})
    assert d_infinity(P, P) == 0
    assert d_infinity(FiniteDistribution({"a": 1}), P) == Fraction(1, 2)


@given(st.lists(st.integers(1, 20), min_size=1, max_size=6),
       st.lists(st.integers(0, 20), min_size=1, max_size=6))
def test_distance_inequalities(a, b):
    P = FiniteDistribution({i: Fraction(x, sum(a)) for i, x in enumerate(a)})
    if sum(b) == 0:
        b = [1] + b[1:]
    Q = FiniteDistribution({i: Fraction(x, sum(b)) for i, x in enumerate(b)})
    support = len(set(P.probs) | set(Q.probs))
    dinf, tv = d_infinity(P, Q), total_variation(P, Q)
    assert dinf <= tv <= support * dinf


def test_total_gap_fixtures():
    for n, val in DIRECTED_D3.items():
        assert total_mixing_gap(n, Z2, 3) == val
    for (n, d), val in DIRECTED_D45.items():
        assert total_mixing_gap(n, Z2, d) == val
    for n, val in MATCHING_D3.items():
        assert total_mixing_gap(n, Z2, 3, "matching") == val


def test_total_gap_bruteforce_n4():
    # sum over all q of d_inf between enumerated law and uniform on R(q, 3)
    total = Fraction(0)
    for q in itertools.product(range(2), repeat=4):
        law = oracles.directed_law(q, 3, 2)
        R = r_set(q, 3, Z2)
        u = Fraction(1, len(R))
        keys = set(law) | set(R)
        total += max(abs(law.get(r, 0) - (u if r in R else 0)) for r in keys)
    assert total == DIRECTED_D3[4]


def test_gap_single_coordinate_is_zero():
    for d in (1, 3, 5):
        assert total_mixing_gap(1, Z3, d) == 0


@pytest.mark.parametrize("n", [4, 6])
def test_gap_non_increasing_in_d(n):
    for q in vector_classes(n, Z2):
        rep = q.representative()
        gaps = [directed_gap(rep, d, Z2) for d in (2, 3, 4, 5)]
        assert all(a >= b for a, b in zip(gaps, gaps[1:]))


def test_matching_gap_zero_for_constant():
    assert matching_gap((1, 1, 1, 1), 3, Z2) == 0


# --- typicality ------------------------------------------------------------------

def test_alpha_typical_examples():
    assert is_alpha_typical((0, 1) * 50, 0.6, Z2)
    assert not is_alpha_typical((0,) * 1000, 0.6, Z2)
    rng = np.random.default_rng(0)
    hits = sum(is_alpha_typical(tuple(rng.integers(0, 3, 10_000)), 0.55, Z3) for _ in range(200))
    assert hits / 200 > 0.99


def test_alpha_out_of_range_warns():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert is_alpha_typical((0, 1, 0, 1), 0.9, Z2)
    assert caught


# --- lift ----------------------------------------------------------------------

def test_lift_zero_target():
    q = (0, 1, 0, 1)
    A = symmetric_even_diag_lift(q, (0, 0, 0, 0), Z2)
    assert verify_lift(A, q, (0, 0, 0, 0), Z2)


def test_lift_preconditions():
    with pytest.raises(LiftPreconditionError) as exc:
        symmetric_even_diag_lift((0, 1, 1), (0, 0, 0), Z2)
    assert exc.value.reason == "size"
    with pytest.raises(LiftPreconditionError) as exc:
        symmetric_even_diag_lift((0, 2, 2, 0, 2, 0, 0, 2), (0,) * 8, Z4)
    assert exc.value.reason == "generation"
    with pytest.raises(LiftPreconditionError) as exc:
        symmetric_even_diag_lift((0, 1, 0, 0), (0, 1, 0, 0), Z2)
    assert exc.value.reason == "i2"


@pytest.mark.parametrize("V", [Z2, Z4, Z2Z2, Z3], ids=str)
def test_lift_characterization_random(V):
    rng = random.Random(V.order)
    n = 2 * V.order + 2
    for _ in range(60):
        while True:
            q = tuple(rng.randrange(V.order) for _ in range(n))
            if aff_and_sum(q, V)[0].subgroup == frozenset(range(V.order)) or _generates(V, q):
                break
        r = tuple(rng.randrange(V.order) for _ in range(n))
        if pair_sum_in_i2(V, q, r):
            A = symmetric_even_diag_lift(q, r, V)
            assert verify_lift(A, q, r, V)
        else:
            with pytest.raises(LiftPreconditionError):
                symmetric_even_diag_lift(q, r, V)


def _generates(V, q):
    from regsandpile.mixing import _closure
    return len(_closure(V, q)) == V.order
