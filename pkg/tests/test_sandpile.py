import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from regsandpile.abelian import AbelianGroupType, PGroupType
from regsandpile.graphs import (Seed, adjacency, complete_graph, cycle_graph, from_edges,
                                reduced_laplacian, sample_directed_regular,
                                sample_undirected_matching)
from regsandpile.linalg import corank_mod_p, determinant
from regsandpile.sandpile import (DisconnectedGraphError, full_type_from_sylows,
                                  graph_is_connected, group_rank_profile, log_torsion,
                                  prime_divisors, sandpile_group, sylow_of_sandpile,
                                  total_sandpile_group)


def test_known_groups():
    assert sandpile_group(complete_graph(4)).group == AbelianGroupType((4, 4))
    for n in range(3, 13):
        assert sandpile_group(cycle_graph(n)).group == AbelianGroupType.cyclic(n)
    two_edges = from_edges(4, [(0, 1), (2, 3)])
    res = sandpile_group(two_edges)
    assert res.group.free_rank == 1 and not res.connected


def test_sylow_examples():
    K4, C6 = complete_graph(4), cycle_graph(6)
    assert sylow_of_sandpile(K4, 2, 12) == PGroupType(2, (2, 2))
    assert sylow_of_sandpile(K4, 3, 12) == PGroupType(3, ())
    assert sylow_of_sandpile(C6, 2) == PGroupType(2, (1,))
    assert sylow_of_sandpile(C6, 3) == PGroupType(3, (1,))


def test_sylow_truncation_flag():
    res = sylow_of_sandpile(cycle_graph(64), 2, k=3, with_flag=True)
    assert res.sylow == PGroupType(2, (3,)) and res.truncated
    assert not sylow_of_sandpile(cycle_graph(6), 2, with_flag=True).truncated


def test_sylow_of_disconnected_raises():
    with pytest.raises(DisconnectedGraphError):
        sylow_of_sandpile(from_edges(4, [(0, 1), (2, 3)]), 2)


def test_total_sandpile_group_examples():
    two_cycle = from_edges(2, [(0, 1), (1, 0)], directed=True)
    assert total_sandpile_group(two_cycle) == AbelianGroupType()
    assert total_sandpile_group(from_edges(2, [(0, 1)], directed=True)) == AbelianGroupType()


@given(st.integers(2, 12), st.integers(1, 4), st.integers(0, 2 ** 32))
def test_total_group_equals_sandpile_for_eulerian(n, d, seed):
    g = sample_directed_regular(n, d, seed)
    if graph_is_connected(g):
        assert total_sandpile_group(g) == sandpile_group(g).group


def test_log_torsion_examples():
    assert math.isclose(log_torsion(complete_graph(4)), math.log(16))
    assert log_torsion(from_edges(4, [(0, 1), (1, 2), (1, 3)])) == 0
    assert math.isclose(log_torsion(cycle_graph(5)), math.log(5))


def test_rank_profile_examples():
    assert group_rank_profile(complete_graph(4), [2]) == {2: 2}
    assert group_rank_profile(cycle_graph(5), [2]) == {2: 0}


@given(st.integers(1, 3).map(lambda k: 2 * k), st.integers(1, 3), st.integers(0, 2 ** 32))
def test_matrix_tree_undirected(n, d, seed):
    g = sample_undirected_matching(n, d, seed)
    edges = [(u, v) for u, v, m in g.edges() for _ in range(m)]
    trees = oracles.spanning_tree_count(n, edges)
    assert abs(determinant(reduced_laplacian(g))) == trees
    if trees:
        assert sandpile_group(g).group.order == trees


@given(st.integers(1, 6), st.integers(1, 3), st.integers(0, 2 ** 32))
def test_matrix_tree_directed(n, d, seed):
    g = sample_directed_regular(n, d, seed)
    arbs = oracles.arborescence_count(adjacency(g).tolist(), n - 1)
    assert abs(determinant(reduced_laplacian(g))) == arbs


@given(st.integers(2, 15).map(lambda k: 2 * k), st.sampled_from([3, 4, 5]), st.integers(0, 2 ** 32))
def test_sandpile_invariants(n, d, seed):
    g = sample_undirected_matching(n, d, seed)
    if not graph_is_connected(g):
        return
    res = sandpile_group(g)
    det = abs(determinant(reduced_laplacian(g)))
    assert res.group.free_rank == 0 and res.group.order == det
    assert math.isclose(math.exp(log_torsion(g)), det, rel_tol=1e-9)
    assert log_torsion(g) < n * math.log(math.sqrt(2 * d * d))
    # Sylow recombination
    sylows = [sylow_of_sandpile(g, p, k=64) for p in prime_divisors(det)]
    assert AbelianGroupType.from_sylows(sylows) == res.group
    assert full_type_from_sylows(g) == res.group


@given(st.integers(2, 25).map(lambda k: 2 * k), st.sampled_from([2, 4, 6]), st.integers(0, 2 ** 32))
def test_even_d_odd_two_rank(n, d, seed):
    g = sample_undirected_matching(n, d, seed)
    assert corank_mod_p(reduced_laplacian(g), 2) % 2 == 1


def test_prime_divisors():
    assert prime_divisors(2 ** 5 * 3 * 1_000_003 ** 2) == [2, 3, 1_000_003]
    assert prime_divisors(1) == []


def test_log_torsion_large_graph():
    g = sample_undirected_matching(400, 3, Seed(1))
    val = log_torsion(g) / 400
    assert 0.7 < val < math.log(math.sqrt(18))
    assert isinstance(val, float) and np.isfinite(val)
