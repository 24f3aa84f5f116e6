"""Seeded samplers for random regular multigraphs and their Laplacians.

Randomness comes from numpy's PCG64.  A :class:`Seed` is a 64-bit value plus
a stream index; the i-th permutation or matching of a sample draws from its
own child stream ``SeedSequence(value, spawn_key=(stream, i))``, so samples
are reproducible bit-for-bit and independent of how work is scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np
from scipy.sparse.csgraph import connected_components

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Seed:
    value: int
    stream: int = 0

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) & _MASK64)

    def rng(self, index: int = 0) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.value, spawn_key=(self.stream, index))
        return np.random.Generator(np.random.PCG64(ss))

    def to_record(self) -> dict:
        return {"value": self.value, "stream": self.stream}


SeedLike = Union[Seed, int]


def as_seed(seed: SeedLike) -> Seed:
    return seed if isinstance(seed, Seed) else Seed(int(seed))


class _Multigraph:
    directed: bool

    def __init__(self, multiplicity):
        m = np.array(multiplicity, dtype=np.int64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("multiplicity must be a square grid")
        if (m < 0).any():
            raise ValueError("multiplicities must be nonnegative")
        m.setflags(write=False)
        self.multiplicity = m

    @property
    def n(self) -> int:
        return self.multiplicity.shape[0]

    def __eq__(self, other):
        return (type(self) is type(other)
                and np.array_equal(self.multiplicity, other.multiplicity))

    def __hash__(self):
        return hash((type(self).__name__, self.multiplicity.tobytes()))

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, edges={self.edge_count()})"

    def edges(self) -> list[tuple[int, int, int]]:
        m = self.multiplicity
        out = []
        for i, j in zip(*np.nonzero(m)):
            if self.directed or i <= j:
                out.append((int(i), int(j), int(m[i, j])))
        return out

    def edge_count(self) -> int:
        total = int(self.multiplicity.sum())
        return total if self.directed else total // 2

    def to_record(self) -> dict:
        return {"n": self.n, "directed": self.directed,
                "edges": [list(e) for e in self.edges()]}


class DirectedMultigraph(_Multigraph):
    """multiplicity[i, j] = number of directed edges i -> j (loops allowed)."""

    directed = True

    def out_degrees(self) -> np.ndarray:
        return self.multiplicity.sum(axis=1)

    def in_degrees(self) -> np.ndarray:
        return self.multiplicity.sum(axis=0)


class UndirectedMultigraph(_Multigraph):
    """Symmetric multiplicity grid with zero diagonal."""

    directed = False

    def __init__(self, multiplicity):
        super().__init__(multiplicity)
        m = self.multiplicity
        if not np.array_equal(m, m.T):
            raise ValueError("undirected multiplicity must be symmetric")
        if np.diagonal(m).any():
            raise ValueError("loops are not allowed in undirected graphs")

    def degrees(self) -> np.ndarray:
        return self.multiplicity.sum(axis=1)


Multigraph = Union[DirectedMultigraph, UndirectedMultigraph]


def from_record(record: dict) -> Multigraph:
    n = record["n"]
    m = np.zeros((n, n), dtype=np.int64)
    for i, j, k in record["edges"]:
        m[i, j] += k
        if not record["directed"] and i != j:
            m[j, i] += k
    return DirectedMultigraph(m) if record["directed"] else UndirectedMultigraph(m)


def from_edges(n: int, edges: Iterable[tuple], directed: bool = False) -> Multigraph:
    """Build a multigraph from (i, j) or (i, j, multiplicity) tuples."""
    m = np.zeros((n, n), dtype=np.int64)
    for e in edges:
        i, j = e[0], e[1]
        k = e[2] if len(e) > 2 else 1
        m[i, j] += k
        if not directed:
            m[j, i] += k
    return DirectedMultigraph(m) if directed else UndirectedMultigraph(m)


def cycle_graph(n: int) -> UndirectedMultigraph:
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> UndirectedMultigraph:
    return from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


# ---------------------------------------------------------------------------
# samplers

def random_permutations(n: int, d: int, seed: SeedLike) -> list[np.ndarray]:
    seed = as_seed(seed)
    return [seed.rng(i).permutation(n) for i in range(d)]


def random_matchings(n: int, d: int, seed: SeedLike) -> list[np.ndarray]:
    """d uniform perfect matchings, each as an (n/2, 2) array of pairs."""
    if n % 2:
        raise ValueError(f"perfect matchings need an even vertex count, got n={n}")
    seed = as_seed(seed)
    return [seed.rng(i).permutation(n).reshape(-1, 2) for i in range(d)]


def sample_directed_regular(n: int, d: int, seed: SeedLike) -> DirectedMultigraph:
    """Union of the graphs of d independent uniform permutations."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    m = np.zeros((n, n), dtype=np.int64)
    rows = np.arange(n)
    for perm in random_permutations(n, d, seed):
        np.add.at(m, (rows, perm), 1)
    return DirectedMultigraph(m)


def sample_undirected_matching(n: int, d: int, seed: SeedLike) -> UndirectedMultigraph:
    """Union of d independent uniform perfect matchings."""
    if n < 2 or d < 1:
        raise ValueError("need n >= 2 and d >= 1")
    m = np.zeros((n, n), dtype=np.int64)
    for pairs in random_matchings(n, d, seed):
        np.add.at(m, (pairs[:, 0], pairs[:, 1]), 1)
        np.add.at(m, (pairs[:, 1], pairs[:, 0]), 1)
    return UndirectedMultigraph(m)


def sample_directed_er(n: int, rho: float, seed: SeedLike) -> DirectedMultigraph:
    """Each ordered pair i != j carries an edge independently with probability rho."""
    if not 0 <= rho <= 1:
        raise ValueError("rho must lie in [0, 1]")
    m = (as_seed(seed).rng(0).random((n, n)) < rho).astype(np.int64)
    np.fill_diagonal(m, 0)
    return DirectedMultigraph(m)


def sample_graph(model: str, n: int, seed: SeedLike, d: int | None = None,
                 rho: float | None = None) -> Multigraph:
    if model == "directed-regular":
        return sample_directed_regular(n, d, seed)
    if model == "matching":
        return sample_undirected_matching(n, d, seed)
    if model == "directed-er":
        return sample_directed_er(n, rho, seed)
    raise ValueError(f"unknown model {model!r}")


# ---------------------------------------------------------------------------
# matrices and connectivity

def adjacency(g: Multigraph) -> np.ndarray:
    return np.array(g.multiplicity)


def laplacian(g: Multigraph) -> np.ndarray:
    """d(i,j) off the diagonal, d(i,i) - d_out(i) on it; rows sum to zero."""
    m = np.array(g.multiplicity)
    return m - np.diag(m.sum(axis=1))


def reduced_laplacian(g: Multigraph) -> np.ndarray:
    """Laplacian with the row and column of the last vertex deleted."""
    return laplacian(g)[:-1, :-1]


def component_labels(g: Multigraph) -> tuple[int, np.ndarray]:
    return connected_components(g.multiplicity, directed=g.directed, connection="weak")


def is_connected(g: Multigraph) -> bool:
    return component_labels(g)[0] == 1


def is_strongly_connected(g: Multigraph) -> bool:
    count, _ = connected_components(g.multiplicity, directed=True, connection="strong")
    return count == 1
