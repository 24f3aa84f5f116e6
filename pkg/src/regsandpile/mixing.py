"""Exact small-case laws of A q and C q acting on V^n.

A is a sum of h uniform permutation matrices (directed model) or of h
uniform perfect-matching matrices (undirected model) and q is a fixed vector
in V^n.  Everything is exact rational arithmetic.

Vectors are tuples of element indices of V (see :func:`abelian.element_index`).
Both models commute with relabelling the coordinates, so the law of A q only
depends on r through its multiplicity vector m_r (directed) or through the
joint table m_{q,r} of (q_j, r_j) pairs (matching).  The engines below work
with these classes and expand to vectors only on request.
"""

from __future__ import annotations

import itertools
import warnings
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
from sympy.utilities.iterables import multiset_permutations

from .abelian import (AbelianGroupType, BudgetExceeded, GroupElement, TensorSquare,
                      element_index, exterior_square_order, group_tables, rank2)

DEFAULT_BUDGET = 2_000_000


# ---------------------------------------------------------------------------
# vectors and classes

def as_vector(q, V: AbelianGroupType | None = None) -> tuple[AbelianGroupType, tuple[int, ...]]:
    """Normalize q (GroupElements, coordinate tuples or indices) to element indices."""
    q = list(q)
    if V is None:
        if not q or not isinstance(q[0], GroupElement):
            raise ValueError("pass V explicitly unless q consists of GroupElements")
        V = q[0].group
    out = []
    for x in q:
        if isinstance(x, GroupElement):
            if x.group != V:
                raise ValueError("elements from different groups")
            out.append(x.index)
        elif isinstance(x, (tuple, list)):
            out.append(element_index(V, x))
        else:
            out.append(int(x) % V.order)
    return V, tuple(out)


def counts_of(vec: Sequence[int], size: int) -> tuple[int, ...]:
    c = [0] * size
    for x in vec:
        c[x] += 1
    return tuple(c)


def compositions(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of n into the given number of parts."""
    if parts == 0:
        if n == 0:
            yield ()
        return
    if parts == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, parts - 1):
            yield (first,) + rest


def multinomial(counts: Iterable[int]) -> int:
    counts = list(counts)
    out = factorial(sum(counts))
    for c in counts:
        out //= factorial(c)
    return out


@dataclass(frozen=True)
class VectorClass:
    """The S_n-orbit of a vector in V^n, recorded by its multiplicities m_q."""

    group: AbelianGroupType
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != self.group.order or min(self.counts, default=0) < 0:
            raise ValueError("counts must be one nonnegative integer per element of V")

    @classmethod
    def of(cls, q, V: AbelianGroupType | None = None) -> "VectorClass":
        V, vec = as_vector(q, V)
        return cls(V, counts_of(vec, V.order))

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def size(self) -> int:
        """Number of vectors in the class, n! / prod m_q(c)!."""
        return multinomial(self.counts)

    def representative(self) -> tuple[int, ...]:
        return tuple(c for c, m in enumerate(self.counts) for _ in range(m))

    def vectors(self) -> Iterator[tuple[int, ...]]:
        for v in multiset_permutations(list(self.representative())):
            yield tuple(v)


def vector_classes(n: int, V: AbelianGroupType) -> Iterator[VectorClass]:
    for c in compositions(n, V.order):
        yield VectorClass(V, c)


# ---------------------------------------------------------------------------
# cosets, R(q, d) and R^S(q, d)

def _closure(V: AbelianGroupType, gens: Iterable[int]) -> frozenset[int]:
    add = group_tables(V)[1]
    elems = {0}
    frontier = [0]
    gens = [g for g in set(gens) if g]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(add[x, g])
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(elems)


@dataclass(frozen=True)
class Coset:
    group: AbelianGroupType
    offset: int
    subgroup: frozenset

    def elements(self) -> frozenset[int]:
        add = group_tables(self.group)[1]
        return frozenset(int(add[self.offset, h]) for h in self.subgroup)

    def __contains__(self, x: int) -> bool:
        return x in self.elements()

    def scaled(self, d: int) -> "Coset":
        """d . C = {g_1 + ... + g_d : g_i in C}."""
        return Coset(self.group, _scale(self.group, self.offset, d), self.subgroup)


def _scale(V: AbelianGroupType, x: int, k: int) -> int:
    add = group_tables(V)[1]
    acc = 0
    for _ in range(k % max(V.exponent, 1)):
        acc = int(add[acc, x])
    return acc


def vector_sum(V: AbelianGroupType, vec: Iterable[int]) -> int:
    add = group_tables(V)[1]
    acc = 0
    for x in vec:
        acc = int(add[acc, x])
    return acc


def _class_sum(V: AbelianGroupType, counts: Sequence[int]) -> int:
    acc = 0
    add = group_tables(V)[1]
    for c, m in enumerate(counts):
        if m:
            acc = int(add[acc, _scale(V, c, m)])
    return acc


def aff_and_sum(q, V: AbelianGroupType | None = None) -> tuple[Coset, int]:
    """(Aff_q, s(q)): the smallest coset containing every q_i, and the sum of q."""
    V, vec = as_vector(q, V)
    if not vec:
        raise ValueError("q must be nonempty")
    neg = group_tables(V)[2]
    add = group_tables(V)[1]
    last = vec[-1]
    sub = _closure(V, (int(add[x, neg[last]]) for x in vec))
    return Coset(V, last, sub), vector_sum(V, vec)


def r_set(q, d: int, V: AbelianGroupType | None = None, budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    """R(q, d) = {r in (d Aff_q)^n : s(r) = d s(q)}, fully enumerated."""
    V, vec = as_vector(q, V)
    aff, s = aff_and_sum(vec, V)
    allowed = sorted(aff.scaled(d).elements())
    n = len(vec)
    if len(allowed) ** max(n - 1, 0) > budget:
        raise BudgetExceeded(f"|R(q,d)| = {len(allowed)}^{n - 1} exceeds budget {budget}")
    target = _scale(V, s, d)
    neg = group_tables(V)[2]
    add = group_tables(V)[1]
    out = []
    for head in itertools.product(allowed, repeat=n - 1):
        last = int(add[target, neg[vector_sum(V, head)]])
        out.append(head + (last,))
    return out


def pair_sum_in_i2(V: AbelianGroupType, q: Sequence[int], r: Sequence[int]) -> bool:
    T = TensorSquare(V)
    coords = group_tables(V)[0]
    return T.in_i2(T.pair_sum([tuple(coords[x]) for x in q], [tuple(coords[x]) for x in r]))


def r_set_symmetric(q, d: int, V: AbelianGroupType | None = None,
                    budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    """R^S(q, d): members r of R(q, d) with <q (x) r> in I_2."""
    V, vec = as_vector(q, V)
    return [r for r in r_set(vec, d, V, budget) if pair_sum_in_i2(V, vec, r)]


def r_set_size(q, d: int, V: AbelianGroupType | None = None) -> int:
    """|R(q, d)| = |V_0|^(n-1) where Aff_q = q_n + V_0."""
    V, vec = as_vector(q, V)
    aff, _ = aff_and_sum(vec, V)
    return len(aff.subgroup) ** (len(vec) - 1)


def predicted_symmetric_size(V: AbelianGroupType, n: int) -> Fraction:
    """|V|^(n-1) / (2^rank2(V) |wedge^2 V|), valid when Aff_q = V."""
    return Fraction(V.order ** (n - 1), 2 ** rank2(V) * exterior_square_order(V))


# ---------------------------------------------------------------------------
# contingency tables over V^h with prescribed coordinate margins

def _tables(size: int, margins: tuple[tuple[int, ...], ...]) -> Iterator[tuple[int, ...]]:
    """Nonnegative integer tables on V^h (lexicographic cells) with the given margins.

    Depth-first over cells; a cell is forced when it is the last one carrying
    some (coordinate, value) pair, and bounded by the remaining margins.
    """
    h = len(margins)
    total = sum(margins[0]) if h else 0
    if any(sum(m) != total for m in margins):
        return
    cells = list(itertools.product(range(size), repeat=h))
    ncells = len(cells)
    last_for = [[] for _ in range(ncells)]
    seen = set()
    for pos in range(ncells - 1, -1, -1):
        for i, c in enumerate(cells[pos]):
            if (i, c) not in seen:
                seen.add((i, c))
                last_for[pos].append((i, c))
    rem = [list(m) for m in margins]
    out = [0] * ncells

    def rec(pos: int, left: int):
        if left == 0:
            yield tuple(out)
            return
        if pos == ncells:
            return
        t = cells[pos]
        cap = min(rem[i][t[i]] for i in range(h))
        forced = {rem[i][c] for i, c in last_for[pos]}
        if len(forced) > 1:
            return
        if forced:
            v = forced.pop()
            if v > cap:
                return
            choices = (v,)
        else:
            choices = range(cap, -1, -1)
        for v in choices:
            out[pos] = v
            for i in range(h):
                rem[i][t[i]] -= v
            yield from rec(pos + 1, left - v)
            for i in range(h):
                rem[i][t[i]] += v
        out[pos] = 0

    if h == 0:
        yield ()
        return
    yield from rec(0, total)


@lru_cache(maxsize=None)
def _cell_sums(V: AbelianGroupType, h: int) -> tuple[int, ...]:
    return tuple(vector_sum(V, t) for t in itertools.product(range(V.order), repeat=h))


@lru_cache(maxsize=4096)
def _bucketed_tables(V: AbelianGroupType, margins: tuple[tuple[int, ...], ...]) -> dict:
    """Sum-marginal m(tau_Sigma = .) -> sum over tables of N!/prod m(t)!."""
    size = V.order
    sums = _cell_sums(V, len(margins))
    buckets: dict[tuple[int, ...], int] = defaultdict(int)
    for table in _tables(size, margins):
        key = [0] * size
        for cell, m in enumerate(table):
            if m:
                key[sums[cell]] += m
        buckets[tuple(key)] += multinomial(table)
    return dict(buckets)


# ---------------------------------------------------------------------------
# profiles

@dataclass(frozen=True)
class Profile:
    """Counts m(t) of the column types t = (tau_1..tau_h) or (tau_0, tau_1..tau_h)."""

    group: AbelianGroupType
    arity: int
    counts: tuple[tuple[tuple[int, ...], int], ...]
    matching: bool = False

    @property
    def n(self) -> int:
        return sum(m for _, m in self.counts)

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return dict(self.counts)

    def marginal(self, coordinate: int) -> tuple[int, ...]:
        out = [0] * self.group.order
        for t, m in self.counts:
            out[t[coordinate]] += m
        return tuple(out)

    def sum_marginal(self) -> tuple[int, ...]:
        out = [0] * self.group.order
        start = 1 if self.matching else 0
        for t, m in self.counts:
            out[vector_sum(self.group, t[start:])] += m
        return tuple(out)

    def joint(self, i: int, j: int) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = defaultdict(int)
        for t, m in self.counts:
            out[t[i], t[j]] += m
        return dict(out)


def _profile(V, h, cells, table, matching=False) -> Profile:
    return Profile(V, h, tuple((t, m) for t, m in zip(cells, table) if m), matching)


def directed_profiles(q, h: int, V: AbelianGroupType | None = None) -> Iterator[Profile]:
    """Profiles over V^h whose every coordinate marginal equals m_q."""
    V, vec = as_vector(q, V)
    mq = counts_of(vec, V.order)
    cells = list(itertools.product(range(V.order), repeat=h))
    for table in _tables(V.order, (mq,) * h):
        yield _profile(V, h, cells, table)


def _symmetric_splits(mq: tuple[int, ...]) -> list[tuple[tuple[int, ...], ...]]:
    """Symmetric matrices with row sums mq and even diagonal.

    Upper-triangular entries are filled row by row; row a is complete once
    (a, size-1) is placed, at which point its budget must be used up.
    """
    size = len(mq)
    pairs = [(a, b) for a in range(size) for b in range(a, size)]
    M = [[0] * size for _ in range(size)]
    rem = list(mq)
    out = []

    def rec(k):
        if k == len(pairs):
            out.append(tuple(tuple(row) for row in M))
            return
        a, b = pairs[k]
        if a == b:
            values = range(rem[a] - rem[a] % 2, -1, -2)
        else:
            values = range(min(rem[a], rem[b]), -1, -1)
        for v in values:
            M[a][b] = M[b][a] = v
            rem[a] -= v
            if a != b:
                rem[b] -= v
            if b < size - 1 or rem[a] == 0:
                rec(k + 1)
            rem[a] += v
            if a != b:
                rem[b] += v
        M[a][b] = M[b][a] = 0

    rec(0)
    return out


def _matching_weight(M: tuple[tuple[int, ...], ...]) -> int:
    """Number of perfect matchings realizing the pair pattern M.

    A class of size 2k is matched internally in (2k)!/(2^k k!) ways; two
    classes of common size k are matched across in k! ways.
    """
    w = 1
    for a, row in enumerate(M):
        k = row[a] // 2
        w *= factorial(2 * k) // (2 ** k * factorial(k))
        for b in range(a + 1, len(row)):
            w *= factorial(row[b])
    return w


def matching_profiles(q, h: int, V: AbelianGroupType | None = None) -> Iterator[Profile]:
    """Profiles over V^(1+h) satisfying the matching constraints.

    Coordinate 0 is q itself.  For each i the pair table m(tau_0, tau_i) is
    symmetric with even diagonal and row sums m_q.
    """
    V, vec = as_vector(q, V)
    size = V.order
    mq = counts_of(vec, size)
    splits = _symmetric_splits(mq)
    slice_cells = list(itertools.product(range(size), repeat=h))
    for Ms in itertools.product(splits, repeat=h):
        per_slice = []
        for a in range(size):
            margins = tuple(M[a] for M in Ms)
            per_slice.append(list(_tables(size, margins)))
        for combo in itertools.product(*per_slice):
            counts = []
            for a, table in enumerate(combo):
                counts.extend(((a,) + t, m) for t, m in zip(slice_cells, table) if m)
            yield Profile(V, h, tuple(counts), True)


# ---------------------------------------------------------------------------
# distributions

@dataclass(frozen=True)
class FiniteDistribution:
    """Probabilities of finitely many outcomes; absent outcomes have mass 0."""

    probs: Mapping

    def __getitem__(self, outcome):
        return self.probs.get(outcome, 0)

    @property
    def support(self) -> set:
        return {k for k, v in self.probs.items() if v}

    def total(self):
        return sum(self.probs.values())

    def items(self):
        return self.probs.items()

    @classmethod
    def uniform(cls, outcomes: Iterable) -> "FiniteDistribution":
        outcomes = list(outcomes)
        p = Fraction(1, len(outcomes))
        return cls({o: p for o in outcomes})

    @classmethod
    def from_samples(cls, samples: Iterable) -> "FiniteDistribution":
        counts: dict = defaultdict(int)
        total = 0
        for s in samples:
            counts[s] += 1
            total += 1
        return cls({k: Fraction(v, total) for k, v in counts.items()})


def d_infinity(P: FiniteDistribution, Q: FiniteDistribution):
    keys = set(P.probs) | set(Q.probs)
    return max((abs(P[k] - Q[k]) for k in keys), default=0)


def total_variation(P: FiniteDistribution, Q: FiniteDistribution):
    keys = set(P.probs) | set(Q.probs)
    return sum((abs(P[k] - Q[k]) for k in keys), Fraction(0)) / 2


# --- directed model -----------------------------------------------------------

def _check_h(h: int):
    if h < 1:
        raise ValueError("h must be at least 1")


def directed_class_law(q, h: int, V: AbelianGroupType | None = None,
                       method: str = "profile") -> dict[tuple[int, ...], Fraction]:
    """m_r -> P(A q = r) for any single r with multiplicities m_r.

    ``profile`` sums the factorial formula over profiles with coordinate
    marginals m_q; ``convolution`` adds one uniform rearrangement of q at a
    time, tracking the multiplicity vector of the partial sum.
    """
    _check_h(h)
    V, vec = as_vector(q, V)
    n, size = len(vec), V.order
    mq = counts_of(vec, size)
    if method == "profile":
        buckets = _bucketed_tables(V, (mq,) * h)
        denom = factorial(n) * multinomial(mq) ** h
        return {mr: Fraction(prod(factorial(c) for c in mr) * w, denom)
                for mr, w in buckets.items()}
    if method == "convolution":
        classes = _convolve_directed(V, mq, h)
        return {mr: p / multinomial(mr) for mr, p in classes.items()}
    raise ValueError(f"unknown method {method!r}")


def _convolve_directed(V: AbelianGroupType, mq: tuple[int, ...], h: int) -> dict:
    size = V.order
    n = sum(mq)
    add = group_tables(V)[1]
    state = {tuple(n if c == 0 else 0 for c in range(size)): Fraction(1)}
    fq = prod(factorial(c) for c in mq)
    for _ in range(h):
        nxt: dict = defaultdict(Fraction)
        for ms, p in state.items():
            scale = Fraction(prod(factorial(c) for c in ms) * fq, factorial(n))
            for table in _tables(size, (ms, mq)):
                out = [0] * size
                denom = 1
                for cell, m in enumerate(table):
                    if m:
                        a, b = divmod(cell, size)
                        out[int(add[a, b])] += m
                        denom *= factorial(m)
                nxt[tuple(out)] += p * scale / denom
        state = dict(nxt)
    return state


def exact_dist_directed(q, h: int, V: AbelianGroupType | None = None,
                        method: str = "profile") -> FiniteDistribution:
    """Exact law of P_1 q + ... + P_h q over vectors r."""
    V, vec = as_vector(q, V)
    law = directed_class_law(vec, h, V, method)
    probs = {}
    for mr, p in law.items():
        for r in VectorClass(V, mr).vectors():
            probs[r] = p
    return FiniteDistribution(probs)


# --- matching model -----------------------------------------------------------

def _perfect_matchings(n: int) -> int:
    return factorial(n) // (2 ** (n // 2) * factorial(n // 2))


def matching_class_law(q, h: int, V: AbelianGroupType | None = None) -> dict:
    """Joint table m_{q,r} (flattened |V| x |V|) -> P(C q = r) for a single such r."""
    _check_h(h)
    V, vec = as_vector(q, V)
    n, size = len(vec), V.order
    if n % 2:
        raise ValueError(f"the matching model needs even n, got n={n}")
    mq = counts_of(vec, size)
    splits = _symmetric_splits(mq)
    weights = {M: _matching_weight(M) for M in splits}
    acc: dict = defaultdict(int)
    for Ms in itertools.product(splits, repeat=h):
        w = prod(weights[M] for M in Ms)
        slices = [_bucketed_tables(V, tuple(M[a] for M in Ms)) for a in range(size)]
        for keys in itertools.product(*(s.items() for s in slices)):
            term = w
            table = []
            for key, count in keys:
                term *= count * prod(factorial(c) for c in key)
                table.extend(key)
            acc[tuple(table)] += term
    denom = prod(factorial(c) for c in mq) * _perfect_matchings(n) ** h
    return {T: Fraction(v, denom) for T, v in acc.items()}


def _joint_vectors(V: AbelianGroupType, vec: Sequence[int], T: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All r whose joint table with q equals T."""
    size = V.order
    positions = [[j for j, x in enumerate(vec) if x == a] for a in range(size)]
    per_value = []
    for a in range(size):
        row = T[a * size:(a + 1) * size]
        items = [b for b in range(size) for _ in range(row[b])]
        per_value.append([tuple(p) for p in multiset_permutations(items)] if items else [()])
    for combo in itertools.product(*per_value):
        r = [0] * len(vec)
        for a, assignment in enumerate(combo):
            for j, b in zip(positions[a], assignment):
                r[j] = b
        yield tuple(r)


def exact_dist_matching(q, h: int, V: AbelianGroupType | None = None) -> FiniteDistribution:
    """Exact law of M_1 q + ... + M_h q over vectors r (M_i uniform perfect matchings)."""
    V, vec = as_vector(q, V)
    law = matching_class_law(vec, h, V)
    probs = {}
    for T, p in law.items():
        for r in _joint_vectors(V, vec, T):
            probs[r] = p
    return FiniteDistribution(probs)


# ---------------------------------------------------------------------------
# mixing gaps

def _joint_tables(mq: Sequence[int], size: int) -> Iterator[tuple[int, ...]]:
    for rows in itertools.product(*(compositions(m, size) for m in mq)):
        yield tuple(x for row in rows for x in row)


def directed_gap(q, d: int, V: AbelianGroupType | None = None, method: str = "profile") -> Fraction:
    """d_inf(A q, U_{q,d}) for the sum A of d uniform permutation matrices."""
    V, vec = as_vector(q, V)
    n, size = len(vec), V.order
    aff, s = aff_and_sum(vec, V)
    allowed = aff.scaled(d).elements()
    target = _scale(V, s, d)
    uniform = Fraction(1, r_set_size(vec, d, V))
    law = directed_class_law(vec, d, V, method)
    gap = Fraction(0)
    for mr in compositions(n, size):
        in_r = (all(c in allowed for c, m in enumerate(mr) if m)
                and _class_sum(V, mr) == target)
        diff = abs(law.get(mr, 0) - (uniform if in_r else 0))
        gap = max(gap, diff)
    return gap


def _symmetric_members(V: AbelianGroupType, vec: Sequence[int], d: int) -> tuple[set, int]:
    """Joint tables T of (q, r) with r in R^S(q, d), and |R^S(q, d)|."""
    size = V.order
    mq = counts_of(vec, size)
    aff, s = aff_and_sum(vec, V)
    allowed = aff.scaled(d).elements()
    target = _scale(V, s, d)
    T2 = TensorSquare(V)
    coords = group_tables(V)[0]
    members, total = set(), 0
    for T in _joint_tables(mq, size):
        if any(T[k] and (k % size) not in allowed for k in range(size * size)):
            continue
        col_counts = [sum(T[a * size + b] for a in range(size)) for b in range(size)]
        if _class_sum(V, col_counts) != target:
            continue
        x = [0] * (T2.k * T2.k)
        for k, m in enumerate(T):
            if m:
                e = T2.elementary(tuple(coords[k // size]), tuple(coords[k % size]))
                x = [u + m * v for u, v in zip(x, e)]
        if T2.in_i2(x):
            members.add(T)
            total += prod(multinomial(T[a * size:(a + 1) * size]) for a in range(size))
    return members, total


def matching_gap(q, d: int, V: AbelianGroupType | None = None) -> Fraction:
    """d_inf(C q, U^S_{q,d}) for the sum C of d uniform perfect matchings."""
    V, vec = as_vector(q, V)
    members, rs_size = _symmetric_members(V, vec, d)
    law = matching_class_law(vec, d, V)
    uniform = Fraction(1, rs_size)
    gap = Fraction(0)
    for T in _joint_tables(counts_of(vec, V.order), V.order):
        gap = max(gap, abs(law.get(T, 0) - (uniform if T in members else 0)))
    return gap


def r_set_symmetric_size(q, d: int, V: AbelianGroupType | None = None) -> int:
    """|R^S(q, d)| counted class by class (no vector enumeration)."""
    V, vec = as_vector(q, V)
    return _symmetric_members(V, vec, d)[1]


@dataclass(frozen=True)
class ClassGap:
    vector_class: VectorClass
    gap: Fraction

    @property
    def weighted(self) -> Fraction:
        return self.vector_class.size * self.gap


def class_gaps(n: int, V: AbelianGroupType, d: int, model: str = "directed",
               method: str = "profile") -> list[ClassGap]:
    if model == "matching" and n % 2:
        raise ValueError(f"the matching model needs even n, got n={n}")
    out = []
    for cls in vector_classes(n, V):
        rep = cls.representative()
        if model == "directed":
            gap = directed_gap(rep, d, V, method)
        elif model == "matching":
            gap = matching_gap(rep, d, V)
        else:
            raise ValueError(f"unknown model {model!r}")
        out.append(ClassGap(cls, gap))
    return out


def total_mixing_gap(n: int, V: AbelianGroupType, d: int, model: str = "directed",
                     method: str = "profile") -> Fraction:
    """sum over q in V^n of d_inf(law of the model applied to q, its uniform reference)."""
    return sum((c.weighted for c in class_gaps(n, V, d, model, method)), Fraction(0))


# ---------------------------------------------------------------------------
# typicality

def is_alpha_typical(q, exponent: float, V: AbelianGroupType | None = None) -> bool:
    """max_c |m_q(c) - n/|V|| < n^exponent."""
    if not 0.5 < exponent < 2 / 3:
        warnings.warn(f"exponent {exponent} lies outside (1/2, 2/3)", stacklevel=2)
    V, vec = as_vector(q, V)
    n = len(vec)
    counts = np.array(counts_of(vec, V.order), dtype=float)
    return float(np.max(np.abs(counts - n / V.order))) < n ** exponent


# ---------------------------------------------------------------------------
# symmetric lift with even diagonal

class LiftPreconditionError(ValueError):
    """Raised when the lift hypotheses fail; ``reason`` is generation, size or i2."""

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


def _word_for(V: AbelianGroupType, target: int, gens: Sequence[tuple[int, int]]) -> dict[int, int]:
    """Nonnegative multiplicities c_k with sum c_k * value_k = target, by BFS over V.

    ``gens`` lists (position, element index) pairs.
    """
    add = group_tables(V)[1]
    parent: dict[int, tuple[int, int] | None] = {0: None}
    frontier = [0]
    while frontier and target not in parent:
        nxt = []
        for x in frontier:
            for pos, g in gens:
                y = int(add[x, g])
                if y not in parent:
                    parent[y] = (x, pos)
                    nxt.append(y)
        frontier = nxt
    if target not in parent:
        raise LiftPreconditionError("generation", "q does not generate V")
    word: dict[int, int] = defaultdict(int)
    x = target
    while parent[x] is not None:
        x, pos = parent[x]
        word[pos] += 1
    return dict(word)


def _basis_change(V: AbelianGroupType, vec: list[int]):
    """Unimodular B (with inverse) such that (B q)_i is the i-th standard generator."""
    n = len(vec)
    ell = len(V.invariant_factors)
    add, neg = group_tables(V)[1], group_tables(V)[2]
    B = [[int(i == j) for j in range(n)] for i in range(n)]
    Binv = [[int(i == j) for j in range(n)] for i in range(n)]
    cur = list(vec)

    def row_add(s, t, c):
        # q_s <- q_s + c q_t
        if not c:
            return
        B[s] = [x + c * y for x, y in zip(B[s], B[t])]
        for row in Binv:
            row[t] -= c * row[s]
        cur[s] = int(add[cur[s], _scale(V, cur[t], c)]) if c > 0 else \
            int(add[cur[s], neg[_scale(V, cur[t], -c)]])

    # zero out repeated values to free up slots
    first_seen: dict[int, int] = {}
    free = []
    for k, x in enumerate(vec):
        if x == 0:
            free.append(k)
        elif x in first_seen:
            row_add(k, first_seen[x], -1)
            free.append(k)
        else:
            first_seen[x] = k
    if len(free) < ell:
        raise LiftPreconditionError("size", "not enough repeated entries to place the generators")
    keep = [(k, cur[k]) for k in range(n) if k not in set(free)]
    slots = free[:ell]
    for i, s in enumerate(slots):
        gen = element_index(V, [int(i == j) for j in range(ell)])
        for pos, c in _word_for(V, gen, keep).items():
            row_add(s, pos, c)
    # move slot i to position i
    order = slots + [k for k in range(n) if k not in set(slots)]
    B = [B[k] for k in order]
    Binv = [[row[k] for k in order] for row in Binv]
    cur = [cur[k] for k in order]
    return B, Binv, cur


def _matmul(X, Y):
    Yt = list(zip(*Y))
    return [[sum(a * b for a, b in zip(row, col)) for col in Yt] for row in X]


def symmetric_even_diag_lift(q, r, V: AbelianGroupType | None = None) -> list[list[int]]:
    """An integer symmetric matrix A with even diagonal and A q = r.

    Requires n >= 2|V|, q generating V and <q (x) r> in I_2; otherwise
    :class:`LiftPreconditionError` says which hypothesis failed.
    """
    V, qv = as_vector(q, V)
    _, rv = as_vector(r, V)
    n = len(qv)
    if len(rv) != n:
        raise ValueError("q and r must have the same length")
    if n < 2 * V.order:
        raise LiftPreconditionError("size", f"need n >= 2|V| = {2 * V.order}, got n={n}")
    if len(_closure(V, qv)) != V.order:
        raise LiftPreconditionError("generation", "the entries of q do not generate V")
    if not pair_sum_in_i2(V, qv, rv):
        raise LiftPreconditionError("i2", "<q (x) r> is not in I_2")
    o = V.invariant_factors
    ell = len(o)
    if ell == 0:
        return [[0] * n for _ in range(n)]
    B, Binv, q2 = _basis_change(V, list(qv))
    coords = group_tables(V)[0]
    # r' = (B^-1)^T r, computed on coordinates
    rc = [[int(x) for x in coords[v]] for v in rv]
    r2 = [[sum(Binv[j][k] * rc[j][i] for j in range(n)) % o[i] for i in range(ell)] for k in range(n)]
    qc = [[int(x) for x in coords[v]] for v in q2]

    def dot(i, j):
        # sum_k q_k(i) r_k(j)
        return sum(qc[k][i] * r2[k][j] for k in range(n))

    A2 = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i >= ell and j < ell:
                A2[i][j] = r2[i][j]
            elif i < ell and j >= ell:
                A2[i][j] = r2[j][i]
            elif i < ell and j < ell:
                if i <= j:
                    A2[i][j] = r2[i][j] + r2[j][i] - dot(j, i)
                else:
                    A2[i][j] = r2[i][j] + r2[j][i] - dot(i, j)
    for i in range(ell):
        if A2[i][i] % 2:
            if o[i] % 2 == 0:
                raise AssertionError("parity condition violated despite I_2 membership")
            A2[i][i] += o[i]
    Bt = [list(col) for col in zip(*B)]
    A = _matmul(_matmul(Bt, A2), B)
    if not verify_lift(A, qv, rv, V):
        raise AssertionError("constructed matrix does not satisfy A q = r")
    return A


def verify_lift(A: Sequence[Sequence[int]], q, r, V: AbelianGroupType | None = None) -> bool:
    """Check symmetry, even diagonal and A q = r in V^n."""
    V, qv = as_vector(q, V)
    _, rv = as_vector(r, V)
    n = len(qv)
    if any(A[i][j] != A[j][i] for i in range(n) for j in range(n)):
        return False
    if any(A[i][i] % 2 for i in range(n)):
        return False
    coords = group_tables(V)[0]
    for i in range(n):
        acc = [sum(A[i][j] * int(coords[qv[j]][t]) for j in range(n)) for t in range(len(V.invariant_factors))]
        if element_index(V, acc) != rv[i]:
            return False
    return True
