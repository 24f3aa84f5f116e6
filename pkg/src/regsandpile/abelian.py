"""Finite(ly generated) abelian groups presented by invariant factors.

Isomorphism types (partitions for p-groups, divisibility chains in general),
element arithmetic, counting formulas for Aut/Hom/Sur, exterior squares and
the subgroups I and I_2 of the tensor square.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd, prod
from typing import Iterable, Iterator, Sequence

import numpy as np
from sympy import factorint, isprime

from . import linalg


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its size budget."""


DEFAULT_BUDGET = 2 ** 12


# ---------------------------------------------------------------------------
# partitions

@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        if any(x < 1 for x in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]) -> "Partition":
        """Build from an unordered bag of exponents; zeros are dropped."""
        return cls(tuple(sorted((int(e) for e in exponents if e), reverse=True)))

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def part(self, i: int) -> int:
        """1-based part, zero past the end."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    @property
    def size(self) -> int:
        return sum(self.parts)

    def transpose(self) -> "Partition":
        return transpose(self)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def transpose(lam: Partition | Sequence[int]) -> Partition:
    parts = tuple(lam)
    if not parts:
        return Partition()
    return Partition(tuple(sum(1 for x in parts if x >= j) for j in range(1, max(parts) + 1)))


def as_partition(lam) -> Partition:
    return lam if isinstance(lam, Partition) else Partition.from_exponents(lam)


def partitions(max_size: int, max_length: int | None = None, min_size: int = 0) -> Iterator[Partition]:
    """All partitions with ``min_size <= size <= max_size`` and at most
    ``max_length`` parts, in order of size."""
    for total in range(min_size, max_size + 1):
        yield from _partitions_of(total, total, max_length if max_length is not None else total)


def _partitions_of(n: int, largest: int, length: int) -> Iterator[Partition]:
    if n == 0:
        yield Partition()
        return
    if length == 0:
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions_of(n - first, first, length - 1):
            yield Partition((first,) + rest.parts)


# ---------------------------------------------------------------------------
# group types

@dataclass(frozen=True)
class PGroupType:
    """Finite abelian p-group of type lambda: sum of Z/p^lambda_i."""

    p: int
    lam: Partition = Partition()

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        object.__setattr__(self, "lam", as_partition(self.lam))

    @property
    def order(self) -> int:
        return self.p ** self.lam.size

    @property
    def rank(self) -> int:
        return len(self.lam)

    @property
    def exponent(self) -> int:
        return self.p ** (self.lam[0] if self.lam.parts else 0)

    def to_group(self) -> "AbelianGroupType":
        return AbelianGroupType(tuple(self.p ** e for e in reversed(self.lam.parts)))

    def __str__(self) -> str:
        return str(self.to_group())


@dataclass(frozen=True)
class AbelianGroupType:
    """Z/a_1 + ... + Z/a_k + Z^free_rank with a_1 | a_2 | ... | a_k, a_i >= 2."""

    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        inv = tuple(int(a) for a in self.invariant_factors)
        if any(a < 2 for a in inv):
            raise ValueError(f"invariant factors must be at least 2: {inv}")
        if any(b % a for a, b in zip(inv, inv[1:])):
            raise ValueError(f"not a divisibility chain: {inv}")
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        object.__setattr__(self, "invariant_factors", inv)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_orders(cls, orders: Iterable[int], free_rank: int = 0) -> "AbelianGroupType":
        """Type of a direct sum of cyclic groups of the given orders (0 = Z)."""
        orders = [int(o) for o in orders]
        free_rank += sum(1 for o in orders if o == 0)
        chain = linalg.divisibility_chain([abs(o) for o in orders if o not in (0, 1, -1)])
        return cls(tuple(a for a in chain if a > 1), free_rank)

    @classmethod
    def cyclic(cls, n: int) -> "AbelianGroupType":
        return cls.from_orders([n])

    @classmethod
    def from_sylows(cls, sylows: Iterable[PGroupType], free_rank: int = 0) -> "AbelianGroupType":
        orders = [P.p ** e for P in sylows for e in P.lam]
        return cls.from_orders(orders, free_rank)

    @classmethod
    def parse(cls, text: str) -> "AbelianGroupType":
        """Inverse of ``str``: e.g. ``"Z/2 + Z/4 + Z^1"``, ``"0"``, ``"Z2+Z4"``."""
        text = text.strip()
        if text in ("", "0", "trivial"):
            return cls()
        orders, free = [], 0
        for term in text.replace("⊕", "+").split("+"):
            term = term.strip().replace(" ", "")
            m = re.fullmatch(r"Z/?(\d+)(?:\^(\d+))?", term)
            if m and m.group(1) is not None:
                orders += [int(m.group(1))] * int(m.group(2) or 1)
                continue
            m = re.fullmatch(r"Z(?:\^(\d+))?", term)
            if m:
                free += int(m.group(1) or 1)
                continue
            raise ValueError(f"cannot parse group term {term!r}")
        return cls.from_orders(orders, free)

    # -- invariants --------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def torsion_order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise ValueError("infinite group has no finite order")
        return self.torsion_order

    @property
    def rank(self) -> int:
        """Minimum number of generators."""
        return len(self.invariant_factors) + self.free_rank

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def torsion(self) -> "AbelianGroupType":
        return AbelianGroupType(self.invariant_factors)

    def primes(self) -> list[int]:
        return sorted(factorint(self.exponent)) if self.invariant_factors else []

    def p_rank(self, p: int) -> int:
        """Rank of the p-Sylow subgroup of the torsion part."""
        return sum(1 for a in self.invariant_factors if a % p == 0)

    def sylow(self, p: int) -> PGroupType:
        exps = []
        for a in self.invariant_factors:
            e = 0
            while a % p == 0:
                a //= p
                e += 1
            exps.append(e)
        return PGroupType(p, Partition.from_exponents(exps))

    # -- serialization -----------------------------------------------------

    def __str__(self) -> str:
        terms = [f"Z/{a}" for a in self.invariant_factors]
        if self.free_rank:
            terms.append(f"Z^{self.free_rank}")
        return " + ".join(terms) if terms else "0"

    def to_record(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors), "free_rank": self.free_rank}

    @classmethod
    def from_record(cls, record: dict) -> "AbelianGroupType":
        return cls(tuple(record["invariant_factors"]), record.get("free_rank", 0))

    # -- elements ----------------------------------------------------------

    def _require_finite(self):
        if not self.is_finite:
            raise ValueError("element arithmetic is only available for finite groups")

    def elements(self) -> Iterator["GroupElement"]:
        self._require_finite()
        for coords in itertools.product(*(range(a) for a in self.invariant_factors)):
            yield GroupElement(self, coords)

    def element(self, coords: Sequence[int]) -> "GroupElement":
        self._require_finite()
        return GroupElement(self, tuple(coords))

    @property
    def zero(self) -> "GroupElement":
        return self.element((0,) * len(self.invariant_factors))

    def generators(self) -> list["GroupElement"]:
        k = len(self.invariant_factors)
        return [self.element(tuple(int(i == j) for j in range(k))) for i in range(k)]


@dataclass(frozen=True)
class GroupElement:
    group: AbelianGroupType
    coords: tuple[int, ...]

    def __post_init__(self):
        inv = self.group.invariant_factors
        coords = tuple(int(c) % a for c, a in zip(self.coords, inv))
        if len(coords) != len(inv) or len(self.coords) != len(inv):
            raise ValueError("coordinate count does not match the group")
        object.__setattr__(self, "coords", coords)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.group, tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(-x for x in self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "GroupElement":
        return GroupElement(self.group, tuple(k * x for x in self.coords))

    def __bool__(self) -> bool:
        return any(self.coords)

    @property
    def index(self) -> int:
        return element_index(self.group, self.coords)

    @property
    def order(self) -> int:
        o = 1
        for x, a in zip(self.coords, self.group.invariant_factors):
            o = o * (a // gcd(x, a)) // gcd(o, a // gcd(x, a))
        return o


# ---------------------------------------------------------------------------
# integer-indexed element tables for enumeration-heavy code

def element_index(V: AbelianGroupType, coords: Sequence[int]) -> int:
    idx = 0
    for c, a in zip(coords, V.invariant_factors):
        idx = idx * a + int(c) % a
    return idx


def element_coords(V: AbelianGroupType, idx: int) -> tuple[int, ...]:
    out = []
    for a in reversed(V.invariant_factors):
        idx, c = divmod(idx, a)
        out.append(c)
    return tuple(reversed(out))


@lru_cache(maxsize=64)
def group_tables(V: AbelianGroupType) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(coords, add, neg, order) tables indexed by element index."""
    if not V.is_finite:
        raise ValueError("tables need a finite group")
    n = V.order
    inv = np.array(V.invariant_factors, dtype=np.int64)
    coords = np.array([element_coords(V, i) for i in range(n)], dtype=np.int64).reshape(n, len(inv))
    radix = np.array([prod(V.invariant_factors[j + 1:]) for j in range(len(inv))], dtype=np.int64)

    def idx(c):
        return (np.mod(c, inv) * radix).sum(axis=-1)

    add = idx(coords[:, None, :] + coords[None, :, :])
    neg = idx(-coords)
    order = np.array([GroupElement(V, tuple(c)).order for c in coords.tolist()], dtype=np.int64)
    for t in (coords, add, neg, order):
        t.setflags(write=False)
    return coords, add, neg, order


def scale_index(V: AbelianGroupType, idx: int, k: int) -> int:
    coords = element_coords(V, idx)
    return element_index(V, [k * c for c in coords])


# ---------------------------------------------------------------------------
# counting

def aut_order(G: PGroupType | AbelianGroupType) -> int:
    """|Aut(G)| for a finite abelian group.

    p-groups use the closed formula of Hillar and Rhea; a general finite
    group is the product over its Sylow subgroups.
    """
    if isinstance(G, AbelianGroupType):
        if not G.is_finite:
            raise ValueError("Aut of an infinite group is infinite")
        return prod(aut_order(G.sylow(p)) for p in G.primes())
    p = G.p
    e = sorted(G.lam.parts)  # ascending
    n = len(e)
    total = 1
    for k in range(1, n + 1):
        ek = e[k - 1]
        d_k = max(l for l in range(1, n + 1) if e[l - 1] == ek)
        c_k = min(l for l in range(1, n + 1) if e[l - 1] == ek)
        total *= p ** d_k - p ** (k - 1)
        total *= p ** (ek * (n - d_k))
        total *= p ** ((ek - 1) * (n - c_k + 1))
    return total


def hom_count_p(mu, lam, p: int) -> int:
    """|Hom(G_mu, G_lambda)| for abelian p-groups of types mu and lambda."""
    mt, lt = transpose(as_partition(mu)), transpose(as_partition(lam))
    return p ** sum(a * b for a, b in zip(mt.parts, lt.parts))


def hom_count(G: AbelianGroupType, H: AbelianGroupType) -> int:
    """|Hom(G, H)| for finite H."""
    if not H.is_finite:
        raise ValueError("Hom into an infinite group is not counted")
    total = H.order ** G.free_rank
    for a in G.invariant_factors:
        for b in H.invariant_factors:
            total *= gcd(a, b)
    return total


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of a small finite group, as a set of element indices."""

    ambient: AbelianGroupType
    elements: frozenset
    generators: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def killed_by(self, a: int) -> int:
        """#{w in W : a w = 0}."""
        order = group_tables(self.ambient)[3]
        return sum(1 for w in self.elements if a % int(order[w]) == 0)


def enumerate_subgroups(V: AbelianGroupType, budget: int = DEFAULT_BUDGET,
                        max_subgroups: int = 50_000) -> list[Subgroup]:
    """Every subgroup of V, each once, ordered by size."""
    if not V.is_finite:
        raise ValueError("subgroups are enumerated for finite groups only")
    if V.order > budget:
        raise BudgetExceeded(f"|V| = {V.order} exceeds budget {budget}")
    _, add, _, order = group_tables(V)
    n = V.order
    trivial = Subgroup(V, frozenset([0]), ())
    seen = {trivial.elements: trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for H in frontier:
            covered = set(H.elements)
            for g in range(n):
                if g in covered:
                    continue
                # <H, g> = union of cosets H + k g
                elems = set()
                shift = 0
                for _ in range(int(order[g])):
                    elems.update(int(add[h, shift]) for h in H.elements)
                    shift = int(add[shift, g])
                key = frozenset(elems)
                covered.update(add[list(H.elements), g].tolist())
                if key not in seen:
                    S = Subgroup(V, key, H.generators + (g,))
                    seen[key] = S
                    nxt.append(S)
                    if len(seen) > max_subgroups:
                        raise BudgetExceeded(f"more than {max_subgroups} subgroups")
        frontier = nxt
    return sorted(seen.values(), key=lambda S: (S.order, sorted(S.elements)))


def _hom_into_subgroup(G: AbelianGroupType, W: Subgroup) -> int:
    total = W.order ** G.free_rank
    for a in G.invariant_factors:
        total *= W.killed_by(a)
    return total


def sur_count(G: AbelianGroupType, V: AbelianGroupType, budget: int = DEFAULT_BUDGET) -> int:
    """|Sur(G, V)| by Moebius inversion over the subgroup lattice of V."""
    if not V.is_finite:
        raise ValueError("V must be finite")
    if V.rank > G.rank:
        return 0
    subs = enumerate_subgroups(V, budget)
    mobius: dict[frozenset, int] = {}
    top = subs[-1].elements
    for W in reversed(subs):
        if W.elements == top:
            mobius[W.elements] = 1
            continue
        mobius[W.elements] = -sum(
            mu for U, mu in mobius.items() if mu and W.elements < U
        )
    return sum(mobius[W.elements] * _hom_into_subgroup(G, W) for W in subs if mobius[W.elements])


def rank2(V: AbelianGroupType) -> int:
    """Rank of the 2-Sylow subgroup."""
    return V.p_rank(2)


def exterior_square_order(V: AbelianGroupType) -> int:
    """|V wedge V| = prod_{i<j} gcd(a_i, a_j)."""
    if not V.is_finite:
        raise ValueError("V must be finite")
    a = V.invariant_factors
    return prod(gcd(a[i], a[j]) for i in range(len(a)) for j in range(i + 1, len(a)))


# ---------------------------------------------------------------------------
# tensor square

class TensorSquare:
    """V (x) V = sum over (i, j) of Z/gcd(a_i, a_j), coordinates row-major."""

    def __init__(self, base: AbelianGroupType):
        if not base.is_finite:
            raise ValueError("tensor squares are built for finite groups")
        self.base = base
        a = base.invariant_factors
        self.k = len(a)
        self.component_moduli = tuple(gcd(a[i], a[j]) for i in range(self.k) for j in range(self.k))

    def __repr__(self):
        return f"TensorSquare({self.base})"

    @property
    def order(self) -> int:
        return prod(self.component_moduli)

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(v) % m for v, m in zip(x, self.component_moduli))

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * (self.k * self.k)

    def elementary(self, a, b) -> tuple[int, ...]:
        ca, cb = _coords(a), _coords(b)
        return self.reduce([ca[i] * cb[j] for i in range(self.k) for j in range(self.k)])

    def add(self, x, y) -> tuple[int, ...]:
        return self.reduce([u + v for u, v in zip(x, y)])

    def _unit(self, i: int, j: int) -> list[int]:
        v = [0] * (self.k * self.k)
        v[i * self.k + j] = 1
        return v

    @cached_property
    def i2_generators(self) -> list[tuple[int, ...]]:
        """e_i (x) e_j + e_j (x) e_i for i <= j."""
        gens = []
        for i in range(self.k):
            for j in range(i, self.k):
                v = [x + y for x, y in zip(self._unit(i, j), self._unit(j, i))]
                gens.append(self.reduce(v))
        return gens

    @cached_property
    def i_generators(self) -> list[tuple[int, ...]]:
        """e_i (x) e_i together with the symmetric off-diagonal sums."""
        gens = [self.reduce(self._unit(i, i)) for i in range(self.k)]
        gens += [g for g in self.i2_generators if g not in self._diag_doubles]
        return gens

    @cached_property
    def _diag_doubles(self):
        return {self.reduce([2 * x for x in self._unit(i, i)]) for i in range(self.k)}

    def _relations(self) -> list[list[int]]:
        return [[m if t == s else 0 for t in range(len(self.component_moduli))]
                for s, m in enumerate(self.component_moduli)]

    def in_subgroup(self, gens, x) -> bool:
        return linalg.lattice_contains([list(g) for g in gens] + self._relations(), list(x))

    def in_i2(self, x) -> bool:
        return self.in_subgroup(self.i2_generators, x)

    def in_i(self, x) -> bool:
        return self.in_subgroup(self.i_generators, x)

    def subgroup_order(self, gens) -> int:
        return linalg.subgroup_order([list(g) for g in gens], self.component_moduli)

    def pair_sum(self, q, r) -> tuple[int, ...]:
        """<q (x) r> = sum_i q_i (x) r_i."""
        if len(q) != len(r):
            raise ValueError(f"length mismatch: {len(q)} vs {len(r)}")
        acc = [0] * (self.k * self.k)
        for a, b in zip(q, r):
            ca, cb = _coords(a), _coords(b)
            for i in range(self.k):
                if ca[i]:
                    for j in range(self.k):
                        acc[i * self.k + j] += ca[i] * cb[j]
        return self.reduce(acc)


def _coords(a) -> tuple[int, ...]:
    return a.coords if isinstance(a, GroupElement) else tuple(a)


def tensor_pair_sum(q: Sequence[GroupElement], r: Sequence[GroupElement],
                    V: AbelianGroupType | None = None) -> tuple[int, ...]:
    """The element sum_k q_k (x) r_k of V (x) V."""
    if len(q) != len(r):
        raise ValueError(f"length mismatch: {len(q)} vs {len(r)}")
    if not q:
        if V is None:
            raise ValueError("empty sum needs the group V")
        return TensorSquare(V).zero
    V = V or q[0].group
    if any(x.group != V for x in itertools.chain(q, r)):
        raise ValueError("elements from different groups")
    return TensorSquare(V).pair_sum(q, r)


def in_i2(V: AbelianGroupType, x: Sequence[int]) -> bool:
    return TensorSquare(V).in_i2(x)
