"""Limiting distributions of Sylow subgroups and their moment predictions.

Algebraic factors (automorphism counts, pairing ratios) are exact rationals;
the infinite products are evaluated with mpmath and truncated once the next
factor is within 1e-15 of 1.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath

from .abelian import (AbelianGroupType, PGroupType, Partition, aut_order, exterior_square_order,
                      partitions, rank2, transpose)

PRECISION_BITS = 96
FACTOR_TOLERANCE = 1e-15


class LawKind(enum.Enum):
    DirectedRegular = "directed-regular"
    UndirectedOddD = "undirected-odd"
    UndirectedEvenD = "undirected-even"
    DirectedER = "directed-er"

    @classmethod
    def parse(cls, text: str) -> "LawKind":
        key = text.strip().lower().replace("_", "-")
        aliases = {"directed": cls.DirectedRegular, "odd": cls.UndirectedOddD,
                   "even": cls.UndirectedEvenD, "er": cls.DirectedER}
        if key in aliases:
            return aliases[key]
        for kind in cls:
            if key in (kind.value, kind.name.lower()):
                return kind
        raise ValueError(f"unknown law kind {text!r}")

    @classmethod
    def for_graph_model(cls, model: str, d: int | None = None) -> "LawKind":
        if model == "directed-regular":
            return cls.DirectedRegular
        if model == "directed-er":
            return cls.DirectedER
        if model == "matching":
            return cls.UndirectedEvenD if d % 2 == 0 else cls.UndirectedOddD
        raise ValueError(f"unknown model {model!r}")


@dataclass(frozen=True)
class LawValue:
    probability: mpmath.mpf
    truncation_terms: int
    error_bound: float

    def __float__(self) -> float:
        return float(self.probability)

    def to_record(self) -> dict:
        return {"probability": float(self.probability),
                "truncation_terms": self.truncation_terms, "error_bound": self.error_bound}


@dataclass(frozen=True)
class _Product:
    value: mpmath.mpf
    terms: int
    tail: float


@lru_cache(maxsize=None)
def _euler_product(p: int, start: int, step: int) -> _Product:
    """prod_{j = start, start+step, ...} (1 - p^-j), truncated.

    The dropped factors multiply to at least 1 - tail, tail being the
    geometric sum of the omitted p^-j.
    """
    with mpmath.workprec(PRECISION_BITS):
        value = mpmath.mpf(1)
        j, terms = start, 0
        while mpmath.mpf(p) ** -j >= FACTOR_TOLERANCE:
            value *= 1 - mpmath.mpf(p) ** -j
            j += step
            terms += 1
        tail = float(mpmath.mpf(p) ** -j / (1 - mpmath.mpf(p) ** -step))
    return _Product(value, terms, tail)


def _law_value(coefficient: Fraction, prod: _Product) -> LawValue:
    with mpmath.workprec(PRECISION_BITS):
        prob = mpmath.mpf(coefficient.numerator) / coefficient.denominator * prod.value
    return LawValue(prob, prod.terms, float(prob) * prod.tail)


def _as_pgroup(G) -> PGroupType:
    if isinstance(G, PGroupType):
        return G
    raise TypeError(f"expected a PGroupType, got {type(G).__name__}")


def cl_directed_prob(G: PGroupType) -> LawValue:
    """|Aut G|^-1 prod_{j>=1} (1 - p^-j)."""
    G = _as_pgroup(G)
    return _law_value(Fraction(1, aut_order(G)), _euler_product(G.p, 1, 1))


def pairing_ratio(G: PGroupType) -> Fraction:
    """Number of symmetric bilinear perfect pairings on G divided by |G||Aut G|.

    Closed form in the transpose partition mu of the type lambda.
    """
    G = _as_pgroup(G)
    p, lam = G.p, G.lam
    mu = list(transpose(lam)) + [0]
    ratio = Fraction(1, p ** sum(m * (m + 1) // 2 for m in mu))
    for i in range(len(mu) - 1):
        for j in range(1, (mu[i] - mu[i + 1]) // 2 + 1):
            ratio /= 1 - Fraction(1, p ** (2 * j))
    return ratio


def undirected_odd_prob(G: PGroupType) -> LawValue:
    G = _as_pgroup(G)
    return _law_value(pairing_ratio(G), _euler_product(G.p, 1, 2))


def undirected_even_prob(G: PGroupType) -> LawValue:
    """2^rank(G) times the odd-d value; zero unless rank(G) is odd."""
    G = _as_pgroup(G)
    if G.p != 2:
        raise ValueError("the even-d prefactor concerns the 2-Sylow subgroup only")
    prod = _euler_product(2, 1, 2)
    if G.rank % 2 == 0:
        return LawValue(mpmath.mpf(0), prod.terms, 0.0)
    return _law_value(2 ** G.rank * pairing_ratio(G), prod)


def directed_er_prob(G: PGroupType) -> LawValue:
    """prod_{j>=2} (1 - p^-j) / (|G||Aut G|)."""
    G = _as_pgroup(G)
    return _law_value(Fraction(1, G.order * aut_order(G)), _euler_product(G.p, 2, 1))


def law_prob(kind: LawKind, G: PGroupType) -> LawValue:
    """Per-prime factor of the limiting law.

    For even d the 2^rank prefactor belongs to the 2-part; odd primes keep the
    odd-d factor.
    """
    if kind is LawKind.DirectedRegular:
        return cl_directed_prob(G)
    if kind is LawKind.UndirectedOddD:
        return undirected_odd_prob(G)
    if kind is LawKind.UndirectedEvenD:
        return undirected_even_prob(G) if G.p == 2 else undirected_odd_prob(G)
    if kind is LawKind.DirectedER:
        return directed_er_prob(G)
    raise ValueError(f"unknown law {kind!r}")


def joint_prob(parts: Sequence[PGroupType], law: LawKind) -> float:
    """Limit probability that the Sylow subgroups at the listed primes are as given."""
    primes = [G.p for G in parts]
    if len(set(primes)) != len(primes):
        raise ValueError(f"duplicate prime in {primes}")
    with mpmath.workprec(PRECISION_BITS):
        total = mpmath.mpf(1)
        for G in parts:
            total *= law_prob(law, G).probability
    return float(total)


def moment_prediction(V: AbelianGroupType, law: LawKind) -> int | Fraction:
    """Limit of E|Sur(Gamma_n, V)|.

    The directed Erdos-Renyi law is the u=1 Cohen-Lenstra measure, whose
    V-moment is 1/|V|; it is returned as a Fraction.
    """
    if not V.is_finite:
        raise ValueError("V must be finite")
    if law is LawKind.DirectedRegular:
        return 1
    if law is LawKind.UndirectedOddD:
        return exterior_square_order(V)
    if law is LawKind.UndirectedEvenD:
        return 2 ** rank2(V) * exterior_square_order(V)
    if law is LawKind.DirectedER:
        return Fraction(1, V.order)
    raise ValueError(f"unknown law {law!r}")


def normalization_report(law: LawKind, p: int, sum_cap: int, rank_cap: int | None = None) -> dict:
    """Total mass of the law over partitions of size <= sum_cap and length <= rank_cap."""
    with mpmath.workprec(PRECISION_BITS):
        mass = mpmath.mpf(0)
        for lam in partitions(sum_cap, rank_cap):
            mass += law_prob(law, PGroupType(p, lam)).probability
    return {"mass": float(mass), "deficit": float(1 - mass)}


def top_groups(law: LawKind, p: int, count: int = 10, sum_cap: int = 10) -> list[tuple[PGroupType, float]]:
    """The most likely p-groups under the law, by descending probability."""
    rows = [(PGroupType(p, lam), float(law_prob(law, PGroupType(p, lam))))
            for lam in partitions(sum_cap)]
    rows.sort(key=lambda t: (-t[1], t[0].lam.size, tuple(t[0].lam)))
    return rows[:count]


def mckay_lyons_constant(d: int) -> float:
    """log( (d-1)^(d-1) / (d(d-2))^(d/2-1) )."""
    if d < 3:
        raise ValueError("d must be at least 3")
    return (d - 1) * math.log(d - 1) - (d / 2 - 1) * math.log(d * (d - 2))


# ---------------------------------------------------------------------------
# direct pairing enumeration

def count_sbp_pairings(G: PGroupType | AbelianGroupType) -> int:
    """Count symmetric, bilinear, perfect pairings G x G -> C^* by enumeration.

    Values are taken in Z/e with e the exponent of G.  A bilinear map is fixed
    by its values c_ij on pairs of generators; every symmetric assignment is
    tried, well-definedness (a_i c_ij = 0) and perfectness (trivial kernel)
    are checked on the full element table.
    """
    A = G.to_group() if isinstance(G, PGroupType) else G
    a = A.invariant_factors
    k = len(a)
    if k == 0:
        return 1
    e = A.exponent
    elems = [el.coords for el in A.elements()]
    slots = [(i, j) for i in range(k) for j in range(i, k)]
    count = 0
    for values in itertools.product(range(e), repeat=len(slots)):
        c = [[0] * k for _ in range(k)]
        for (i, j), v in zip(slots, values):
            c[i][j] = c[j][i] = v
        if any((a[i] * c[i][j]) % e for i in range(k) for j in range(k)):
            continue
        if all(any(sum(x[i] * c[i][j] * y[j] for i in range(k) for j in range(k)) % e
                   for y in elems)
               for x in elems if any(x)):
            count += 1
    return count


def pairing_ratio_bruteforce(G: PGroupType) -> Fraction:
    A = G.to_group()
    return Fraction(count_sbp_pairings(A), A.order * aut_order(A))
