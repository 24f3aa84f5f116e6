"""Sandpile groups of multigraphs and their invariants."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import sympy

from . import linalg
from .abelian import AbelianGroupType, PGroupType
from .graphs import (DirectedMultigraph, Multigraph, component_labels, is_connected,
                     is_strongly_connected, laplacian, reduced_laplacian)

DEFAULT_K = 12
DEFAULT_PRIMES = (2, 3, 5, 7)
TRIAL_LIMIT = 10**6


class DisconnectedGraphError(ValueError):
    """Raised when an operation needs a (strongly) connected graph."""


@dataclass(frozen=True)
class SandpileResult:
    group: AbelianGroupType
    torsion_order_log: float
    connected: bool
    truncation_flag: bool = False

    def to_record(self) -> dict:
        return {"group": str(self.group), "torsion_order_log": self.torsion_order_log,
                "connected": self.connected, "truncation_flag": self.truncation_flag}


@dataclass(frozen=True)
class SylowResult:
    sylow: PGroupType
    truncated: bool


def graph_is_connected(g: Multigraph) -> bool:
    """Strong connectivity for digraphs, ordinary connectivity otherwise."""
    return is_strongly_connected(g) if g.directed else is_connected(g)


def _require_connected(g: Multigraph):
    if not graph_is_connected(g):
        raise DisconnectedGraphError("graph is not connected; its sandpile group is infinite")


def sandpile_group(g: Multigraph) -> SandpileResult:
    """Z^{n-1} modulo the row space of the reduced Laplacian."""
    group = linalg.cokernel_type(reduced_laplacian(g))
    return SandpileResult(group, _log(group.torsion_order), graph_is_connected(g))


def sylow_of_sandpile(g: Multigraph, p: int, k: int = DEFAULT_K,
                      with_flag: bool = False) -> PGroupType | SylowResult:
    """p-Sylow type with exponents capped at k.

    With ``with_flag`` a :class:`SylowResult` is returned whose ``truncated``
    field reports whether some exponent reached the cap.
    """
    if k < 1:
        raise ValueError("k must be positive")
    _require_connected(g)
    exps = linalg.snf_mod_pk(reduced_laplacian(g), p, k)
    sylow = PGroupType(p, exps)
    if with_flag:
        return SylowResult(sylow, bool(exps) and max(exps) >= k)
    return sylow


def sylow_profile(g: Multigraph, primes=DEFAULT_PRIMES, k: int = DEFAULT_K) -> dict[int, SylowResult]:
    return {p: sylow_of_sandpile(g, p, k, with_flag=True) for p in primes}


def total_sandpile_group(g: DirectedMultigraph) -> AbelianGroupType:
    """Cokernel of the Laplacian with its last column deleted (all n rows kept)."""
    return linalg.cokernel_type(laplacian(g)[:, :-1])


def _log(x: int) -> float:
    return math.log(x) if x > 1 else 0.0


def log_torsion(g: Multigraph) -> float:
    """Natural log of the order of the torsion part of the sandpile group."""
    L = reduced_laplacian(g)
    if L.shape[0] == 0:
        return 0.0
    det = linalg.determinant(L)
    if det:
        return _log(abs(det))
    if not g.directed:
        # The group splits over components: one spanning-tree count each.
        _, labels = component_labels(g)
        full = laplacian(g)
        total = 0.0
        for c in np.unique(labels):
            idx = np.flatnonzero(labels == c)[:-1]
            if len(idx):
                total += _log(abs(linalg.determinant(full[np.ix_(idx, idx)])))
        return total
    return _log(linalg.cokernel_type(L).torsion_order)


def group_rank_profile(g: Multigraph, primes) -> dict[int, int]:
    """Rank of each p-Sylow subgroup, read off as the corank of Delta mod p."""
    _require_connected(g)
    L = reduced_laplacian(g)
    return {int(p): linalg.corank_mod_p(L, int(p)) for p in primes}


def prime_divisors(N: int, trial_limit: int = TRIAL_LIMIT) -> list[int]:
    """Primes dividing N: trial division, then primality testing on the cofactor."""
    N = abs(int(N))
    if N == 0:
        raise ValueError("every prime divides 0")
    out = []
    for p in sympy.primerange(2, trial_limit + 1):
        if p * p > N:
            break
        if N % p == 0:
            out.append(p)
            while N % p == 0:
                N //= p
    if N > 1:
        if N <= trial_limit * trial_limit or sympy.isprime(N):
            out.append(N)
        else:
            out.extend(sorted(sympy.factorint(N)))
    return sorted(out)


def full_type_from_sylows(g: Multigraph, k: int | None = None) -> AbelianGroupType:
    """Rebuild the sandpile group from its Sylow subgroups (connected g only).

    The cap k defaults to the valuation of det in each prime, so nothing is
    truncated.
    """
    _require_connected(g)
    L = reduced_laplacian(g)
    det = abs(linalg.determinant(L)) if L.shape[0] else 1
    sylows = []
    for p in (prime_divisors(det) if det > 1 else []):
        cap = k or sympy.multiplicity(p, det)
        sylows.append(PGroupType(p, linalg.snf_mod_pk(L, p, cap)))
    return AbelianGroupType.from_sylows(sylows)
