"""Exact integer and modular linear algebra.

Smith normal form over Z, elementary divisors over Z/p^k, ranks over F_p,
exact determinants and cokernels.  Matrices may be given as
:class:`BigIntMatrix`, numpy integer arrays or nested sequences of ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt, prod
from typing import Sequence, Union

import numpy as np
from sympy import prevprime

# largest modulus whose products still fit in int64
_INT64_SAFE_MODULUS = 3_037_000_499

# square matrices at least this large go through the modular routes
_LARGE = 24


@dataclass(frozen=True)
class BigIntMatrix:
    """Dense matrix of arbitrary-precision integers, row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "BigIntMatrix":
        rows = [[int(x) for x in r] for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_record(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": self.to_rows()}

    @classmethod
    def from_record(cls, record: dict) -> "BigIntMatrix":
        return cls.from_rows(record["entries"], cols=record["cols"])


@dataclass(frozen=True)
class ModMatrix:
    """Matrix over Z/m with entries reduced into [0, m)."""

    modulus: int
    entries: np.ndarray

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        arr = _mod_array(self.entries, self.modulus)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def to_record(self) -> dict:
        return {"modulus": self.modulus, "entries": [[int(x) for x in r] for r in self.entries]}


@dataclass(frozen=True)
class SNFResult:
    invariant_factors: tuple[int, ...]
    rank: int
    free_corank: int

    def to_record(self) -> dict:
        return {
            "invariant_factors": list(self.invariant_factors),
            "rank": self.rank,
            "free_corank": self.free_corank,
        }


MatrixLike = Union[BigIntMatrix, ModMatrix, np.ndarray, Sequence[Sequence[int]]]


def as_rows(M: MatrixLike) -> list[list[int]]:
    """Copy of ``M`` as a list of lists of Python ints."""
    if isinstance(M, BigIntMatrix):
        return M.to_rows()
    if isinstance(M, ModMatrix):
        return [[int(x) for x in r] for r in M.entries]
    if isinstance(M, np.ndarray):
        if M.ndim != 2:
            raise ValueError("expected a 2-d array")
        return [[int(x) for x in r] for r in M]
    return [[int(x) for x in r] for r in M]


def _shape(M: MatrixLike) -> tuple[int, int]:
    if isinstance(M, BigIntMatrix):
        return M.rows, M.cols
    if isinstance(M, ModMatrix):
        return M.shape
    if isinstance(M, np.ndarray):
        return M.shape
    rows = len(M)
    return rows, (len(M[0]) if rows else 0)


def _mod_array(M, m: int) -> np.ndarray:
    """Reduce ``M`` mod ``m`` into a fresh array (int64 when products fit)."""
    if isinstance(M, ModMatrix):
        M = M.entries
    if isinstance(M, np.ndarray) and M.dtype != object and m <= _INT64_SAFE_MODULUS:
        return np.mod(M.astype(np.int64, copy=True), m)
    rows = as_rows(M)
    if not rows:
        return np.zeros((0, 0), dtype=np.int64)
    if m <= _INT64_SAFE_MODULUS:
        return np.array([[x % m for x in r] for r in rows], dtype=np.int64).reshape(len(rows), -1)
    arr = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            arr[i, j] = x % m
    return arr


# ---------------------------------------------------------------------------
# modular elimination

def rank_mod_p(M: MatrixLike, p: int) -> int:
    """Rank of ``M`` over the field with ``p`` elements."""
    if isinstance(M, ModMatrix) and M.modulus != p:
        raise ValueError(f"ModMatrix has modulus {M.modulus}, expected {p}")
    a = _mod_array(M, p)
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.flatnonzero(a[rank:, c])
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), -1, p)
        a[rank] = (a[rank] * inv) % p
        below = np.flatnonzero(a[rank + 1:, c]) + rank + 1
        if below.size:
            a[below] = (a[below] - np.outer(a[below, c], a[rank])) % p
        rank += 1
    return rank


def corank_mod_p(M: MatrixLike, p: int) -> int:
    return _shape(M)[1] - rank_mod_p(M, p)


def det_mod_p(M: MatrixLike, p: int) -> int:
    """Determinant of a square matrix reduced into [0, p)."""
    a = _mod_array(M, p)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("determinant needs a square matrix")
    det = 1
    for c in range(n):
        nz = np.flatnonzero(a[c:, c])
        if nz.size == 0:
            return 0
        piv = c + nz[0]
        if piv != c:
            a[[c, piv]] = a[[piv, c]]
            det = -det
        pv = int(a[c, c])
        det = det * pv % p
        if c + 1 < n:
            row = (a[c, c + 1:] * pow(pv, -1, p)) % p
            below = np.flatnonzero(a[c + 1:, c]) + c + 1
            if below.size:
                a[below, c + 1:] = (a[below, c + 1:] - np.outer(a[below, c], row)) % p
    return det % p


def snf_mod_pk(M: MatrixLike, p: int, k: int) -> tuple[int, ...]:
    """Elementary-divisor exponents of ``M`` over Z/p^k.

    Returns the nonzero values of ``min(v_p(d_i), k)`` over the diagonal of
    the Smith form, one per cokernel generator (so rank deficiency shows up
    as exponents equal to ``k``), sorted in decreasing order.  This is the
    type of the p-Sylow subgroup of the cokernel, truncated at p^k.
    """
    if k < 1:
        raise ValueError("k must be positive")
    _, cols = _shape(M)
    mod = p ** k
    a = _mod_array(M, mod)
    exps: list[int] = []
    e = 0
    while a.size:
        units = np.argwhere(a % p != 0)
        if units.size == 0:
            if not a.any():
                break
            # everything is divisible by p: strip one power and remember it
            e += 1
            mod //= p
            a = a // p
            continue
        i, j = units[0]
        if i:
            a[[0, i]] = a[[i, 0]]
        if j:
            a[:, [0, j]] = a[:, [j, 0]]
        inv = pow(int(a[0, 0]), -1, mod)
        row = (a[0, 1:] * inv) % mod
        a = (a[1:, 1:] - np.outer(a[1:, 0], row)) % mod
        exps.append(e)
    exps.extend([k] * (cols - len(exps)))
    return tuple(sorted((x for x in exps if x > 0), reverse=True))


# ---------------------------------------------------------------------------
# determinants

def _bareiss(A: list[list[int]]) -> int:
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        rk = A[k]
        for i in range(k + 1, n):
            ri = A[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


@lru_cache(maxsize=1)
def _crt_prime_pool() -> tuple[int, ...]:
    primes = []
    p = 2 ** 31
    for _ in range(4000):
        p = prevprime(p)
        primes.append(p)
    return tuple(primes)


def hadamard_bound(rows: Sequence[Sequence[int]]) -> int:
    """Integer upper bound on |det| from Hadamard's inequality."""
    bound = 1
    for r in rows:
        bound *= isqrt(sum(x * x for x in r)) + 1
    return bound


def _det_multimodular(rows: list[list[int]]) -> int:
    bound = 2 * hadamard_bound(rows) + 1
    arr = np.array(rows, dtype=object)
    small = all(abs(x) < 2 ** 62 for r in rows for x in r)
    if small:
        arr = np.array(rows, dtype=np.int64)
    residue, modulus = 0, 1
    for p in _crt_prime_pool():
        r = det_mod_p(arr, p)
        # combine residue mod modulus with r mod p
        t = ((r - residue) * pow(modulus, -1, p)) % p
        residue += modulus * t
        modulus *= p
        if modulus > bound:
            break
    else:
        raise RuntimeError("ran out of CRT primes")
    return residue - modulus if residue > modulus // 2 else residue


def determinant(M: MatrixLike) -> int:
    """Exact integer determinant."""
    rows = as_rows(M)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant needs a square matrix")
    if n >= _LARGE:
        return _det_multimodular(rows)
    return _bareiss(rows)


# ---------------------------------------------------------------------------
# Smith normal form

def divisibility_chain(values: Sequence[int]) -> list[int]:
    """Rewrite positive integers as a chain d_1 | d_2 | ... with the same
    direct sum of cyclic groups."""
    d = sorted(values)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = gcd(d[i], d[j])
            if g != d[i]:
                d[i], d[j] = g, d[i] * d[j] // g
    return d


def _diagonalize(A: list[list[int]]) -> list[int]:
    """Diagonalize in place by unimodular row/column operations; return the
    absolute values of the nonzero diagonal entries."""
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        if j != t:
            for row in A:
                row[t], row[j] = row[j], row[t]
        while True:
            piv = A[t][t]
            clean = True
            rt = A[t]
            for i in range(t + 1, m):
                ri = A[i]
                if ri[t]:
                    q = ri[t] // piv
                    if q:
                        for c in range(t, n):
                            ri[c] -= q * rt[c]
                    if ri[t]:
                        clean = False
            for j in range(t + 1, n):
                if rt[j]:
                    q = rt[j] // piv
                    if q:
                        for i in range(t, m):
                            if A[i][t]:
                                A[i][j] -= q * A[i][t]
                    if rt[j]:
                        clean = False
            if clean:
                break
            # bring the smallest remainder into the pivot position
            best = None
            for i in range(t + 1, m):
                v = A[i][t]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, None)
            for j in range(t + 1, n):
                v = rt[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), None, j)
            _, i, j = best
            if i is not None:
                A[t], A[i] = A[i], A[t]
            else:
                for row in A:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    # When a | b keep a as the gcd; eliminations must not swap in that case.
    if a and b % a == 0:
        return a, 1, 0
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _diagonalize_mod(A: list[list[int]], D: int) -> list[int]:
    """Diagonalize a square matrix over Z/D; returns the diagonal residues."""
    n = len(A)
    A = [[x % D for x in r] for r in A]
    diag = []
    for t in range(n):
        while True:
            # clear column t below the pivot
            for i in range(t + 1, n):
                b = A[i][t]
                if not b:
                    continue
                a = A[t][t]
                if a == 0:
                    A[t], A[i] = A[i], A[t]
                    continue
                g, x, y = _egcd(a, b)
                ag, bg = a // g, b // g
                rt, ri = A[t], A[i]
                A[t] = [(x * u + y * v) % D for u, v in zip(rt, ri)]
                A[i] = [(ag * v - bg * u) % D for u, v in zip(rt, ri)]
            # clear row t right of the pivot
            row_dirty = False
            for j in range(t + 1, n):
                b = A[t][j]
                if not b:
                    continue
                a = A[t][t]
                if a == 0:
                    for r in A:
                        r[t], r[j] = r[j], r[t]
                    continue
                g, x, y = _egcd(a, b)
                ag, bg = a // g, b // g
                for r in A:
                    u, v = r[t], r[j]
                    r[t] = (x * u + y * v) % D
                    r[j] = (ag * v - bg * u) % D
                row_dirty = True
            if not row_dirty or not any(A[i][t] for i in range(t + 1, n)):
                break
        diag.append(A[t][t])
    return diag


def smith_normal_form(M: MatrixLike) -> SNFResult:
    """Invariant factors of an integer matrix.

    Large nonsingular square inputs are reduced modulo |det| (the cokernel is
    killed by its order, so nothing is lost); everything else goes through
    integer elimination with smallest-absolute-value pivots.
    """
    rows = as_rows(M)
    m, n = _shape(M)
    if m == n and n >= _LARGE:
        D = abs(determinant(rows))
        if D:
            diag = [gcd(x, D) for x in _diagonalize_mod(rows, D)]
            factors = divisibility_chain(diag)
            return SNFResult(tuple(factors), n, 0)
    diag = _diagonalize(rows)
    factors = divisibility_chain(diag)
    return SNFResult(tuple(factors), len(factors), n - len(factors))


def cokernel_type(M: MatrixLike):
    """Isomorphism type of Z^cols / RowSpace(M)."""
    from .abelian import AbelianGroupType

    snf = smith_normal_form(M)
    return AbelianGroupType(tuple(d for d in snf.invariant_factors if d > 1), snf.free_corank)


# ---------------------------------------------------------------------------
# lattices

def _echelon(rows: list[list[int]], ncols: int) -> list[list[int]]:
    A = [list(r) for r in rows if any(r)]
    r = 0
    for col in range(ncols):
        piv = [i for i in range(r, len(A)) if A[i][col]]
        if not piv:
            continue
        A[r], A[piv[0]] = A[piv[0]], A[r]
        for i in range(r + 1, len(A)):
            b = A[i][col]
            if not b:
                continue
            a = A[r][col]
            g, x, y = _egcd(a, b)
            ag, bg = a // g, b // g
            rr, ri = A[r], A[i]
            A[r] = [x * u + y * v for u, v in zip(rr, ri)]
            A[i] = [ag * v - bg * u for u, v in zip(rr, ri)]
        r += 1
        if r == len(A):
            break
    return A[:r]


def lattice_contains(generators: Sequence[Sequence[int]], target: Sequence[int]) -> bool:
    """Is ``target`` an integer combination of ``generators``?"""
    ncols = len(target)
    basis = _echelon([list(map(int, g)) for g in generators], ncols)
    vec = [int(x) for x in target]
    for row in basis:
        col = next(c for c, x in enumerate(row) if x)
        if vec[col] % row[col]:
            return False
        q = vec[col] // row[col]
        if q:
            vec = [v - q * w for v, w in zip(vec, row)]
    return not any(vec)


def subgroup_order(generators: Sequence[Sequence[int]], moduli: Sequence[int]) -> int:
    """Order of the subgroup of Z/m_1 + ... + Z/m_k spanned by ``generators``."""
    k = len(moduli)
    relations = [[m if i == j else 0 for j in range(k)] for i, m in enumerate(moduli)]
    gens = [list(map(int, g)) for g in generators]
    snf = smith_normal_form(gens + relations)
    return prod(moduli) // prod(snf.invariant_factors)
