"""Random matrices over Z/p^k and the cokernel statistics they induce.

Haar measure on matrices over the p-adic integers, read modulo p^k, is
entrywise uniform; the symmetric variants are uniform subject to symmetry
(and, for the even-diagonal model, even diagonal residues).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .abelian import PGroupType
from .graphs import SeedLike, as_seed
from .laws import LawKind
from .linalg import ModMatrix, snf_mod_pk

GUARD_DIGITS = 4
KINDS = ("square", "symmetric", "symmetric-even")


@dataclass(frozen=True)
class MatrixModel:
    """kind is one of square, symmetric, symmetric-even (the last needs p = 2)."""

    kind: str
    p: int
    k: int
    n: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown matrix model {self.kind!r}; expected one of {KINDS}")
        if self.k < 1 or self.n < 1:
            raise ValueError("need k >= 1 and n >= 1")
        if self.kind == "symmetric-even" and self.p != 2:
            raise ValueError("the even-diagonal model is defined for p = 2 only")

    @classmethod
    def with_guard(cls, kind: str, p: int, cap: int, n: int) -> "MatrixModel":
        """Model read modulo p^(cap + guard digits)."""
        return cls(kind, p, cap + GUARD_DIGITS, n)

    @property
    def modulus(self) -> int:
        return self.p ** self.k


def _uniform(rng: np.random.Generator, modulus: int, shape) -> np.ndarray:
    if modulus < 2 ** 62:
        return rng.integers(0, modulus, size=shape, dtype=np.int64)
    # assemble big residues from 62-bit limbs
    out = np.zeros(shape, dtype=object)
    bits = modulus.bit_length() + 64
    for _ in range(0, bits, 62):
        out = out * (1 << 62) + rng.integers(0, 1 << 62, size=shape, dtype=np.int64).astype(object)
    return out % modulus


def sample_matrix(model: MatrixModel, seed: SeedLike) -> ModMatrix:
    rng = as_seed(seed).rng(0)
    n, m = model.n, model.modulus
    a = _uniform(rng, m, (n, n))
    if model.kind != "square":
        upper = np.triu(a)
        a = upper + np.triu(a, 1).T
    if model.kind == "symmetric-even":
        diag = 2 * _uniform(rng, m // 2, (n,))
        np.fill_diagonal(a, diag)
    return ModMatrix(m, a)


def cokernel_sylow(sample: ModMatrix, p: int, cap: int,
                   with_flag: bool = False) -> PGroupType | tuple[PGroupType, bool]:
    """p-part of the cokernel of the sample, exponents capped at cap."""
    if p ** cap > sample.modulus or sample.modulus % p ** cap:
        raise ValueError(f"cap {cap} exceeds the precision of the sample")
    exps = snf_mod_pk(sample, p, cap)
    G = PGroupType(p, exps)
    if with_flag:
        return G, bool(exps) and max(exps) >= cap
    return G


def model_reference_law(model: MatrixModel | str) -> LawKind:
    """The limit law each model is compared against (odd n for symmetric-even)."""
    kind = model.kind if isinstance(model, MatrixModel) else model
    return {"square": LawKind.DirectedRegular,
            "symmetric": LawKind.UndirectedOddD,
            "symmetric-even": LawKind.UndirectedEvenD}[kind]
