"""Sandpile groups of random regular graphs.

Exact linear algebra over Z and Z/p^k, finite abelian group bookkeeping,
graph samplers, the limiting laws for Sylow subgroups, exact mixing
computations on small V^n, and a seeded Monte Carlo harness.
"""

from .abelian import AbelianGroupType, Partition, PGroupType
from .graphs import Seed, sample_graph
from .laws import LawKind, law_prob
from .linalg import cokernel_type, smith_normal_form
from .sandpile import sandpile_group, sylow_of_sandpile

__version__ = "0.1.0"

__all__ = [
    "AbelianGroupType", "Partition", "PGroupType", "Seed", "sample_graph", "LawKind",
    "law_prob", "cokernel_type", "smith_normal_form", "sandpile_group", "sylow_of_sandpile",
]
