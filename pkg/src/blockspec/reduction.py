"""Block-diagonalization of symmetric circulant block matrices.

The symmetric circulant ``C_k(A_1, ..., A_{floor(k/2)+1})`` has the same
spectrum as the k matrices

    B(j) = (A_1 + 2 sum_{l=2}^{L} cos(2 pi (l-1)(j-1)/k) A_l [+ cos((j-1) pi) A_{k/2+1}]) / sqrt(k)

where ``L = (k+1)/2`` for odd k and ``k/2`` for even k, and the bracketed term
appears only for even k.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .laws import circulant_component_variance
from .linalg import check_hermitian, eigenvalues
from .sampler import Seed, WignerSpec, sample_wigner
from .structure import StructureError, assemble, circulant_structure

__all__ = [
    "ReducedFamily",
    "reduction_weights",
    "reduce_circulant",
    "verify_reduction",
    "reduced_variance_check",
    "VarianceCheck",
]


@dataclass(frozen=True, eq=False)
class ReducedFamily:
    k: int
    members: tuple[np.ndarray, ...]

    @property
    def parity(self) -> str:
        return "odd" if self.k % 2 else "even"


def reduction_weights(k: int) -> np.ndarray:
    """``W[j-1, l-1]``: coefficient of ``A_l`` in ``B(j)``, including ``1/sqrt(k)``."""
    h = k // 2 + 1
    W = np.zeros((k, h))
    for j in range(1, k + 1):
        W[j - 1, 0] = 1.0
        last = (k + 1) // 2 if k % 2 else k // 2
        for l in range(2, last + 1):
            W[j - 1, l - 1] = 2.0 * math.cos(2.0 * math.pi * (l - 1) * (j - 1) / k)
        if k % 2 == 0 and k >= 2:
            W[j - 1, h - 1] = math.cos((j - 1) * math.pi)
    return W / math.sqrt(k)


def _check_blocks(blocks: Sequence[np.ndarray], k: int) -> list[np.ndarray]:
    if k < 1:
        raise StructureError(f"k must be >= 1, got {k}")
    h = k // 2 + 1
    if len(blocks) != h:
        raise StructureError(f"circulant of order {k} needs {h} blocks, got {len(blocks)}")
    mats = [check_hermitian(b) for b in blocks]
    if len({m.shape for m in mats}) != 1:
        raise StructureError("blocks have differing dimensions")
    return mats


def reduce_circulant(blocks: Sequence[np.ndarray], k: int) -> ReducedFamily:
    mats = _check_blocks(blocks, k)
    W = reduction_weights(k)
    members = tuple(sum(W[j, l] * mats[l] for l in range(len(mats))) for j in range(k))
    return ReducedFamily(k, members)


def verify_reduction(blocks: Sequence[np.ndarray], k: int) -> float:
    """Max difference between the sorted spectrum of ``C_k(blocks)`` and of all ``B(j)`` together."""
    mats = _check_blocks(blocks, k)
    full = eigenvalues(assemble(circulant_structure(k), mats))
    fam = reduce_circulant(mats, k)
    parts = np.sort(np.concatenate([eigenvalues(b) for b in fam.members]))
    return float(np.abs(full - parts).max())


@dataclass(frozen=True)
class VarianceCheck:
    """Per-j sample variance of the off-diagonal entries of ``sqrt(n) B(j)``."""

    k: int
    variances: tuple[float, ...]
    expected: tuple[float, ...]
    std_errors: tuple[float, ...]

    def within(self, n_se: float = 3.0) -> bool:
        return all(abs(v - e) <= n_se * s for v, e, s in zip(self.variances, self.expected, self.std_errors))


def reduced_variance_check(k: int, n: int, reps: int, seed: Seed | int) -> VarianceCheck:
    if isinstance(seed, int):
        seed = Seed(seed)
    h = k // 2 + 1
    spec = WignerSpec(n)
    iu = np.triu_indices(n, 1)
    collected = [[] for _ in range(k)]
    for r in range(reps):
        s = Seed(seed.root, seed.stream + r)
        blocks = [sample_wigner(spec, s, block=a).matrix for a in range(h)]
        fam = reduce_circulant(blocks, k)
        for j, b in enumerate(fam.members):
            collected[j].append(b[iu] * math.sqrt(n))
    vars_, ses, expected = [], [], []
    for j in range(k):
        x = np.concatenate(collected[j])
        v = float(np.var(x))
        vars_.append(v)
        e = circulant_component_variance(k, j + 1)
        expected.append(e)
        ses.append(e * math.sqrt(2.0 / x.size))
    return VarianceCheck(k, tuple(vars_), tuple(expected), tuple(ses))
