"""Monte Carlo drivers: sample replicates, eigensolve, pool.

Replicate ``r`` always uses ``Seed(root, stream=r)``, and spectra are pooled in
replicate order, so results do not depend on the thread count.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from .linalg import eigenvalues
from .sampler import Seed, WignerSpec, build_dependent_wigner, sample_wigner
from .stats import SpectralSample, pool
from .structure import BlockStructure, assemble

__all__ = [
    "sample_assembly",
    "run_replicates",
    "simulate_structure",
    "simulate_dependent",
    "trace_product_variance",
]


def sample_assembly(structure: BlockStructure, spec: WignerSpec, seed: Seed) -> np.ndarray:
    """One draw of ``B_k(A_1, ..., A_h)`` with independent Wigner blocks (block id = symbol id)."""
    blocks = [sample_wigner(spec, seed, block=a).matrix for a in range(structure.alphabet_size)]
    return assemble(structure, blocks)


def run_replicates(task: Callable[[int], np.ndarray], reps: int, threads: int | None = None) -> list:
    """``[task(0), ..., task(reps - 1)]``, possibly evaluated concurrently."""
    threads = threads or os.cpu_count() or 1
    if threads <= 1 or reps <= 1:
        return [task(r) for r in range(reps)]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(task, range(reps)))


def simulate_structure(
    structure: BlockStructure,
    n: int,
    reps: int,
    seed: int,
    entry_law: str = "gaussian",
    flavor: str = "real",
    threads: int | None = None,
) -> SpectralSample:
    spec = WignerSpec(n, entry_law=entry_law, flavor=flavor)

    def task(r):
        return eigenvalues(sample_assembly(structure, spec, Seed(seed, r)))

    return pool(run_replicates(task, reps, threads))


def simulate_dependent(k: int, n: int, reps: int, seed: int, threads: int | None = None) -> SpectralSample:
    def task(r):
        return eigenvalues(build_dependent_wigner(k, n, Seed(seed, r)).matrix)

    return pool(run_replicates(task, reps, threads))


def trace_product_variance(n: int, reps: int, seed: int) -> float:
    """Sample variance of ``tr_n(A B)`` for independent Wigner(n, 1) ``A``, ``B``."""
    spec = WignerSpec(n)
    vals = []
    for r in range(reps):
        a = sample_wigner(spec, Seed(seed, r), block=0).matrix
        b = sample_wigner(spec, Seed(seed, r), block=1).matrix
        # tr(AB) = sum_ij A_ij B_ji
        vals.append(float(np.sum(a * b.T)) / n)
    return float(np.var(vals, ddof=1))
