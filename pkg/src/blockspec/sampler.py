"""Seeded Wigner ensembles, truncation, and the dependent-entry construction.

Randomness comes from Philox, a counter-based generator.  Every matrix is keyed
by ``(root, stream, block)`` through :class:`numpy.random.SeedSequence`, so a
replicate's draws never depend on which other replicates ran or in what
order.  Off-diagonal and diagonal entries use separate sub-keys.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import special

from .linalg import InvalidParameterError
from .structure import circulant_structure

__all__ = [
    "WignerSpec",
    "Seed",
    "WignerSample",
    "TruncationParams",
    "UnsupportedLawError",
    "rng_for",
    "sample_wigner",
    "truncation_params",
    "truncate_standardize",
    "DependentWigner",
    "build_dependent_wigner",
    "extract_scalar_wigners",
    "source_family",
]

Flavor = Literal["real", "complex"]
EntryLaw = Literal["gaussian", "rademacher", "uniform"]
DiagonalLaw = Literal["gaussian", "zero"]

_OFFDIAG, _DIAG = 0, 1


class UnsupportedLawError(ValueError):
    """No closed-form truncation moments for this entry law."""


@dataclass(frozen=True)
class WignerSpec:
    """Wigner(n, sigma2): ``A = X / sqrt(n)`` with i.i.d. centred upper-triangle entries."""

    n: int
    sigma2: float = 1.0
    flavor: Flavor = "real"
    diagonal_law: DiagonalLaw = "gaussian"
    entry_law: EntryLaw = "gaussian"

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameterError(f"n must be >= 1, got {self.n}")
        if not self.sigma2 > 0:
            raise InvalidParameterError(f"sigma2 must be positive, got {self.sigma2}")
        if self.flavor not in ("real", "complex"):
            raise InvalidParameterError(f"unknown flavor {self.flavor!r}")
        if self.diagonal_law not in ("gaussian", "zero"):
            raise InvalidParameterError(f"unknown diagonal law {self.diagonal_law!r}")
        if self.entry_law not in ("gaussian", "rademacher", "uniform"):
            raise InvalidParameterError(f"unknown entry law {self.entry_law!r}")
        if self.flavor == "complex" and self.entry_law != "gaussian":
            raise InvalidParameterError("complex flavor supports the gaussian entry law only")


@dataclass(frozen=True)
class Seed:
    root: int
    stream: int = 0


def rng_for(seed: Seed, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed.root, spawn_key=(seed.stream, *key))
    return np.random.Generator(np.random.Philox(ss))


def _unit_entries(rng: np.random.Generator, law: str, size: int, complex_: bool) -> np.ndarray:
    """Centred draws with ``E|X|^2 = 1``."""
    if complex_:
        g = rng.standard_normal((2, size))
        return (g[0] + 1j * g[1]) / math.sqrt(2.0)
    if law == "gaussian":
        return rng.standard_normal(size)
    if law == "rademacher":
        return rng.integers(0, 2, size).astype(float) * 2.0 - 1.0
    if law == "uniform":
        r3 = math.sqrt(3.0)
        return rng.uniform(-r3, r3, size)
    raise InvalidParameterError(f"unknown entry law {law!r}")


@dataclass(frozen=True, eq=False)
class WignerSample:
    """A sampled Wigner matrix together with its unnormalized entries ``raw = sqrt(n) A``."""

    matrix: np.ndarray
    raw: np.ndarray
    spec: WignerSpec


def sample_wigner(spec: WignerSpec, seed: Seed, block: int = 0) -> WignerSample:
    """Draw one Wigner matrix; deterministic in ``(spec, seed, block)``."""
    n = spec.n
    sigma = math.sqrt(spec.sigma2)
    iu = np.triu_indices(n, 1)
    off = _unit_entries(rng_for(seed, block, _OFFDIAG), spec.entry_law, len(iu[0]), spec.flavor == "complex")
    if spec.diagonal_law == "gaussian":
        diag = rng_for(seed, block, _DIAG).standard_normal(n)
    else:
        diag = np.zeros(n)
    dtype = complex if spec.flavor == "complex" else float
    raw = np.zeros((n, n), dtype=dtype)
    raw[iu] = sigma * off
    raw = raw + raw.conj().T
    raw[np.diag_indices(n)] = sigma * diag
    return WignerSample(raw / math.sqrt(n), raw, spec)


# -- truncation ---------------------------------------------------------------


@dataclass(frozen=True)
class TruncationParams:
    """Cutoff ``c`` with ``mean = E[X 1(|X| <= c)]`` and ``sigma_c2 = Var(X 1(|X| <= c))``."""

    c: float
    mean: float
    sigma_c2: float


def truncation_params(spec: WignerSpec, c: float) -> TruncationParams:
    """Closed-form moments of the truncated entry law.

    All supported laws are symmetric, so the truncated mean is zero and
    ``sigma_c2 = E[|X|^2 ; |X| <= c]``.
    """
    if not c > 0:
        raise InvalidParameterError(f"cutoff must be positive, got {c}")
    s2 = spec.sigma2
    u = c / math.sqrt(s2)  # cutoff in units of the entry standard deviation
    if spec.flavor == "complex":
        # |X|^2 / sigma2 ~ Exp(1)
        frac = 1.0 - (1.0 + u * u) * math.exp(-u * u)
    elif spec.entry_law == "gaussian":
        phi = math.exp(-u * u / 2) / math.sqrt(2 * math.pi)
        frac = special.erf(u / math.sqrt(2)) - 2 * u * phi
    elif spec.entry_law == "uniform":
        r3 = math.sqrt(3.0)
        frac = 1.0 if u >= r3 else u**3 / (3 * r3)
    elif spec.entry_law == "rademacher":
        frac = 1.0 if u >= 1 else 0.0
    else:
        raise UnsupportedLawError(f"no truncation moments for entry law {spec.entry_law!r}")
    if frac <= 0:
        raise UnsupportedLawError(f"cutoff {c} removes all mass of the {spec.entry_law} law")
    return TruncationParams(c, 0.0, s2 * frac)


def truncate_standardize(sample: WignerSample, c: float) -> np.ndarray:
    """Truncate off-diagonal raw entries at ``c``, recentre and rescale; zero diagonal.

    ``X~ = sigma * (X 1(|X| <= c) - mean) / sigma(c)`` so that the entries keep
    the original variance ``sigma^2``; the result is ``X~ / sqrt(n)``.
    """
    params = truncation_params(sample.spec, c)
    raw = sample.raw
    n = raw.shape[0]
    kept = np.where(np.abs(raw) <= c, raw, 0.0)
    scale = math.sqrt(sample.spec.sigma2 / params.sigma_c2)
    out = (kept - params.mean) * scale
    np.fill_diagonal(out, 0.0)
    return out / math.sqrt(n)


# -- dependent entries ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DependentWigner:
    """``K = sum_ij E_ij (x) C_k(a_ij, b_ij, ...)`` together with its scalar families.

    ``scalars[a]`` is the n x n Wigner(n, 1) matrix collecting the a-th scalar of
    every tile.
    """

    matrix: np.ndarray
    scalars: tuple[np.ndarray, ...]
    k: int
    n: int


def build_dependent_wigner(
    k: int, n: int, seed: Seed, entry_law: EntryLaw = "gaussian"
) -> DependentWigner:
    """kn x kn symmetric matrix whose n x n grid of k x k tiles are symmetric circulants.

    Tile (i, j) is ``C_k`` applied to fresh scalars ``(a_ij, b_ij, ...)``, scaled
    by ``1/sqrt(n)`` so the matrix has the Wigner normalization.
    """
    if k < 1 or n < 1:
        raise InvalidParameterError(f"k and n must be >= 1, got k={k}, n={n}")
    structure = circulant_structure(k)
    spec = WignerSpec(n, entry_law=entry_law)
    scalars = tuple(sample_wigner(spec, seed, block=a).matrix for a in range(structure.alphabet_size))
    K = sum(np.kron(w, structure.indicator(a)) for a, w in enumerate(scalars))
    for w in scalars:
        w.setflags(write=False)
    return DependentWigner(K, scalars, k, n)


def extract_scalar_wigners(dep: DependentWigner) -> list[np.ndarray]:
    return list(dep.scalars)


def source_family(k: int, row: int, col: int) -> tuple[int, int, int]:
    """Which scalar feeds entry ``(row, col)`` of the dependent matrix.

    Returns ``(i, j, symbol)`` with ``i <= j`` the unordered tile and ``symbol``
    the circulant letter; two entries share a random variable iff these agree.
    """
    i, r = divmod(row, k)
    j, s = divmod(col, k)
    d = (s - r) % k
    return min(i, j), max(i, j), min(d, k - d)
