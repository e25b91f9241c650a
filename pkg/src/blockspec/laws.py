"""Closed-form limiting laws: semicircles and finite semicircle mixtures.

``Semicircle(center, variance)`` has density
``sqrt(4 var - (x - center)^2) / (2 pi var)`` on ``[center - 2 sd, center + 2 sd]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "Semicircle",
    "SemicircleMixture",
    "semicircle_pdf",
    "semicircle_cdf",
    "semicircle_moment",
    "nu_k",
    "wigner_law",
    "mixture_pdf",
    "mixture_cdf",
    "mixture_moment",
    "cos2_sum",
    "cos2_sum_direct",
    "circulant_component_variance",
    "circulant_component_variance_closed",
    "component_variances",
]


@dataclass(frozen=True)
class Semicircle:
    center: float = 0.0
    variance: float = 1.0

    def __post_init__(self):
        if not self.variance > 0:
            raise ValueError(f"semicircle variance must be positive, got {self.variance}")

    @property
    def radius(self) -> float:
        return 2.0 * math.sqrt(self.variance)

    @property
    def support(self) -> tuple[float, float]:
        return self.center - self.radius, self.center + self.radius


@dataclass(frozen=True)
class SemicircleMixture:
    """Convex combination of semicircle laws, stored as ``(weight, Semicircle)`` pairs."""

    components: tuple[tuple[float, Semicircle], ...]

    def __post_init__(self):
        comps = tuple((float(w), law) for w, law in self.components)
        if not comps:
            raise ValueError("mixture needs at least one component")
        if any(not w > 0 for w, _ in comps):
            raise ValueError("mixture weights must be positive")
        if abs(sum(w for w, _ in comps) - 1.0) > 1e-12:
            raise ValueError("mixture weights must sum to 1")
        object.__setattr__(self, "components", comps)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(w for w, _ in self.components)

    @property
    def variances(self) -> tuple[float, ...]:
        return tuple(law.variance for _, law in self.components)

    @property
    def support(self) -> tuple[float, float]:
        lo = min(law.support[0] for _, law in self.components)
        hi = max(law.support[1] for _, law in self.components)
        return lo, hi

    def pdf(self, x):
        return mixture_pdf(self, x)

    def cdf(self, x):
        return mixture_cdf(self, x)

    def moment(self, s: int) -> float:
        return mixture_moment(self, s)


def semicircle_pdf(law: Semicircle, x):
    x = np.asarray(x, dtype=float)
    u2 = 4.0 * law.variance - (x - law.center) ** 2
    out = np.sqrt(np.clip(u2, 0.0, None)) / (2.0 * math.pi * law.variance)
    return out if out.ndim else float(out)


def semicircle_cdf(law: Semicircle, x):
    x = np.asarray(x, dtype=float)
    u = np.clip((x - law.center) / law.radius, -1.0, 1.0)
    out = 0.5 + (u * np.sqrt(1.0 - u * u) + np.arcsin(u)) / math.pi
    out = np.clip(out, 0.0, 1.0)
    return out if out.ndim else float(out)


def semicircle_moment(law: Semicircle, s: int) -> float:
    """``E[X^s]``: Catalan numbers times powers of the variance, shifted binomially."""
    if s < 0:
        raise ValueError(f"moment order must be nonnegative, got {s}")

    def central(r):
        if r % 2:
            return 0.0
        t = r // 2
        return math.comb(2 * t, t) / (t + 1) * law.variance**t

    if law.center == 0:
        return central(s)
    return sum(math.comb(s, r) * law.center ** (s - r) * central(r) for r in range(0, s + 1, 2))


def wigner_law(sigma2: float = 1.0) -> SemicircleMixture:
    return SemicircleMixture(((1.0, Semicircle(0.0, sigma2)),))


def nu_k(k: int) -> SemicircleMixture:
    """Limiting law of the symmetric circulant block matrix with k Wigner(n, 1) blocks.

    k = 2 collapses to the single component ``Semicircle(0, 1)`` because the
    small component's weight ``(k - 2)/k`` vanishes.
    """
    if k < 2:
        raise ValueError(f"nu_k needs k >= 2 (k = 1 is the plain semicircle), got {k}")
    if k % 2:
        parts = [((k - 1) / k, (k - 1) / k), (1 / k, (2 * k - 1) / k)]
    else:
        parts = [((k - 2) / k, (k - 2) / k), (2 / k, (2 * k - 2) / k)]
    return SemicircleMixture(tuple((w, Semicircle(0.0, v)) for w, v in parts if w > 0))


def mixture_pdf(mix: SemicircleMixture, x):
    return sum(w * semicircle_pdf(law, x) for w, law in mix.components)


def mixture_cdf(mix: SemicircleMixture, x):
    return sum(w * semicircle_cdf(law, x) for w, law in mix.components)


def mixture_moment(mix: SemicircleMixture, s: int) -> float:
    return sum(w * semicircle_moment(law, s) for w, law in mix.components)


# -- circulant variance bookkeeping -------------------------------------------


def cos2_sum_direct(N: int, x: float) -> float:
    return float(sum(math.cos(l * x) ** 2 for l in range(N + 1)))


def cos2_sum(N: int, x: float) -> float:
    """``sum_{l=0}^{N} cos^2(l x)`` in closed form.

    Uses ``(N + 3/2 + sin((2N+1)x) / (2 sin x)) / 2``, which follows from
    ``cos^2 = (1 + cos 2t)/2`` and the Dirichlet kernel.  Falls back to direct
    summation when ``sin x`` is numerically zero.
    """
    if N < 0:
        raise ValueError(f"N must be nonnegative, got {N}")
    sx = math.sin(x)
    if abs(sx) < 1e-9:
        return cos2_sum_direct(N, x)
    return 0.5 * (N + 1.5 + math.sin((2 * N + 1) * x) / (2.0 * sx))


def circulant_component_variance_closed(k: int, j: int) -> float:
    if k % 2:
        return (2 * k - 1) / k if j == 1 else (k - 1) / k
    return (2 * k - 2) / k if j in (1, k // 2 + 1) else (k - 2) / k


def circulant_component_variance(k: int, j: int) -> float:
    """Off-diagonal entry variance of the j-th reduced matrix (1-based j).

    The reduced matrix is ``(A_1 + 2 sum_l cos(2 pi (l-1)(j-1)/k) A_l [+ (-1)^(j-1) A_{k/2+1}]) / sqrt(k)``
    with independent unit-variance blocks, so its variance is
    ``(1 + 4 sum_l cos^2(...) [+ 1]) / k``; the cosine sum is evaluated with
    :func:`cos2_sum`.
    """
    if not 1 <= j <= k:
        raise ValueError(f"j must lie in [1, {k}], got {j}")
    if k == 1:
        return 1.0
    x = 2.0 * math.pi * (j - 1) / k
    if k % 2:
        N = (k - 1) // 2
        inner = cos2_sum(N, x) - 1.0  # drop the l = 0 term
        var = (1.0 + 4.0 * inner) / k
    else:
        N = k // 2 - 1
        inner = cos2_sum(N, x) - 1.0
        var = (2.0 + 4.0 * inner) / k
    closed = circulant_component_variance_closed(k, j)
    assert abs(var - closed) <= 1e-10, (k, j, var, closed)
    return var


def component_variances(k: int) -> Sequence[float]:
    return [circulant_component_variance(k, j) for j in range(1, k + 1)]
