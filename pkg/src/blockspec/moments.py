"""Limiting spectral moments of block structures with free semicircular blocks.

For free standard semicirculars the mixed moment of a word counts the
non-crossing pair partitions whose pairs join equal letters.  The s-th moment
of ``B_k(a_1, ..., a_h)`` under ``tau (x) tr_k`` is then

    (1/k) * sum over closed index paths (j_1 .. j_s) of
        prod_t coef[j_t, j_{t+1}] * word_moment(symbol[j_1, j_2] ... symbol[j_s, j_1])

which :func:`limiting_moment` evaluates directly.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .structure import BlockStructure

__all__ = [
    "CapacityError",
    "DEFAULT_BUDGET",
    "default_budget",
    "catalan",
    "enumerate_nc2",
    "enumerate_pairings",
    "is_noncrossing",
    "word_moment",
    "canonical_word",
    "limiting_moment",
    "limiting_moment_table",
    "limiting_moments_recursive",
    "MomentTable",
]

DEFAULT_BUDGET = 10**9
MAX_CATALAN = 30
MAX_NC2_LENGTH = 20
_CHUNK = 1 << 18


class CapacityError(RuntimeError):
    """Requested computation exceeds a configured size limit."""


def default_budget() -> int:
    """Work budget for :func:`limiting_moment`; ``BLOCKSPEC_BUDGET`` overrides it."""
    raw = os.environ.get("BLOCKSPEC_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(float(raw))
    except ValueError:
        raise ValueError(f"BLOCKSPEC_BUDGET must be a number, got {raw!r}") from None


def catalan(s: int) -> int:
    if s < 0:
        raise ValueError(f"Catalan index must be nonnegative, got {s}")
    if s > MAX_CATALAN:
        raise CapacityError(f"catalan({s}) exceeds the 64-bit range guard (s <= {MAX_CATALAN})")
    return math.comb(2 * s, s) // (s + 1)


Pairing = tuple[tuple[int, int], ...]


@lru_cache(maxsize=None)
def _nc2(lo: int, hi: int) -> tuple[Pairing, ...]:
    # non-crossing pairings of range(lo, hi); lo pairs with p, then inside, then outside
    if lo == hi:
        return ((),)
    out = []
    for p in range(lo + 1, hi, 2):
        for inner in _nc2(lo + 1, p):
            for outer in _nc2(p + 1, hi):
                out.append(((lo, p),) + inner + outer)
    return tuple(out)


def enumerate_nc2(m: int) -> list[Pairing]:
    """All non-crossing pair partitions of ``{0, ..., m-1}``.

    Each pairing is a tuple of ``(a, b)`` with ``a < b``.  Order is canonical:
    the partner of the smallest open element increases first, recursively.
    """
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    if m > MAX_NC2_LENGTH:
        raise CapacityError(f"enumerate_nc2({m}) exceeds the limit m <= {MAX_NC2_LENGTH}")
    if m % 2:
        return []
    return list(_nc2(0, m))


def enumerate_pairings(m: int) -> list[Pairing]:
    """All pair partitions of ``{0, ..., m-1}``, crossing or not ((m-1)!! of them)."""
    if m % 2:
        return []

    def rec(rest):
        if not rest:
            yield ()
            return
        a = rest[0]
        for idx in range(1, len(rest)):
            b = rest[idx]
            for tail in rec(rest[1:idx] + rest[idx + 1:]):
                yield ((a, b),) + tail

    return list(rec(tuple(range(m))))


def is_noncrossing(pairing: Pairing) -> bool:
    for a, c in pairing:
        for b, d in pairing:
            if a < b < c < d:
                return False
    return True


def canonical_word(labels: Sequence[int]) -> tuple[int, ...]:
    """Relabel by order of first occurrence, e.g. ``(5, 2, 5) -> (0, 1, 0)``."""
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(x, len(seen)) for x in labels)


@lru_cache(maxsize=1 << 16)
def _word_moment_canonical(word: tuple[int, ...]) -> int:
    m = len(word)
    # count[i][j]: label-matched NC pairings of word[i:j]
    count = [[0] * (m + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        count[i][i] = 1
    for length in range(2, m + 1, 2):
        for i in range(0, m - length + 1):
            j = i + length
            total = 0
            for p in range(i + 1, j, 2):
                if word[p] == word[i]:
                    total += count[i + 1][p] * count[p + 1][j]
            count[i][j] = total
    return count[0][m]


def word_moment(labels: Sequence[int]) -> int:
    """``tau(a_{l_1} ... a_{l_m})`` for free standard semicirculars."""
    m = len(labels)
    if m > MAX_NC2_LENGTH:
        raise CapacityError(f"word length {m} exceeds the limit {MAX_NC2_LENGTH}")
    if m % 2:
        return 0
    return _word_moment_canonical(canonical_word(labels))


def _work(k: int, s: int) -> int:
    return k**s * catalan(s // 2)


def limiting_moment(structure: BlockStructure, s: int, budget: int | None = None) -> float:
    """``tau (x) tr_k (B^s)`` by summing over all closed index paths.

    Raises
    ------
    CapacityError
        If ``k**s * catalan(s // 2)`` exceeds ``budget``.
    """
    if s < 0:
        raise ValueError(f"moment order must be nonnegative, got {s}")
    if s == 0:
        return 1.0
    if s % 2:
        return 0.0
    k = structure.k
    budget = default_budget() if budget is None else budget
    if s > MAX_NC2_LENGTH or _work(k, s) > budget:
        raise CapacityError(
            f"moment of order {s} for k={k} needs k^s * catalan(s/2) = {_work(k, s):.3g} "
            f"steps, above the budget {budget:.3g} (set BLOCKSPEC_BUDGET to raise it)"
        )
    sym = structure.symbols
    coef = structure.coefs
    # Enumerate paths in lexicographic order, in chunks over the leading indices.
    tail = s
    while tail > 1 and k**tail > _CHUNK:
        tail -= 1
    head = s - tail
    tail_idx = np.indices((k,) * tail).reshape(tail, -1).T
    total = 0.0
    for prefix in np.ndindex(*((k,) * head)):
        paths = np.empty((tail_idx.shape[0], s), dtype=np.int64)
        paths[:, :head] = prefix
        paths[:, head:] = tail_idx
        nxt = np.roll(paths, -1, axis=1)
        words = sym[paths, nxt]
        weights = np.prod(coef[paths, nxt], axis=1)
        uniq, inverse = np.unique(words, axis=0, return_inverse=True)
        per_word = np.bincount(inverse.ravel(), weights=weights, minlength=len(uniq))
        counts = np.array([word_moment(tuple(w)) for w in uniq.tolist()], dtype=float)
        total += float(per_word @ counts)
    return total / k


def limiting_moments_recursive(structure: BlockStructure, s_max: int) -> list[float]:
    """Same moments via the matrix-valued semicircle recursion.

    With ``M_a`` the coefficient pattern of symbol ``a`` and
    ``eta(D) = sum_a M_a D M_a``, the matrix moments obey
    ``E_m = sum_{i + j = m - 2} eta(E_i) E_j``; the scalar moment is
    ``trace(E_m) / k``.  Independent of the path enumeration above.
    """
    k = structure.k
    mats = [structure.indicator(a) for a in range(structure.alphabet_size)]

    def eta(d):
        return sum(m @ d @ m for m in mats)

    E = [np.eye(k)]
    for m in range(1, s_max + 1):
        if m % 2:
            E.append(np.zeros((k, k)))
            continue
        E.append(sum(eta(E[i]) @ E[m - 2 - i] for i in range(0, m - 1, 2)))
    return [float(np.trace(e)) / k for e in E]


@dataclass(frozen=True)
class MomentTable:
    structure: BlockStructure
    moments: tuple[float, ...]

    def __getitem__(self, s: int) -> float:
        return self.moments[s]

    def __len__(self):
        return len(self.moments)


def limiting_moment_table(
    structure: BlockStructure, s_max: int, budget: int | None = None
) -> MomentTable:
    """Moments of orders ``0 .. s_max``.

    Every even moment is checked against ``(k c)^(2t) * catalan(t)`` with ``c``
    the largest coefficient magnitude.
    """
    if s_max < 0:
        raise ValueError(f"s_max must be nonnegative, got {s_max}")
    k = structure.k
    cmax = float(np.abs(structure.coefs).max())
    moments = []
    for s in range(s_max + 1):
        m = limiting_moment(structure, s, budget)
        if s % 2 == 0:
            bound = (k * cmax) ** s * catalan(s // 2)
            assert -1e-9 <= m <= bound * (1 + 1e-9) + 1e-12, (s, m, bound)
        moments.append(m)
    return MomentTable(structure, tuple(moments))
