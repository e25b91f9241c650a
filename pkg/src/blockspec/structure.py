"""Symmetric block structures and their assembly into block matrices.

A structure is a symmetric k x k pattern whose entries pair a symbol from a
finite alphabet with a real coefficient.  Substituting n x n Hermitian blocks
for the symbols gives an nk x nk Hermitian matrix.  Symbols are dense integer
ids ``0 .. h-1``; human-readable names only matter for the JSON file format.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .linalg import check_hermitian

__all__ = [
    "StructureError",
    "BlockStructure",
    "circulant_symbol",
    "circulant_structure",
    "toeplitz_structure",
    "full_wigner_structure",
    "load_structure",
    "dump_structure",
    "assemble",
    "relabel",
]


class StructureError(ValueError):
    """Malformed or inconsistent block structure."""


@dataclass(frozen=True, eq=False)
class BlockStructure:
    """Symmetric k x k pattern of (coefficient, symbol) entries.

    Parameters
    ----------
    symbols : array_like of int, shape (k, k)
        Symbol id of each block position, in ``0 .. h-1``.
    coefs : array_like of float, shape (k, k)
        Scalar weight of each block position.
    names : sequence of str, optional
        Display name per symbol id.  Defaults to ``a1, a2, ...``.
    """

    symbols: np.ndarray
    coefs: np.ndarray
    names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        sym = np.array(self.symbols, dtype=np.int64)
        coef = np.array(self.coefs, dtype=np.float64)
        if sym.ndim != 2 or sym.shape[0] != sym.shape[1] or sym.shape[0] < 1:
            raise StructureError(f"symbols must be a nonempty square array, got shape {sym.shape}")
        if coef.shape != sym.shape:
            raise StructureError(f"coefs shape {coef.shape} does not match symbols {sym.shape}")
        if not np.all(np.isfinite(coef)):
            raise StructureError("coefficients must be finite")
        k = sym.shape[0]
        for i in range(k):
            for j in range(i + 1, k):
                if sym[i, j] != sym[j, i] or coef[i, j] != coef[j, i]:
                    raise StructureError(f"structure is not symmetric at ({i}, {j})")
        h = int(sym.max()) + 1
        if sym.min() < 0:
            raise StructureError("symbol ids must be nonnegative")
        unused = sorted(set(range(h)) - set(np.unique(sym).tolist()))
        if unused:
            raise StructureError(f"symbol ids {unused} are never used")
        names = tuple(self.names) or tuple(f"a{i + 1}" for i in range(h))
        if len(names) != h:
            raise StructureError(f"expected {h} symbol names, got {len(names)}")
        sym.setflags(write=False)
        coef.setflags(write=False)
        object.__setattr__(self, "symbols", sym)
        object.__setattr__(self, "coefs", coef)
        object.__setattr__(self, "names", names)

    @property
    def k(self) -> int:
        return self.symbols.shape[0]

    @property
    def alphabet_size(self) -> int:
        return len(self.names)

    def scaled(self, t: float) -> "BlockStructure":
        return BlockStructure(self.symbols, t * self.coefs, self.names)

    def indicator(self, symbol: int) -> np.ndarray:
        """k x k matrix with the coefficient where ``symbol`` sits, 0 elsewhere."""
        return np.where(self.symbols == symbol, self.coefs, 0.0)

    def __eq__(self, other):
        if not isinstance(other, BlockStructure):
            return NotImplemented
        return (
            np.array_equal(self.symbols, other.symbols)
            and np.array_equal(self.coefs, other.coefs)
            and self.names == other.names
        )

    __hash__ = None

    def __repr__(self):
        return f"BlockStructure(k={self.k}, alphabet_size={self.alphabet_size})"


def circulant_symbol(k: int, offset: int) -> int:
    """Symbol id at cyclic offset ``(j - i) mod k`` after folding ``a_j = a_{k-j+2}``."""
    d = offset % k
    return min(d, k - d)


def circulant_structure(k: int) -> BlockStructure:
    """Symmetric circulant with ``floor(k/2) + 1`` symbols and weight ``1/sqrt(k)``."""
    if k < 1:
        raise StructureError(f"k must be >= 1, got {k}")
    i, j = np.indices((k, k))
    sym = np.minimum((j - i) % k, (i - j) % k)
    return BlockStructure(sym, np.full((k, k), 1.0 / math.sqrt(k)))


def toeplitz_structure(k: int) -> BlockStructure:
    if k < 1:
        raise StructureError(f"k must be >= 1, got {k}")
    i, j = np.indices((k, k))
    return BlockStructure(np.abs(i - j), np.ones((k, k)))


def full_wigner_structure(k: int) -> BlockStructure:
    """One independent symbol per unordered position pair, ``k(k+1)/2`` in all."""
    if k < 1:
        raise StructureError(f"k must be >= 1, got {k}")
    sym = np.zeros((k, k), dtype=np.int64)
    names = []
    for i in range(k):
        for j in range(i, k):
            sym[i, j] = sym[j, i] = len(names)
            names.append(f"a{i + 1}{j + 1}" if k < 10 else f"a{i + 1}_{j + 1}")
    return BlockStructure(sym, np.ones((k, k)), tuple(names))


def relabel(structure: BlockStructure, perm: Sequence[int]) -> BlockStructure:
    """Rename symbol ``a`` to ``perm[a]``."""
    perm = np.asarray(perm)
    names = [""] * structure.alphabet_size
    for old, new in enumerate(perm):
        names[new] = structure.names[old]
    return BlockStructure(perm[structure.symbols], structure.coefs, tuple(names))


# -- file format -------------------------------------------------------------


def _fail(msg: str, doc: str, pos: int | None = None):
    if pos is not None:
        line = doc.count("\n", 0, pos) + 1
        col = pos - (doc.rfind("\n", 0, pos) + 1) + 1
        raise StructureError(f"line {line}, column {col}: {msg}")
    raise StructureError(msg)


def load_structure(text: str) -> BlockStructure:
    """Parse a structure file.

    The format is JSON::

        {"k": 3, "symbols": ["a", "b"],
         "entries": [[{"sym": "a", "coef": 0.577}, ...], ...]}

    ``coef`` defaults to 1.  Symmetry and symbol usage are validated.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        _fail("top level must be an object", text)
    for key in ("k", "symbols", "entries"):
        if key not in doc:
            _fail(f"missing key {key!r}", text)
    k = doc["k"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        _fail(f"'k' must be a positive integer, got {k!r}", text)
    names = doc["symbols"]
    if not isinstance(names, list) or not all(isinstance(s, str) for s in names):
        _fail("'symbols' must be a list of strings", text)
    if len(set(names)) != len(names):
        _fail("duplicate symbol names", text)
    ids = {name: i for i, name in enumerate(names)}
    rows = doc["entries"]
    if not isinstance(rows, list) or len(rows) != k or any(
        not isinstance(r, list) or len(r) != k for r in rows
    ):
        _fail(f"'entries' must be a {k}x{k} array", text)
    sym = np.zeros((k, k), dtype=np.int64)
    coef = np.ones((k, k))
    for i, row in enumerate(rows):
        for j, cell in enumerate(row):
            if not isinstance(cell, dict) or "sym" not in cell:
                _fail(f"entry ({i}, {j}) must be an object with a 'sym' field", text)
            if cell["sym"] not in ids:
                _fail(f"entry ({i}, {j}) uses undeclared symbol {cell['sym']!r}", text)
            sym[i, j] = ids[cell["sym"]]
            c = cell.get("coef", 1.0)
            if isinstance(c, bool) or not isinstance(c, (int, float)) or not math.isfinite(c):
                _fail(f"entry ({i}, {j}) has a non-numeric coefficient {c!r}", text)
            coef[i, j] = c
    for i in range(k):
        for j in range(i + 1, k):
            if sym[i, j] != sym[j, i] or coef[i, j] != coef[j, i]:
                _fail(f"symmetry violated: entries ({i}, {j}) and ({j}, {i}) differ", text)
    unused = [names[a] for a in range(len(names)) if not np.any(sym == a)]
    if unused:
        _fail(f"declared symbols never used: {', '.join(unused)}", text)
    return BlockStructure(sym, coef, tuple(names))


def dump_structure(structure: BlockStructure) -> str:
    entries = [
        [
            {"sym": structure.names[structure.symbols[i, j]], "coef": float(structure.coefs[i, j])}
            for j in range(structure.k)
        ]
        for i in range(structure.k)
    ]
    doc = {"k": structure.k, "symbols": list(structure.names), "entries": entries}
    return json.dumps(doc, indent=1)


# -- assembly ----------------------------------------------------------------


def assemble(structure: BlockStructure, blocks: Sequence | Mapping[int, np.ndarray]) -> np.ndarray:
    """Substitute ``blocks[symbol]`` (n x n Hermitian) into the structure.

    Block ``(i, j)`` of the result is ``coefs[i, j] * blocks[symbols[i, j]]``.
    """
    h = structure.alphabet_size
    mats = []
    for a in range(h):
        try:
            mats.append(np.asarray(blocks[a]))
        except (KeyError, IndexError):
            raise StructureError(f"no block supplied for symbol {structure.names[a]!r}") from None
    n = mats[0].shape[0] if mats[0].ndim == 2 else -1
    for a, m in enumerate(mats):
        if m.shape != (n, n):
            raise StructureError(
                f"block for symbol {structure.names[a]!r} has shape {m.shape}, expected ({n}, {n})"
            )
        check_hermitian(m)
    k = structure.k
    dtype = np.result_type(*mats, np.float64)
    out = np.empty((n * k, n * k), dtype=dtype)
    for i in range(k):
        for j in range(k):
            out[i * n:(i + 1) * n, j * n:(j + 1) * n] = structure.coefs[i, j] * mats[structure.symbols[i, j]]
    return out
