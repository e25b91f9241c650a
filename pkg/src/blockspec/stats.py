"""Empirical spectral distributions pooled over Monte Carlo replicates."""
from __future__ import annotations

import csv
import heapq
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "SpectralSample",
    "Histogram",
    "esd",
    "pool",
    "empirical_moment",
    "ecdf",
    "ks_distance",
    "histogram",
    "default_range",
    "write_histogram_csv",
    "write_sample_csv",
]


@dataclass(frozen=True, eq=False)
class SpectralSample:
    values: np.ndarray
    replicate_count: int
    matrix_dim: int

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("spectral sample must be a nonempty 1-d array")
        if v.size != self.replicate_count * self.matrix_dim:
            raise ValueError(
                f"{v.size} values do not match {self.replicate_count} replicates of dimension {self.matrix_dim}"
            )
        if np.any(np.diff(v) < 0):
            raise ValueError("spectral sample must be sorted ascending")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size


@dataclass(frozen=True, eq=False)
class Histogram:
    bin_edges: np.ndarray
    densities: np.ndarray

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    @property
    def centers(self) -> np.ndarray:
        return (self.bin_edges[:-1] + self.bin_edges[1:]) / 2

    @property
    def mass(self) -> float:
        return float(np.sum(self.densities * self.widths))


def esd(values: np.ndarray | Sequence[float]) -> SpectralSample:
    """Spectral sample of a single matrix's eigenvalues."""
    v = np.sort(np.asarray(values, dtype=float).ravel())
    if v.size == 0:
        raise ValueError("cannot build an ESD from an empty eigenvalue pool")
    return SpectralSample(v, 1, v.size)


def pool(spectra: Iterable[np.ndarray]) -> SpectralSample:
    """Merge per-replicate spectra (each sorted) into one sample, in a fixed order."""
    spectra = [np.sort(np.asarray(s, dtype=float).ravel()) for s in spectra]
    if not spectra or spectra[0].size == 0:
        raise ValueError("cannot pool an empty list of spectra")
    dims = {s.size for s in spectra}
    if len(dims) != 1:
        raise ValueError(f"replicates have differing dimensions {sorted(dims)}")
    merged = np.fromiter(heapq.merge(*spectra), dtype=float, count=sum(s.size for s in spectra))
    return SpectralSample(merged, len(spectra), dims.pop())


def empirical_moment(sample: SpectralSample, s: int) -> float:
    if s == 0:
        return 1.0
    return float(np.mean(sample.values**s))


def ecdf(sample: SpectralSample, x) -> np.ndarray:
    return np.searchsorted(sample.values, x, side="right") / len(sample)


def ks_distance(sample: SpectralSample, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """One-sample Kolmogorov-Smirnov statistic ``sup |F_hat - F|`` against a continuous CDF."""
    x = sample.values
    m = x.size
    f = np.asarray(cdf(x), dtype=float)
    upper = np.arange(1, m + 1) / m - f
    lower = f - np.arange(m) / m
    return float(max(upper.max(), lower.max(), 0.0))


def default_range(sample: SpectralSample) -> tuple[float, float]:
    r = max(3.0, float(np.abs(sample.values).max()))
    return -r, r


def histogram(sample: SpectralSample, bins: int, range: tuple[float, float] | None = None) -> Histogram:
    """Equal-width density histogram; the default range is symmetric, at least [-3, 3]."""
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    if range is None:
        range = default_range(sample)
    counts, edges = np.histogram(sample.values, bins=bins, range=range)
    total = counts.sum()
    dens = counts / (total * np.diff(edges)) if total else np.zeros(bins)
    return Histogram(edges, dens)


def write_histogram_csv(hist: Histogram, path, reference: Callable | None = None) -> None:
    """Rows ``bin_left, bin_right, density`` (plus ``reference_pdf`` at bin centres if given)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        header = ["bin_left", "bin_right", "density"]
        ref = None
        if reference is not None:
            header.append("reference_pdf")
            ref = np.asarray(reference(hist.centers), dtype=float)
        w.writerow(header)
        for b in np.arange(hist.densities.size):
            row = [repr(float(hist.bin_edges[b])), repr(float(hist.bin_edges[b + 1])), repr(float(hist.densities[b]))]
            if ref is not None:
                row.append(repr(float(ref[b])))
            w.writerow(row)


def write_sample_csv(sample: SpectralSample, path) -> None:
    with open(path, "w") as fh:
        fh.write("eigenvalue\n")
        for v in sample.values:
            fh.write(f"{float(v)!r}\n")
