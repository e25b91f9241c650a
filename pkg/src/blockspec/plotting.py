"""Figure rendering for the CLI reports.

Figures are written next to the CSV output.  The Agg backend is forced so this
works headless, and PNG metadata is stripped so reruns are byte-identical.
"""
from __future__ import annotations

from typing import Callable

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .stats import Histogram  # noqa: E402

_RC = {
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "lines.linewidth": 1.6,
    "savefig.dpi": 120,
}


def _save(fig, path) -> None:
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)


def plot_histogram(
    hist: Histogram,
    path,
    reference: Callable[[np.ndarray], np.ndarray] | None = None,
    title: str | None = None,
    label: str = "limiting density",
) -> None:
    """Bar histogram of pooled eigenvalues, optionally overlaid with a density curve."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5.0, 3.6))
        ax.bar(
            hist.bin_edges[:-1], hist.densities, width=hist.widths, align="edge",
            color="0.8", edgecolor="0.45", linewidth=0.4, label="eigenvalues",
        )
        if reference is not None:
            x = np.linspace(hist.bin_edges[0], hist.bin_edges[-1], 800)
            ax.plot(x, reference(x), color="k", label=label)
            ax.legend(frameon=False, loc="upper right")
        ax.set_xlabel("eigenvalue")
        ax.set_ylabel("density")
        if title:
            ax.set_title(title)
        _save(fig, path)


def plot_density(x: np.ndarray, pdf: np.ndarray, cdf: np.ndarray, path, title: str | None = None) -> None:
    with plt.rc_context(_RC):
        fig, (a1, a2) = plt.subplots(1, 2, figsize=(8.0, 3.2))
        a1.plot(x, pdf, color="k")
        a1.set_ylabel("pdf")
        a2.plot(x, cdf, color="k")
        a2.set_ylabel("cdf")
        for ax in (a1, a2):
            ax.set_xlabel("x")
        if title:
            fig.suptitle(title)
        _save(fig, path)
