"""Matplotlib figures written next to the delimited reports."""

from __future__ import annotations

import numpy as np
from matplotlib.figure import Figure

# no timestamps or version strings in the file, so reruns are byte-identical
PNG_METADATA = {"Software": None}
DPI = 100


def _save(fig, path):
    fig.savefig(path, format="png", dpi=DPI, metadata=PNG_METADATA)


def heatmap_figure(matrix, path, title="EER per bona fide x spoof pair"):
    """Heatmap of a cross-test matrix, spoof subsets down, bona fide across."""
    data = matrix.eers().T
    n_rows, n_cols = data.shape
    fig = Figure(figsize=(max(4.0, 0.5 * n_cols + 2.5), max(3.0, min(0.25 * n_rows + 1.5, 10.0))))
    ax = fig.add_subplot()
    im = ax.imshow(data, cmap="Greys", vmin=0.0, vmax=1.0, aspect="auto", interpolation="nearest")
    ax.set_xticks(range(n_cols))
    ax.set_xticklabels(matrix.bonafide_ids, rotation=90)
    if n_rows <= 40:
        ax.set_yticks(range(n_rows))
        ax.set_yticklabels(matrix.spoof_ids)
    else:
        ax.set_yticks([])
        ax.set_ylabel(f"{n_rows} spoof subsets")
    ax.set_title(title)
    fig.colorbar(im, ax=ax, label="EER", shrink=0.6)
    fig.tight_layout()
    _save(fig, path)


def drift_figure(store, report, path):
    """Score histograms with the combined-set thresholds, plus drift vs. inclusion."""
    fig = Figure(figsize=(9.0, 3.6))
    ax, ax2 = fig.subplots(1, 2, gridspec_kw={"width_ratios": [2, 1]})
    everything = np.concatenate(
        [s.scores for s in (*store.bonafide_subsets.values(), *store.spoof_subsets.values())]
    )
    bins = np.linspace(everything.min(), everything.max(), 80)
    for sid, s in (*store.bonafide_subsets.items(), *store.spoof_subsets.items()):
        ax.hist(s.scores, bins=bins, density=True, histtype="step", label=f"{sid} ({s.label}, n={len(s)})")
    for f, t in zip(report.inclusion_fractions, report.thresholds):
        ax.axvline(t, linestyle="--", linewidth=0.8, color="0.3")
        ax.annotate(f"{f:g}", (t, 0.98), xycoords=("data", "axes fraction"), fontsize=7, rotation=90, va="top")
    ax.axvline(report.reference_threshold, color="k", linewidth=1.2, label=f"{report.shrink_subset} omitted")
    ax.set_xlabel("score")
    ax.set_ylabel("density")
    ax.legend(fontsize=7, loc="upper left")

    ax2.plot(report.inclusion_fractions, report.distances(), marker="o", color="k")
    ax2.set_xscale("log")
    ax2.invert_xaxis()
    ax2.set_xlabel(f"fraction of {report.shrink_subset} kept")
    ax2.set_ylabel("|threshold - omitted threshold|")
    fig.tight_layout()
    _save(fig, path)
