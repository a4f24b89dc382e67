"""Render benchmark figures to files alongside the delimited summary.

Consumes trial records (in memory or from a records CSV) and writes
whichever figures the sweep's axes support: success-rate curves when the
true sparsity varies, a success heatmap when the sparsity estimate
varies too, iteration histograms per algorithm, and quartile bands of
iteration counts when the step-length varies.
"""

from __future__ import annotations

from pathlib import Path
from typing import List, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .bench import CellSummary, TrialRecord, emit_summary_csv, summarize  # noqa: E402

__all__ = ["render_report"]


def _label(algo, gamma, s_hat=None) -> str:
    parts = [algo]
    if gamma != "adaptive":
        parts.append(f"gamma={gamma:g}")
    if s_hat is not None:
        parts.append(f"s_hat={s_hat}")
    return ", ".join(parts)


def _success_curves(summaries: Sequence[CellSummary], path: Path, dpi: int) -> bool:
    s_values = sorted({c.s for c in summaries})
    if len(s_values) < 2:
        return False
    fig, ax = plt.subplots(figsize=(7, 4.5))
    series = {}
    for c in summaries:
        series.setdefault((c.algorithm, c.gamma, c.s_hat), {})[c.s] = c.success_rate
    for key in sorted(series, key=str):
        pts = series[key]
        xs = [s for s in s_values if s in pts]
        ax.plot(xs, [pts[s] for s in xs], marker="o", label=_label(*key))
    ax.set_xlabel("true sparsity s")
    ax.set_ylabel("success rate (%)")
    ax.set_ylim(-2, 102)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.savefig(path, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
    return True


def _success_heatmap(summaries: Sequence[CellSummary], path: Path, dpi: int) -> bool:
    s_values = sorted({c.s for c in summaries})
    s_hat_values = sorted({c.s_hat for c in summaries})
    combos = sorted({(c.algorithm, c.gamma) for c in summaries}, key=str)
    if len(s_hat_values) < 2 or not s_values:
        return False
    fig, axes = plt.subplots(1, len(combos),
                             figsize=(4.5 * len(combos), 3.5), squeeze=False)
    for ax, (algo, gamma) in zip(axes[0], combos):
        grid = np.full((len(s_hat_values), len(s_values)), np.nan)
        for c in summaries:
            if (c.algorithm, c.gamma) == (algo, gamma):
                grid[s_hat_values.index(c.s_hat), s_values.index(c.s)] = c.success_rate
        im = ax.imshow(grid, vmin=0, vmax=100, cmap="viridis", aspect="auto")
        ax.set_xticks(range(len(s_values)), [str(s) for s in s_values])
        ax.set_yticks(range(len(s_hat_values)), [str(s) for s in s_hat_values])
        ax.set_xlabel("true sparsity s")
        ax.set_ylabel("sparsity estimate s_hat")
        ax.set_title(_label(algo, gamma), fontsize=9)
        for i in range(len(s_hat_values)):
            for j in range(len(s_values)):
                if np.isfinite(grid[i, j]):
                    ax.text(j, i, f"{grid[i, j]:.0f}", ha="center", va="center",
                            color="white" if grid[i, j] < 60 else "black",
                            fontsize=8)
        fig.colorbar(im, ax=ax, label="success rate (%)")
    fig.savefig(path, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
    return True


def _iteration_histograms(records: Sequence[TrialRecord], path: Path, dpi: int) -> bool:
    algos = sorted({r.algorithm for r in records})
    converged = [r for r in records if r.converged]
    if not converged:
        return False
    fig, axes = plt.subplots(len(algos), 1, figsize=(7, 2.2 * len(algos)),
                             sharex=True, squeeze=False)
    for ax, algo in zip(axes[:, 0], algos):
        iters = [r.iterations for r in converged if r.algorithm == algo]
        if not iters:
            ax.set_visible(False)
            continue
        ax.hist(iters, bins=min(50, max(10, len(set(iters)))), color="steelblue")
        ax.axvline(np.mean(iters), color="black", linestyle="--",
                   label=f"mean = {np.mean(iters):.1f}")
        ax.set_ylabel(algo)
        ax.legend(fontsize=8)
    axes[-1, 0].set_xlabel("iterations to convergence")
    fig.savefig(path, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
    return True


def _gamma_quartiles(records: Sequence[TrialRecord], path: Path, dpi: int) -> bool:
    gammas = sorted({r.gamma for r in records if r.gamma != "adaptive"})
    if len(gammas) < 2:
        return False
    algos = sorted({r.algorithm for r in records if r.gamma != "adaptive"})
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for algo in algos:
        med, q1, q3 = [], [], []
        for g in gammas:
            iters = [r.iterations for r in records
                     if r.algorithm == algo and r.gamma == g and r.converged]
            if not iters:
                med.append(np.nan), q1.append(np.nan), q3.append(np.nan)
                continue
            lo, mid, hi = np.percentile(iters, [25, 50, 75])
            q1.append(lo), med.append(mid), q3.append(hi)
        ax.plot(gammas, med, marker="o", label=algo)
        ax.fill_between(gammas, q1, q3, alpha=0.2)
    ax.set_xlabel("step-length gamma")
    ax.set_ylabel("iterations to convergence (median, quartile band)")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.savefig(path, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
    return True


def render_report(records: Sequence[TrialRecord], out_dir, dpi: int = 150) -> List[Path]:
    """Write summary.csv plus every applicable figure; returns the paths."""
    if not records:
        raise ValueError("no records to report on")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summaries = summarize(records)
    written = [out / "summary.csv"]
    emit_summary_csv(summaries, written[0])
    for name, renderer, data in (
        ("success_rate.png", _success_curves, summaries),
        ("sparsity_estimate.png", _success_heatmap, summaries),
        ("iterations_hist.png", _iteration_histograms, records),
        ("gamma_iterations.png", _gamma_quartiles, records),
    ):
        path = out / name
        if renderer(data, path, dpi):
            written.append(path)
    return written
