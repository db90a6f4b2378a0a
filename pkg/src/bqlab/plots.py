"""Static figure rendering for experiment reports.

Every plot is written to a file (vector SVG); nothing opens a display.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "save_growth_plot",
    "save_convergence_plot",
    "save_history_plot",
    "save_stability_plot",
]


def _finish(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    return path


def save_growth_plot(path, report, title: str):
    """Log-log measured values with the fitted and predicted slope lines."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    n = np.asarray(report.n_values, dtype=float)
    ax.loglog(n, report.measured, "o", color="tab:blue", label="measured")
    fit = np.exp(report.intercept) * n ** report.slope
    ax.loglog(n, fit, "-", color="tab:blue", alpha=0.7,
              label=f"fit slope {report.slope:.3f}")
    if report.predicted_slope is not None:
        ref = report.measured[0] * (n / n[0]) ** report.predicted_slope
        ax.loglog(n, ref, "--", color="tab:red",
                  label=f"predicted slope {report.predicted_slope:.3f}")
    ax.set_xlabel("N")
    ax.set_ylabel("measured value")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    return _finish(fig, path)


def save_convergence_plot(path, diffs, title: str):
    """Iterate-difference decay of the fixed-point iteration."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ax.semilogy(np.arange(1, len(diffs) + 1), diffs, "o-", color="tab:green")
    ax.set_xlabel("iteration")
    ax.set_ylabel("iterate difference")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    return _finish(fig, path)


def save_history_plot(path, times, values, ylabel: str, title: str):
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ax.plot(times, values, "-", color="tab:purple")
    ax.set_xlabel("t")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    return _finish(fig, path)


def save_stability_plot(path, ranges, suprema_by_label: dict, title: str):
    """Region suprema against outer sampling range, one line per region."""
    fig, ax = plt.subplots(figsize=(5.6, 4.0))
    for label, sups in suprema_by_label.items():
        ax.loglog(ranges, sups, "o-", label=label)
    ax.set_xlabel("outer sampling range")
    ax.set_ylabel("sample supremum")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=7, ncol=2)
    return _finish(fig, path)
