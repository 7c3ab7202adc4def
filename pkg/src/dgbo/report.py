"""Report persistence for experiment runs: deterministic JSON documents and
matplotlib figures rendered to files alongside the delimited output.

CSV/JSON remain the machine contract; the figures are companion visuals
written into the same output directory.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def write_json(path, payload: dict) -> None:
    """Stable, reproducible JSON (sorted keys, shortest round-trip floats)."""
    Path(path).write_text(json.dumps(_plain(payload), sort_keys=True, indent=2) + "\n")


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def save_figure(fig, path) -> None:
    fig.savefig(path, dpi=140, bbox_inches="tight")
    plt.close(fig)


def fig_diagnostics(diag, title: str):
    """Conservation drift and amplitude history of a nonlinear run."""
    t = diag.column("t")
    fig, axes = plt.subplots(1, 3, figsize=(11, 3.2))
    m = diag.column("mass")
    e = diag.column("energy")
    axes[0].plot(t, np.abs(m - m[0]) / max(abs(m[0]), 1e-300), label="mass")
    axes[0].plot(t, np.abs(e - e[0]) / max(abs(e[0]), 1e-300), label="energy")
    axes[0].set_yscale("log")
    axes[0].set_xlabel("t")
    axes[0].set_ylabel("relative drift")
    axes[0].legend()
    axes[1].plot(t, diag.column("linf"))
    axes[1].set_xlabel("t")
    axes[1].set_ylabel("max|u|")
    axes[2].plot(t, diag.column("imag_residue"))
    axes[2].set_yscale("log")
    axes[2].set_xlabel("t")
    axes[2].set_ylabel("imag residue")
    fig.suptitle(title)
    fig.tight_layout()
    return fig


def fig_loglog_fit(xs, ys, slope: float, xlabel: str, ylabel: str, title: str):
    xs = np.asarray(xs, float)
    ys = np.asarray(ys, float)
    fig, ax = plt.subplots(figsize=(4.5, 3.4))
    ax.loglog(xs, ys, "o", ms=4)
    anchor = ys[len(ys) // 2] / xs[len(xs) // 2] ** slope
    ax.loglog(xs, anchor * xs**slope, "--", label=f"slope {slope:.3f}")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    return fig


def fig_curve(xs, ys, xlabel: str, ylabel: str, title: str, logy: bool = False):
    fig, ax = plt.subplots(figsize=(4.5, 3.4))
    ax.plot(xs, ys)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    fig.tight_layout()
    return fig


def fig_field(field, title: str):
    fig, ax = plt.subplots(figsize=(5.5, 3.0))
    ax.plot(field.grid.xs, field.values, lw=0.9)
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    ax.set_title(title)
    fig.tight_layout()
    return fig


def fig_spectra(grid, layers: dict, title: str):
    """Log-log coefficient magnitudes of several labeled fields."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    half = grid.n // 2
    k = np.abs(grid.ks[1:half])
    for label, coeffs in layers.items():
        ax.loglog(k, np.abs(coeffs[1:half]) + 1e-300, lw=0.8, label=label)
    ax.set_xlabel("|xi|")
    ax.set_ylabel("|coeff|")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    return fig
