"""Matplotlib figures for diagrams, line landscapes and correlation reports."""
from __future__ import annotations

import math
from contextlib import contextmanager
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .matching import HALF_PI, MatchingResult  # noqa: E402
from .persistence import PersistenceDiagram  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def figure_size(scale: float = 1.0, ratio: float | None = None) -> tuple[float, float]:
    width = 5.5 * scale
    ratio = ratio if ratio is not None else (math.sqrt(5) - 1) / 2
    return width, width * ratio


@contextmanager
def styled():
    with plt.rc_context(STYLE):
        yield


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
    return path


def draw_diagram(ax, diagram: PersistenceDiagram, label: str | None = None, marker: str = "o",
                 color: str = "tab:blue"):
    finite = np.array(diagram.finite).reshape(-1, 2)
    values = np.concatenate([finite.ravel(), np.array(diagram.essential)])
    lo, hi = (values.min(), values.max()) if len(values) else (0.0, 1.0)
    pad = 0.05 * (hi - lo) if hi > lo else 0.5
    lo, hi = lo - pad, hi + pad
    top = hi + pad
    ax.plot([lo, top], [lo, top], color="0.6", lw=0.8)
    ax.axhline(top, color="0.8", lw=0.6, ls="--")
    ax.scatter(finite[:, 0], finite[:, 1], s=18, marker=marker, color=color, label=label)
    if diagram.essential:
        ax.scatter(diagram.essential, [top] * len(diagram.essential), s=30, marker="^", color=color)
    ax.set_xlabel("birth")
    ax.set_ylabel("death")
    ax.set_xlim(lo, top)
    ax.set_ylim(lo, top + pad)


def plot_diagram(diagram: PersistenceDiagram, path, title: str = "") -> Path:
    with styled():
        fig, ax = plt.subplots(figsize=figure_size(0.7, 1.0))
        draw_diagram(ax, diagram)
        ax.set_title(title)
        return _save(fig, path)


def plot_diagram_pair(d1: PersistenceDiagram, d2: PersistenceDiagram, path,
                      labels=("A", "B"), title: str = "") -> Path:
    with styled():
        fig, ax = plt.subplots(figsize=figure_size(0.7, 1.0))
        draw_diagram(ax, d1, labels[0], "o")
        draw_diagram(ax, d2, labels[1], "x", "tab:orange")
        ax.legend(loc="lower right")
        ax.set_title(title)
        return _save(fig, path)


def draw_landscape(ax, result: MatchingResult):
    lines = list(result.line_values)
    theta = np.array([L.theta for L in lines])
    beta = np.array([L.beta for L in lines])
    vals = np.array([result.line_values[L] for L in lines])
    sc = ax.scatter(theta, beta, c=vals, s=6, cmap="viridis", linewidths=0)
    if result.best_line is not None:
        ax.scatter([result.best_line.theta], [result.best_line.beta], marker="*", s=80,
                   color="tab:red", label="best line")
        ax.legend(loc="upper right")
    ax.set_xlim(0, HALF_PI)
    ax.set_xlabel(r"$\theta$")
    ax.set_ylabel(r"$\beta$")
    return sc


def plot_landscape(result: MatchingResult, path, title: str = "") -> Path:
    """Bottleneck distance of every evaluated line over the (theta, beta) plane."""
    with styled():
        fig, ax = plt.subplots(figsize=figure_size())
        sc = draw_landscape(ax, result)
        fig.colorbar(sc, ax=ax, label="bottleneck distance")
        ax.set_title(title or f"matching distance {result.value:.6g}")
        return _save(fig, path)


def plot_correlation(report, path, title: str = "") -> Path:
    with styled():
        fig, axes = plt.subplots(1, 2, figsize=figure_size(1.4, 0.4), sharey=True)
        for ax, result, name in zip(axes, (report.matching_phi_f, report.matching_phi_g),
                                    ("against (f, f)", "against (g, g)")):
            sc = draw_landscape(ax, result)
            ax.set_title(name)
        axes[1].set_ylabel("")
        fig.colorbar(sc, ax=axes, label="bottleneck distance")
        fig.suptitle(title or f"correlation {report.correlation:.6g} ({report.branch.value})")
        return _save(fig, path)


def plot_collection(names, reports, path, title: str = "") -> Path:
    with styled():
        fig, ax = plt.subplots(figsize=figure_size())
        x = np.arange(len(reports))
        a = [r.delta_phi_f for r in reports]
        b = [r.delta_phi_g for r in reports]
        ax.bar(x - 0.2, a, 0.4, label=r"$\Delta(\Phi, F)$")
        ax.bar(x + 0.2, b, 0.4, label=r"$\Delta(\Phi, G)$")
        for xi, r in zip(x, reports):
            ax.annotate(f"{r.correlation:.3g}", (xi, max(r.delta_phi_f, r.delta_phi_g)),
                        ha="center", va="bottom", fontsize=7)
        ax.set_xticks(x, names)
        ax.set_ylabel("topological difference")
        ax.legend()
        ax.set_title(title)
        return _save(fig, path)
