"""Render computed frontiers to figure files (headless matplotlib)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .region_builder import Frontier

_LABELS = {
    "t1": "outer bound (t1)",
    "t2": "decode-forward inner bound (t2)",
    "t3": "degraded capacity (t3)",
    "t4": "semideterministic capacity (t4)",
}


def _staircase(points) -> tuple[list[float], list[float]]:
    """Lower-set boundary polyline through Pareto points, closed onto both axes."""
    xs: list[float] = [0.0]
    ys: list[float] = [points[0].r2]
    prev = None
    for p in points:
        if prev is not None:
            xs.append(p.r1)
            ys.append(prev.r2)
        xs.append(p.r1)
        ys.append(p.r2)
        prev = p
    xs.append(points[-1].r1)
    ys.append(0.0)
    return xs, ys


def render_frontiers(frontiers: dict[str, Frontier], path: str | Path, title: str = "") -> None:
    """Overlay one or more frontiers in the (R1, R2) plane and save the figure."""
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    for theorem, frontier in frontiers.items():
        if not frontier.points:
            continue
        xs, ys = _staircase(frontier.points)
        label = _LABELS.get(theorem, theorem)
        line = ax.plot(xs, ys, lw=1.5, label=label)[0]
        ax.plot(
            [p.r1 for p in frontier.points],
            [p.r2 for p in frontier.points],
            "o",
            ms=3.5,
            color=line.get_color(),
        )
    ax.set_xlabel("R1 (bits/use)")
    ax.set_ylabel("R2 (bits/use)")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    ax.set_xlim(left=0.0)
    ax.set_ylim(bottom=0.0)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
