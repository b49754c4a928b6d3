"""Matplotlib figures: garden census bars and plant drawings."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .errors import InvalidPlant  # noqa: E402
from .plant import Plant, require_valid  # noqa: E402
from .render import layers  # noqa: E402


def census_figure(store, path: str | Path, title: str = "garden census") -> Path:
    """Stacked bars: plant count per arity, one colour per word length."""
    counts: dict = defaultdict(lambda: defaultdict(int))
    for e in store.sorted_entries():
        counts[str(e.arity)][e.letters] += 1
    arities = sorted(counts, key=lambda a: tuple(int(x) for x in a.split("->")))
    lengths = sorted({n for per in counts.values() for n in per})
    fig, ax = plt.subplots(figsize=(max(4, 0.6 * len(arities) + 2), 3.5))
    bottom = [0] * len(arities)
    for n in lengths:
        heights = [counts[a].get(n, 0) for a in arities]
        ax.bar(arities, heights, bottom=bottom, label=f"{n} letter{'s' if n != 1 else ''}")
        bottom = [b + h for b, h in zip(bottom, heights)]
    ax.set_xlabel("arity")
    ax.set_ylabel("plants")
    ax.set_title(title)
    ax.legend(fontsize="small")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path


def _layout(p: Plant):
    """Coordinates for leaves, vertices and roots; y grows downwards."""
    steps = layers(p)
    if steps is None:
        raise InvalidPlant("plant admits no layered decomposition")
    pos = {("L", i): (float(i), 0.0) for i in range(p.inputs)}
    frontier = [("L", i) for i in range(p.inputs)]
    boxes = {}
    for row, (before, v, after) in enumerate(steps, 1):
        nin, nout = p.sigs[v]
        consumed = frontier[before:before + nin]
        if consumed:
            x = sum(pos[u][0] for u in consumed) / nin
        elif frontier:
            left = pos[frontier[before - 1]][0] if before else pos[frontier[0]][0] - 1
            right = pos[frontier[before]][0] if before < len(frontier) else left + 1
            x = (left + right) / 2
        else:
            x = 0.0
        boxes[v] = (x, float(row))
        outs = [("o", v, j) for j in range(nout)]
        for j, o in enumerate(outs):
            pos[o] = (x + (j - (nout - 1) / 2) * 0.8, row + 0.35)
        frontier = frontier[:before] + outs + frontier[before + nin:]
    depth = float(len(steps) + 1)
    for r, u in enumerate(frontier):
        pos[("R", r)] = (pos[u][0], depth)
    return pos, boxes, depth


def plant_figure(p: Plant, path: str | Path, title: str = "") -> Path:
    """Draw ``p`` as boxes and wires, leaves on top."""
    require_valid(p)
    pos, boxes, depth = _layout(p)
    fig, ax = plt.subplots(figsize=(max(3, p.inputs + p.outputs + 1), max(3, depth + 1)))
    for d, u in p.up.items():
        start = pos[u]
        if u[0] == "o":
            bx, by = boxes[u[1]]
            ax.plot([bx, start[0]], [by, start[1]], color="black", linewidth=1.2, zorder=1)
        end = boxes[d[1]] if d[0] == "i" else pos[d]
        ax.plot([start[0], end[0]], [start[1], end[1]], color="black", linewidth=1.2, zorder=1)
    for v, (x, y) in boxes.items():
        label = p.labels[v]
        ax.text(x, y, label, ha="center", va="center", zorder=2,
                bbox=dict(boxstyle="round", facecolor="white", edgecolor="black"))
    for kind, n in (("L", p.inputs), ("R", p.outputs)):
        for i in range(n):
            x, y = pos[(kind, i)]
            ax.plot([x], [y], "o", color="black", markersize=3)
    ax.set_ylim(depth + 0.5, -0.5)
    ax.set_axis_off()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path
