"""Matplotlib renderings used by the CLI's ``--plot-dir`` option."""

from __future__ import annotations

import os
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .trees import Tree  # noqa: E402


def _layout(t: Tree) -> dict[str, tuple[float, float]]:
    """Edge positions: leaves spread left to right, each vertex edge placed
    above the mean of its inputs."""
    pos: dict[str, tuple[float, float]] = {}
    counter = [0]

    def place(e: str, depth: int) -> float:
        v = t.producer.get(e)
        if v is None or not v.ins:
            x = float(counter[0])
            counter[0] += 1
        else:
            xs = [place(c, depth + 1) for c in v.ins]
            x = sum(xs) / len(xs)
        pos[e] = (x, float(depth))
        return x

    place(t.root, 0)
    return pos


def draw_tree(t: Tree, ax=None, title: str | None = None):
    if ax is None:
        _, ax = plt.subplots(figsize=(3, 3))
    pos = _layout(t)
    # the root edge hangs below its producing vertex
    for e, (x, y) in pos.items():
        v = t.producer.get(e)
        lo = y - 0.5 if e == t.root else y
        if v is None:
            ax.plot([x, x], [lo, y + 0.7], color="0.2", lw=1.2)
        else:
            ax.plot([x, x], [lo, y + 0.5], color="0.2", lw=1.2)
            for c in v.ins:
                cx, cy = pos[c]
                ax.plot([x, cx], [y + 0.5, cy], color="0.2", lw=1.2)
            ax.plot([x], [y + 0.5], "o", color="tab:blue", ms=7, zorder=3)
            if not v.ins:
                ax.plot([x], [y + 0.5], "o", color="white", ms=3, zorder=4)
    ax.set_axis_off()
    ax.set_title(title if title is not None else t.code, fontsize=8)
    return ax


def plot_trees(trees: Sequence[Tree], path: str, ncols: int = 6) -> str:
    n = max(1, len(trees))
    ncols = min(ncols, n)
    nrows = (n + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(1.8 * ncols, 1.9 * nrows), squeeze=False)
    for ax in axes.flat:
        ax.set_axis_off()
    for ax, t in zip(axes.flat, trees):
        draw_tree(t, ax)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_level_sizes(sizes: Mapping[str, int], path: str, title: str = "level sizes") -> str:
    codes = list(sizes)
    fig, ax = plt.subplots(figsize=(max(4, 0.35 * len(codes)), 3))
    ax.bar(range(len(codes)), [sizes[c] for c in codes], color="tab:blue")
    ax.set_xticks(range(len(codes)))
    ax.set_xticklabels(codes, rotation=70, fontsize=6)
    ax.set_ylabel("elements")
    ax.set_yscale("symlog")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_filtration(per_level: Mapping[str, Mapping[str, int]], path: str) -> str:
    """One line per filtration stage over the skeleton trees."""
    stages = sorted(per_level, key=int)
    codes = list(per_level[stages[-1]])
    fig, ax = plt.subplots(figsize=(max(4, 0.35 * len(codes)), 3))
    for n in stages:
        ax.plot(range(len(codes)), [per_level[n][c] for c in codes], marker="o", ms=3, label=f"n={n}")
    ax.set_xticks(range(len(codes)))
    ax.set_xticklabels(codes, rotation=70, fontsize=6)
    ax.set_yscale("symlog")
    ax.set_ylabel("elements")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def ensure_dir(d: str) -> str:
    os.makedirs(d, exist_ok=True)
    return d
