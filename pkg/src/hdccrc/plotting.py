"""Matplotlib rendering of rate regions to PNG files (Agg backend only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_COLORS = ("tab:blue", "tab:orange", "tab:green", "tab:red",
           "tab:purple", "tab:brown", "tab:pink", "tab:gray")


def plot_regions(path: str, regions: dict, title: str = ""):
    """Draw named regions as closed frontier traces with light fill.

    regions: ordered mapping name -> Region2D.
    """
    fig, ax = plt.subplots(figsize=(6.0, 4.5), dpi=150)
    for i, (name, region) in enumerate(regions.items()):
        v = region.vertices
        xs = list(v[:, 0]) + [v[0, 0]]
        ys = list(v[:, 1]) + [v[0, 1]]
        color = _COLORS[i % len(_COLORS)]
        ax.plot(xs, ys, color=color, lw=1.6, label=name)
        ax.fill(xs, ys, color=color, alpha=0.12)
    ax.set_xlabel("$R_P$ [bits/use]")
    ax.set_ylabel("$R_C$ [bits/use]")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    ax.grid(True, alpha=0.3)
    ax.set_xlim(left=0.0)
    ax.set_ylim(bottom=0.0)
    fig.tight_layout()
    # pin the PNG text chunk so repeated runs are byte-identical
    fig.savefig(path, metadata={"Software": "hdccrc"})
    plt.close(fig)
    return path
