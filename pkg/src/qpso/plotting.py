"""Static SVG plot emission for convergence and complexity curves.

Plots are written headless (Agg) with hashing salt and date metadata
pinned, so repeated runs of the same experiment produce the same bytes.
Each file carries the resolved experiment config in an XML comment.
"""

from __future__ import annotations

import json
from typing import Mapping, Sequence

_COLORS = ("#2b6cb0", "#c05621", "#2f855a", "#9b2c2c")


def _figure():
    import matplotlib
    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt
    matplotlib.rcParams["svg.hashsalt"] = "qpso"
    return plt


def _inject_provenance(path, config: Mapping) -> None:
    comment = "<!-- config: " + json.dumps(dict(config), sort_keys=True) + " -->\n"
    with open(path, "r") as handle:
        lines = handle.readlines()
    # after the XML declaration / doctype header
    insert_at = 0
    for i, line in enumerate(lines):
        if line.lstrip().startswith("<svg"):
            insert_at = i
            break
    lines.insert(insert_at, comment)
    with open(path, "w") as handle:
        handle.writelines(lines)


def save_convergence_svg(path, curves: Mapping[str, Sequence[float]],
                         title: str, config: Mapping, logy: bool = True) -> None:
    """Mean best-value trajectories (one curve per algorithm) vs iteration."""
    plt = _figure()
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for idx, (label, values) in enumerate(sorted(curves.items())):
        ax.plot(range(1, len(values) + 1), values,
                label=label, color=_COLORS[idx % len(_COLORS)], linewidth=1.4)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel("iteration")
    ax.set_ylabel("mean best fitness")
    ax.set_title(title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    _inject_provenance(path, config)


def save_complexity_svg(path, dims: Sequence[int],
                        means: Mapping[str, Sequence[float]],
                        config: Mapping) -> None:
    """Mean evaluations-to-region vs dimension, one line per algorithm."""
    plt = _figure()
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for idx, (label, values) in enumerate(sorted(means.items())):
        ax.plot(dims, values, marker="o", label=label,
                color=_COLORS[idx % len(_COLORS)], linewidth=1.4)
    ax.set_xlabel("dimension")
    ax.set_ylabel("mean evaluations to region")
    ax.set_title("time complexity")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    _inject_provenance(path, config)
