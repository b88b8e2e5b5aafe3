"""Matplotlib renderings saved next to the report files.

Headless-only: the Agg backend is forced before pyplot is imported so the
report path works in servers and CI.
"""

from __future__ import annotations

import math
from typing import Mapping

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Circle, FancyArrowPatch

from .graph import ArgumentGraph, Relation

_TYPE_COLORS = {"fact": "#4c72b0", "policy": "#dd8452", "value": "#55a868"}


def save_credibility_chart(graph: ArgumentGraph, scores: Mapping[str, float], path) -> None:
    """Horizontal bar chart of per-claim credibility, sign-colored."""
    node_ids = list(graph.nodes)
    values = [scores[nid] for nid in node_ids]
    height = max(2.0, 0.5 * len(node_ids) + 1.2)
    fig, ax = plt.subplots(figsize=(7, height))
    colors = ["#2e7d32" if v > 0 else "#c62828" if v < 0 else "#9e9e9e" for v in values]
    positions = range(len(node_ids))
    ax.barh(positions, values, color=colors)
    ax.set_yticks(list(positions))
    ax.set_yticklabels(node_ids)
    ax.invert_yaxis()
    ax.set_xlim(-1.0, 1.0)
    ax.axvline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("credibility")
    ax.set_title(f"Claim credibility: {graph.title}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_graph_diagram(graph: ArgumentGraph, path) -> None:
    """Node-link diagram on a circular layout; support edges solid, attacks dashed."""
    node_ids = list(graph.nodes)
    n = len(node_ids)
    fig, ax = plt.subplots(figsize=(7, 7))
    ax.set_xlim(-1.45, 1.45)
    ax.set_ylim(-1.45, 1.45)
    ax.set_aspect("equal")
    ax.axis("off")
    ax.set_title(f"Argument graph: {graph.title}")

    positions: dict[str, tuple[float, float]] = {}
    for i, nid in enumerate(node_ids):
        angle = 2.0 * math.pi * i / max(n, 1)
        positions[nid] = (math.cos(angle), math.sin(angle))

    for edge in graph.edges.values():
        start = positions[edge.source_id]
        end = positions[edge.target_id]
        support = edge.relation is Relation.SUPPORT
        arrow = FancyArrowPatch(
            start,
            end,
            connectionstyle="arc3,rad=0.12",
            arrowstyle="-|>",
            mutation_scale=14,
            shrinkA=18,
            shrinkB=18,
            color="#2e7d32" if support else "#c62828",
            linestyle="solid" if support else "dashed",
            linewidth=1.4,
        )
        ax.add_patch(arrow)

    for nid in node_ids:
        node = graph.nodes[nid]
        x, y = positions[nid]
        ax.add_patch(Circle((x, y), 0.13, color=_TYPE_COLORS[node.claim_type.value], zorder=3))
        ax.text(x, y, nid, ha="center", va="center", fontsize=8, color="white", zorder=4)
        ax.text(x, y - 0.2, f"{node.credibility:+.2f}", ha="center", va="top", fontsize=7, zorder=4)

    handles = [
        plt.Line2D([0], [0], color="#2e7d32", label="support"),
        plt.Line2D([0], [0], color="#c62828", linestyle="dashed", label="attack"),
    ]
    handles.extend(
        plt.Line2D([0], [0], marker="o", linestyle="", color=color, label=claim_type)
        for claim_type, color in _TYPE_COLORS.items()
    )
    ax.legend(handles=handles, loc="lower left", fontsize=7, frameon=False)
    fig.savefig(path, dpi=150)
    plt.close(fig)
