"""Elementary directed-cycle enumeration.

Each elementary cycle (no repeated nodes) is reported exactly once,
canonicalized so its smallest node id comes first. The search fixes a start
node and only walks nodes ordered after it, which rules out both rotations
and re-discoveries from later starts. Enumeration is exponential in the
worst case, as any cycle listing must be; argument graphs are document-scale
so this is a non-issue.
"""

from __future__ import annotations

from typing import Iterable, Mapping


def elementary_cycles(adjacency: Mapping[str, Iterable[str]]) -> list[list[str]]:
    """List every elementary cycle in a directed graph given as an adjacency map.

    Keys are node ids, values the ids their out-edges point at. Nodes that
    appear only as targets need no key. Output order is deterministic:
    ascending start node, then depth-first in sorted neighbor order.
    """
    nodes = sorted(set(adjacency) | {v for targets in adjacency.values() for v in targets})
    adj = {u: sorted(set(adjacency.get(u, ()))) for u in nodes}
    cycles: list[list[str]] = []

    def search(start: str, current: str, path: list[str], on_path: set[str]) -> None:
        for neighbor in adj[current]:
            if neighbor == start:
                cycles.append(list(path))
            elif neighbor > start and neighbor not in on_path:
                path.append(neighbor)
                on_path.add(neighbor)
                search(start, neighbor, path, on_path)
                on_path.remove(neighbor)
                path.pop()

    for start in nodes:
        search(start, start, [start], {start})
    return cycles
