"""Claim credibility scoring by fixed-point propagation.

Every claim's credibility is the hyperbolic tangent of a weighted
combination of its own evidence and its neighbors' credibility:

    score_t(v) = tanh( delta * mean(evidence values of v)
                       + sum over incoming edges k of weight(k) * score_{t-1}(source(k)) )

Evidence values and edge weights come from the Evans correlation-strength
bands: each qualitative label maps to its band midpoint, signed positive for
supporting/support and negative for negating/attack. The evidence term is 0
for claims without evidence. Scores start at 0 everywhere and all nodes
update synchronously (Jacobi schedule) from the previous iterate until the
largest per-node change drops below epsilon or the iteration budget runs
out. Non-convergence is reported, never raised: cycles with large weights
can oscillate, and the last iterate is still the best available answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterable

from .errors import ValidationError
from .graph import ArgumentGraph, ClaimNode, Edge, Polarity, QualitativeStrength, Relation, validate_graph

# Evans (1996) correlation-strength bands, represented by their midpoints:
# 0-.19 very weak, .20-.39 weak, .40-.59 moderate, .60-.79 strong,
# .80-1.0 very strong. "none" denotes the absence of any support.
EVANS_BANDS: dict[QualitativeStrength, float] = {
    QualitativeStrength.NONE: 0.0,
    QualitativeStrength.VERY_WEAK: 0.1,
    QualitativeStrength.WEAK: 0.3,
    QualitativeStrength.MODERATE: 0.5,
    QualitativeStrength.STRONG: 0.7,
    QualitativeStrength.VERY_STRONG: 0.9,
}

# Largest double below 1. math.tanh rounds to +-1.0 for |x| beyond ~19, which
# would leak scores onto the boundary of the open interval; clamp them back.
_SCORE_CEILING = math.nextafter(1.0, 0.0)


def evans_magnitude(strength: QualitativeStrength) -> float:
    """Band midpoint in [0, 1] for a qualitative strength label."""
    return EVANS_BANDS[strength]


def evidence_score(item) -> float:
    """Signed evidence value: positive when supporting, negative when negating."""
    magnitude = evans_magnitude(item.strength)
    return magnitude if item.polarity is Polarity.SUPPORTING else -magnitude


def edge_weight(edge) -> float:
    """Signed edge weight: positive for support, negative for attack."""
    magnitude = evans_magnitude(edge.strength)
    return magnitude if edge.relation is Relation.SUPPORT else -magnitude


def bounded_tanh(x: float) -> float:
    """tanh clamped to stay strictly inside (-1, 1) despite float rounding."""
    y = math.tanh(x)
    if y >= 1.0:
        return _SCORE_CEILING
    if y <= -1.0:
        return -_SCORE_CEILING
    return y


def node_preactivation(
    node: ClaimNode,
    incoming: Iterable[tuple[Edge, float]],
    delta: float,
) -> float:
    """Pre-tanh activation: delta-scaled evidence mean plus weighted neighbor scores.

    ``incoming`` pairs each inbound edge with its source node's score from
    the previous iteration.
    """
    if node.evidence:
        evidence_term = delta * (sum(evidence_score(e) for e in node.evidence) / len(node.evidence))
    else:
        evidence_term = 0.0
    edge_term = 0.0
    for edge, source_score in incoming:
        edge_term += edge_weight(edge) * source_score
    return evidence_term + edge_term


@dataclass
class PropagationConfig:
    """Iteration controls; ``delta`` of None defers to the graph's own delta."""

    epsilon: float = 1e-6
    max_iterations: int = 1000
    delta: float | None = None

    def __post_init__(self) -> None:
        if not (isinstance(self.epsilon, (int, float)) and self.epsilon > 0):
            raise ValidationError(f"epsilon must be > 0, got {self.epsilon!r}")
        if not (isinstance(self.max_iterations, int) and self.max_iterations >= 1):
            raise ValidationError(f"max_iterations must be >= 1, got {self.max_iterations!r}")
        if self.delta is not None and not (
            isinstance(self.delta, (int, float)) and math.isfinite(self.delta) and self.delta > 0
        ):
            raise ValidationError(f"delta must be a finite number > 0, got {self.delta!r}")


@dataclass
class PropagationResult:
    """Final scores plus convergence diagnostics for one propagation run."""

    scores: dict[str, float]
    converged: bool
    iterations_used: int
    max_residual: float
    delta: float = 1.0
    epsilon: float = 1e-6

    def to_document(self) -> dict[str, Any]:
        return {
            "scores": dict(self.scores),
            "converged": self.converged,
            "iterations_used": self.iterations_used,
            "max_residual": self.max_residual,
            "delta": self.delta,
            "epsilon": self.epsilon,
        }

    @classmethod
    def from_document(cls, doc: dict[str, Any]) -> "PropagationResult":
        return cls(
            scores={str(k): float(v) for k, v in doc["scores"].items()},
            converged=bool(doc["converged"]),
            iterations_used=int(doc["iterations_used"]),
            max_residual=float(doc["max_residual"]),
            delta=float(doc.get("delta", 1.0)),
            epsilon=float(doc.get("epsilon", 1e-6)),
        )


def propagate(graph: ArgumentGraph, config: PropagationConfig | None = None) -> PropagationResult:
    """Run synchronous fixed-point iteration and write final scores back.

    All nodes start at score 0 (the fixed point for an isolated claim).
    Each iteration recomputes every node from the previous iterate only, so
    the result is independent of node order and bit-identical across runs.
    On return the graph's nodes carry the final scores with their staleness
    flags cleared, whether or not the iteration converged.
    """
    config = config or PropagationConfig()
    violations = validate_graph(graph)
    if violations:
        summary = "; ".join(f"{v.subject}: {v.message}" for v in violations[:5])
        raise ValidationError(f"cannot propagate over an invalid graph: {summary}", violations)

    delta = config.delta if config.delta is not None else graph.delta
    node_ids = list(graph.nodes)
    inbound: dict[str, list[Edge]] = {nid: [] for nid in node_ids}
    for edge in graph.edges.values():
        inbound[edge.target_id].append(edge)

    scores = {nid: 0.0 for nid in node_ids}
    converged = False
    iterations_used = 0
    max_residual = 0.0

    for _ in range(config.max_iterations):
        iterations_used += 1
        next_scores: dict[str, float] = {}
        max_residual = 0.0
        for nid in node_ids:
            node = graph.nodes[nid]
            incoming = [(edge, scores[edge.source_id]) for edge in inbound[nid]]
            value = bounded_tanh(node_preactivation(node, incoming, delta))
            next_scores[nid] = value
            residual = abs(value - scores[nid])
            if residual > max_residual:
                max_residual = residual
        scores = next_scores
        if max_residual < config.epsilon:
            converged = True
            break

    for nid, value in scores.items():
        node = graph.nodes[nid]
        node.credibility = value
        node.credibility_stale = False

    return PropagationResult(
        scores=scores,
        converged=converged,
        iterations_used=iterations_used,
        max_residual=max_residual,
        delta=delta,
        epsilon=config.epsilon,
    )
