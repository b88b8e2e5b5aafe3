"""Typed argumentation graphs: claims, attached evidence, support/attack edges.

The graph is the document of record for everything downstream: credibility
propagation reads evidence and edge labels from it, critique walks its
structure, and the service persists it verbatim. All mutation goes through
the functions in this module so staleness flags and timestamps stay
consistent; anything assembled by raw field writes can be checked after the
fact with :func:`validate_graph`.
"""

from __future__ import annotations

import math
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

from .errors import ConflictError, NotFoundError, ValidationError


class ClaimType(Enum):
    """Rhetorical category of a claim."""

    FACT = "fact"
    POLICY = "policy"
    VALUE = "value"


class QualitativeStrength(Enum):
    """Closed label set for evidence and edge strength.

    The numeric interpretation lives in :mod:`argugraph.engine`; everything
    else treats these as opaque labels.
    """

    NONE = "none"
    VERY_WEAK = "very_weak"
    WEAK = "weak"
    MODERATE = "moderate"
    STRONG = "strong"
    VERY_STRONG = "very_strong"


class Polarity(Enum):
    """Whether a piece of evidence supports or negates its claim."""

    SUPPORTING = "supporting"
    NEGATING = "negating"


class Relation(Enum):
    """Direction of influence an edge asserts between two claims."""

    SUPPORT = "support"
    ATTACK = "attack"


class Origin(Enum):
    """Provenance of a label: machine-produced or human-overridden."""

    MACHINE = "machine"
    HUMAN_OVERRIDE = "human_override"


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def new_id() -> str:
    return uuid.uuid4().hex[:8]


@dataclass
class Evidence:
    """A signed, band-scored excerpt attached to one claim."""

    id: str
    claim_id: str
    excerpt: str
    polarity: Polarity
    strength: QualitativeStrength
    justification: str = ""
    origin: Origin = Origin.MACHINE
    source_document: str | None = None


@dataclass
class ClaimNode:
    """A typed claim with attached evidence and a credibility score.

    ``credibility`` lives strictly inside (-1, 1); ``credibility_stale`` is
    set whenever an attached label changes and cleared by propagation.
    """

    id: str
    text: str
    claim_type: ClaimType
    evidence: list[Evidence] = field(default_factory=list)
    credibility: float = 0.0
    credibility_stale: bool = True


@dataclass
class Edge:
    """A directed support/attack relation between two claims."""

    id: str
    source_id: str
    target_id: str
    relation: Relation
    strength: QualitativeStrength
    justification: str = ""
    origin: Origin = Origin.MACHINE


@dataclass
class GraphMetadata:
    created_at: datetime
    modified_at: datetime


def _fresh_metadata() -> GraphMetadata:
    now = utc_now()
    return GraphMetadata(created_at=now, modified_at=now)


@dataclass
class ArgumentGraph:
    """A whole argument document: nodes, edges, and the evidence-scaling delta.

    ``nodes`` and ``edges`` are keyed by id and preserve insertion order,
    which keeps propagation and critique output deterministic.
    """

    id: str
    title: str
    delta: float = 1.0
    nodes: dict[str, ClaimNode] = field(default_factory=dict)
    edges: dict[str, Edge] = field(default_factory=dict)
    metadata: GraphMetadata = field(default_factory=_fresh_metadata)


@dataclass
class Violation:
    """One invariant violation found by :func:`validate_graph`."""

    code: str
    subject: str
    message: str


# ---------------------------------------------------------------------------
# Construction and mutation
# ---------------------------------------------------------------------------


def new_graph(title: str, delta: float = 1.0, graph_id: str | None = None) -> ArgumentGraph:
    if not (isinstance(delta, (int, float)) and math.isfinite(delta) and delta > 0):
        raise ValidationError(f"delta must be a finite number > 0, got {delta!r}")
    return ArgumentGraph(id=graph_id or new_id(), title=title, delta=float(delta))


def _touch(graph: ArgumentGraph) -> None:
    graph.metadata.modified_at = utc_now()


def _unique_node_id(graph: ArgumentGraph) -> str:
    nid = new_id()
    while nid in graph.nodes:
        nid = new_id()
    return nid


def add_claim(
    graph: ArgumentGraph,
    text: str,
    claim_type: ClaimType,
    claim_id: str | None = None,
) -> ClaimNode:
    """Insert a new claim with credibility 0 and a stale marker."""
    if not text or not text.strip():
        raise ValidationError("claim text must be non-empty")
    if claim_id is not None:
        if claim_id in graph.nodes:
            raise ConflictError(f"node id {claim_id!r} already exists")
    else:
        claim_id = _unique_node_id(graph)
    node = ClaimNode(id=claim_id, text=text, claim_type=claim_type)
    graph.nodes[claim_id] = node
    _touch(graph)
    return node


def add_edge(
    graph: ArgumentGraph,
    source_id: str,
    target_id: str,
    relation: Relation,
    strength: QualitativeStrength,
    justification: str = "",
    origin: Origin = Origin.MACHINE,
    edge_id: str | None = None,
) -> Edge:
    """Insert a directed edge and mark the target's credibility stale."""
    for nid in (source_id, target_id):
        if nid not in graph.nodes:
            raise NotFoundError(f"node {nid!r} does not exist")
    if source_id == target_id:
        raise ValidationError(f"self-loop on node {source_id!r} is not allowed")
    for existing in graph.edges.values():
        if (existing.source_id, existing.target_id, existing.relation) == (
            source_id,
            target_id,
            relation,
        ):
            raise ConflictError(
                f"edge ({source_id!r}, {target_id!r}, {relation.value}) already exists as {existing.id!r}"
            )
    if edge_id is not None:
        if edge_id in graph.edges:
            raise ConflictError(f"edge id {edge_id!r} already exists")
    else:
        edge_id = new_id()
        while edge_id in graph.edges:
            edge_id = new_id()
    edge = Edge(
        id=edge_id,
        source_id=source_id,
        target_id=target_id,
        relation=relation,
        strength=strength,
        justification=justification,
        origin=origin,
    )
    graph.edges[edge_id] = edge
    graph.nodes[target_id].credibility_stale = True
    _touch(graph)
    return edge


def add_evidence(
    graph: ArgumentGraph,
    claim_id: str,
    excerpt: str,
    polarity: Polarity,
    strength: QualitativeStrength,
    justification: str = "",
    origin: Origin = Origin.MACHINE,
    source_document: str | None = None,
    evidence_id: str | None = None,
) -> Evidence:
    """Attach evidence to a claim and mark that claim's credibility stale."""
    node = get_node(graph, claim_id)
    if not excerpt or not excerpt.strip():
        raise ValidationError("evidence excerpt must be non-empty")
    existing_ids = {e.id for n in graph.nodes.values() for e in n.evidence}
    if evidence_id is not None:
        if evidence_id in existing_ids:
            raise ConflictError(f"evidence id {evidence_id!r} already exists")
    else:
        evidence_id = new_id()
        while evidence_id in existing_ids:
            evidence_id = new_id()
    item = Evidence(
        id=evidence_id,
        claim_id=claim_id,
        excerpt=excerpt,
        polarity=polarity,
        strength=strength,
        justification=justification,
        origin=origin,
        source_document=source_document,
    )
    node.evidence.append(item)
    node.credibility_stale = True
    _touch(graph)
    return item


def update_edge(
    graph: ArgumentGraph,
    edge_id: str,
    relation: Relation | None = None,
    strength: QualitativeStrength | None = None,
    justification: str | None = None,
    origin: Origin | None = None,
) -> Edge:
    """Rewrite edge labels; the edge's target is marked stale."""
    edge = get_edge(graph, edge_id)
    if relation is not None and relation != edge.relation:
        for other in graph.edges.values():
            if other.id != edge_id and (
                other.source_id,
                other.target_id,
                other.relation,
            ) == (edge.source_id, edge.target_id, relation):
                raise ConflictError(
                    f"edge ({edge.source_id!r}, {edge.target_id!r}, {relation.value}) already exists"
                )
        edge.relation = relation
    if strength is not None:
        edge.strength = strength
    if justification is not None:
        edge.justification = justification
    if origin is not None:
        edge.origin = origin
    graph.nodes[edge.target_id].credibility_stale = True
    _touch(graph)
    return edge


def update_evidence(
    graph: ArgumentGraph,
    evidence_id: str,
    excerpt: str | None = None,
    polarity: Polarity | None = None,
    strength: QualitativeStrength | None = None,
    justification: str | None = None,
    origin: Origin | None = None,
) -> Evidence:
    """Rewrite evidence labels; the owning claim is marked stale."""
    node, item = find_evidence(graph, evidence_id)
    if excerpt is not None:
        if not excerpt.strip():
            raise ValidationError("evidence excerpt must be non-empty")
        item.excerpt = excerpt
    if polarity is not None:
        item.polarity = polarity
    if strength is not None:
        item.strength = strength
    if justification is not None:
        item.justification = justification
    if origin is not None:
        item.origin = origin
    node.credibility_stale = True
    _touch(graph)
    return item


# ---------------------------------------------------------------------------
# Lookup helpers
# ---------------------------------------------------------------------------


def get_node(graph: ArgumentGraph, node_id: str) -> ClaimNode:
    try:
        return graph.nodes[node_id]
    except KeyError:
        raise NotFoundError(f"node {node_id!r} does not exist") from None


def get_edge(graph: ArgumentGraph, edge_id: str) -> Edge:
    try:
        return graph.edges[edge_id]
    except KeyError:
        raise NotFoundError(f"edge {edge_id!r} does not exist") from None


def find_evidence(graph: ArgumentGraph, evidence_id: str) -> tuple[ClaimNode, Evidence]:
    for node in graph.nodes.values():
        for item in node.evidence:
            if item.id == evidence_id:
                return node, item
    raise NotFoundError(f"evidence {evidence_id!r} does not exist")


def incoming_edges(graph: ArgumentGraph, node_id: str) -> list[Edge]:
    return [e for e in graph.edges.values() if e.target_id == node_id]


def outgoing_edges(graph: ArgumentGraph, node_id: str) -> list[Edge]:
    return [e for e in graph.edges.values() if e.source_id == node_id]


def stale_node_ids(graph: ArgumentGraph) -> list[str]:
    return [n.id for n in graph.nodes.values() if n.credibility_stale]


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate_graph(graph: ArgumentGraph) -> list[Violation]:
    """Check every structural invariant; returns an empty list iff well-formed.

    Violations are data, not exceptions: this is how raw-deserialized or
    hand-assembled graphs get audited.
    """
    violations: list[Violation] = []

    if not (isinstance(graph.delta, (int, float)) and math.isfinite(graph.delta) and graph.delta > 0):
        violations.append(
            Violation("delta_range", "graph", f"delta must be a finite number > 0, got {graph.delta!r}")
        )

    seen_evidence_ids: dict[str, str] = {}
    for key, node in graph.nodes.items():
        subject = f"node:{node.id}"
        if key != node.id:
            violations.append(
                Violation("node_key_mismatch", subject, f"node keyed as {key!r} carries id {node.id!r}")
            )
        cred = node.credibility
        if not (isinstance(cred, (int, float)) and math.isfinite(cred) and abs(cred) < 1.0):
            violations.append(
                Violation(
                    "credibility_range",
                    subject,
                    f"credibility must lie strictly inside (-1, 1), got {cred!r}",
                )
            )
        for item in node.evidence:
            esubject = f"evidence:{item.id}"
            if not item.excerpt or not item.excerpt.strip():
                violations.append(Violation("evidence_empty_excerpt", esubject, "excerpt is empty"))
            if item.claim_id != node.id:
                violations.append(
                    Violation(
                        "evidence_claim_mismatch",
                        esubject,
                        f"evidence claims owner {item.claim_id!r} but is attached to {node.id!r}",
                    )
                )
            if item.id in seen_evidence_ids:
                violations.append(
                    Violation(
                        "duplicate_evidence_id",
                        esubject,
                        f"evidence id also used on node {seen_evidence_ids[item.id]!r}",
                    )
                )
            else:
                seen_evidence_ids[item.id] = node.id

    seen_triples: dict[tuple[str, str, Relation], str] = {}
    for key, edge in graph.edges.items():
        subject = f"edge:{edge.id}"
        if key != edge.id:
            violations.append(
                Violation("edge_key_mismatch", subject, f"edge keyed as {key!r} carries id {edge.id!r}")
            )
        dangling = False
        for endpoint in (edge.source_id, edge.target_id):
            if endpoint not in graph.nodes:
                violations.append(
                    Violation("dangling_endpoint", subject, f"endpoint {endpoint!r} resolves to no node")
                )
                dangling = True
        if not dangling and edge.source_id == edge.target_id:
            violations.append(Violation("self_loop", subject, f"self-loop on node {edge.source_id!r}"))
        triple = (edge.source_id, edge.target_id, edge.relation)
        if triple in seen_triples:
            violations.append(
                Violation(
                    "duplicate_edge",
                    subject,
                    f"duplicate ({edge.source_id!r}, {edge.target_id!r}, {edge.relation.value}) "
                    f"also present as {seen_triples[triple]!r}",
                )
            )
        else:
            seen_triples[triple] = edge.id

    return violations
