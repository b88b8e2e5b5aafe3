"""JSON document format for argument graphs.

The document is the wire and storage format for the whole system. Parsing is
strict: unknown fields, missing fields, and out-of-vocabulary labels are
rejected with the JSON-path location of the offense, so a bad document never
turns into a half-built graph.
"""

from __future__ import annotations

import json
from datetime import datetime
from enum import Enum
from typing import Any, Type, TypeVar

from .errors import DocumentParseError, ValidationError
from .graph import (
    ArgumentGraph,
    ClaimNode,
    ClaimType,
    Edge,
    Evidence,
    GraphMetadata,
    Origin,
    Polarity,
    QualitativeStrength,
    Relation,
    validate_graph,
)

E = TypeVar("E", bound=Enum)

_NODE_REQUIRED = {"id", "text", "claim_type", "credibility", "evidence"}
_NODE_OPTIONAL = {"credibility_stale"}
_EVIDENCE_REQUIRED = {"id", "excerpt", "polarity", "strength", "justification", "origin"}
_EVIDENCE_OPTIONAL = {"source_document"}
_EDGE_REQUIRED = {"id", "source_id", "target_id", "relation", "strength", "justification", "origin"}
_GRAPH_REQUIRED = {"id", "title", "delta", "nodes", "edges", "metadata"}
_METADATA_REQUIRED = {"created_at", "modified_at"}


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _format_timestamp(value: datetime) -> str:
    return value.isoformat()


def evidence_to_document(item: Evidence) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "id": item.id,
        "excerpt": item.excerpt,
        "polarity": item.polarity.value,
        "strength": item.strength.value,
        "justification": item.justification,
        "origin": item.origin.value,
    }
    if item.source_document is not None:
        doc["source_document"] = item.source_document
    return doc


def node_to_document(node: ClaimNode) -> dict[str, Any]:
    return {
        "id": node.id,
        "text": node.text,
        "claim_type": node.claim_type.value,
        "credibility": node.credibility,
        "credibility_stale": node.credibility_stale,
        "evidence": [evidence_to_document(e) for e in node.evidence],
    }


def edge_to_document(edge: Edge) -> dict[str, Any]:
    return {
        "id": edge.id,
        "source_id": edge.source_id,
        "target_id": edge.target_id,
        "relation": edge.relation.value,
        "strength": edge.strength.value,
        "justification": edge.justification,
        "origin": edge.origin.value,
    }


def graph_to_document(graph: ArgumentGraph) -> dict[str, Any]:
    """Render a graph as a plain JSON-ready dict."""
    return {
        "id": graph.id,
        "title": graph.title,
        "delta": graph.delta,
        "nodes": [node_to_document(n) for n in graph.nodes.values()],
        "edges": [edge_to_document(e) for e in graph.edges.values()],
        "metadata": {
            "created_at": _format_timestamp(graph.metadata.created_at),
            "modified_at": _format_timestamp(graph.metadata.modified_at),
        },
    }


def graph_to_json(graph: ArgumentGraph, indent: int | None = 2) -> str:
    return json.dumps(graph_to_document(graph), indent=indent)


# ---------------------------------------------------------------------------
# Strict parsing helpers
# ---------------------------------------------------------------------------


def _require_object(value: Any, location: str) -> dict[str, Any]:
    if not isinstance(value, dict):
        raise DocumentParseError(f"expected an object, got {type(value).__name__}", location)
    return value


def _require_list(value: Any, location: str) -> list[Any]:
    if not isinstance(value, list):
        raise DocumentParseError(f"expected an array, got {type(value).__name__}", location)
    return value


def _check_fields(obj: dict[str, Any], required: set[str], optional: set[str], location: str) -> None:
    missing = sorted(required - obj.keys())
    if missing:
        raise DocumentParseError(f"missing field(s): {', '.join(missing)}", location)
    unknown = sorted(obj.keys() - required - optional)
    if unknown:
        raise DocumentParseError(f"unknown field(s): {', '.join(unknown)}", location)


def _parse_str(obj: dict[str, Any], key: str, location: str) -> str:
    value = obj[key]
    if not isinstance(value, str):
        raise DocumentParseError(f"expected a string, got {type(value).__name__}", f"{location}.{key}")
    return value


def _parse_number(obj: dict[str, Any], key: str, location: str) -> float:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DocumentParseError(f"expected a number, got {type(value).__name__}", f"{location}.{key}")
    return float(value)


def _parse_bool(obj: dict[str, Any], key: str, location: str) -> bool:
    value = obj[key]
    if not isinstance(value, bool):
        raise DocumentParseError(f"expected a boolean, got {type(value).__name__}", f"{location}.{key}")
    return value


def _parse_enum(enum_cls: Type[E], obj: dict[str, Any], key: str, location: str) -> E:
    value = obj[key]
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(repr(m.value) for m in enum_cls)
        raise DocumentParseError(f"{value!r} is not one of {allowed}", f"{location}.{key}") from None


def _parse_timestamp(obj: dict[str, Any], key: str, location: str) -> datetime:
    raw = _parse_str(obj, key, location)
    try:
        # Python 3.10's fromisoformat does not accept a trailing Z.
        return datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except ValueError:
        raise DocumentParseError(f"{raw!r} is not an RFC 3339 timestamp", f"{location}.{key}") from None


# ---------------------------------------------------------------------------
# Deserialization
# ---------------------------------------------------------------------------


def _evidence_from_document(doc: Any, claim_id: str, location: str) -> Evidence:
    obj = _require_object(doc, location)
    _check_fields(obj, _EVIDENCE_REQUIRED, _EVIDENCE_OPTIONAL, location)
    source_document = None
    if "source_document" in obj:
        value = obj["source_document"]
        if value is not None and not isinstance(value, str):
            raise DocumentParseError(
                f"expected a string or null, got {type(value).__name__}", f"{location}.source_document"
            )
        source_document = value
    return Evidence(
        id=_parse_str(obj, "id", location),
        claim_id=claim_id,
        excerpt=_parse_str(obj, "excerpt", location),
        polarity=_parse_enum(Polarity, obj, "polarity", location),
        strength=_parse_enum(QualitativeStrength, obj, "strength", location),
        justification=_parse_str(obj, "justification", location),
        origin=_parse_enum(Origin, obj, "origin", location),
        source_document=source_document,
    )


def _node_from_document(doc: Any, location: str) -> ClaimNode:
    obj = _require_object(doc, location)
    _check_fields(obj, _NODE_REQUIRED, _NODE_OPTIONAL, location)
    node_id = _parse_str(obj, "id", location)
    evidence = [
        _evidence_from_document(e, node_id, f"{location}.evidence[{i}]")
        for i, e in enumerate(_require_list(obj["evidence"], f"{location}.evidence"))
    ]
    stale = _parse_bool(obj, "credibility_stale", location) if "credibility_stale" in obj else False
    return ClaimNode(
        id=node_id,
        text=_parse_str(obj, "text", location),
        claim_type=_parse_enum(ClaimType, obj, "claim_type", location),
        evidence=evidence,
        credibility=_parse_number(obj, "credibility", location),
        credibility_stale=stale,
    )


def _edge_from_document(doc: Any, location: str) -> Edge:
    obj = _require_object(doc, location)
    _check_fields(obj, _EDGE_REQUIRED, set(), location)
    return Edge(
        id=_parse_str(obj, "id", location),
        source_id=_parse_str(obj, "source_id", location),
        target_id=_parse_str(obj, "target_id", location),
        relation=_parse_enum(Relation, obj, "relation", location),
        strength=_parse_enum(QualitativeStrength, obj, "strength", location),
        justification=_parse_str(obj, "justification", location),
        origin=_parse_enum(Origin, obj, "origin", location),
    )


def graph_from_document(doc: Any, validate: bool = True) -> ArgumentGraph:
    """Parse a graph document dict into an :class:`ArgumentGraph`.

    Raises :class:`DocumentParseError` for schema problems and, when
    ``validate`` is left on, :class:`ValidationError` listing every invariant
    the (schema-valid) document breaks. ``validate=False`` is for audit
    flows that want to inspect a broken graph with ``validate_graph``.
    """
    obj = _require_object(doc, "$")
    _check_fields(obj, _GRAPH_REQUIRED, set(), "$")

    nodes: dict[str, ClaimNode] = {}
    for i, node_doc in enumerate(_require_list(obj["nodes"], "$.nodes")):
        node = _node_from_document(node_doc, f"$.nodes[{i}]")
        if node.id in nodes:
            raise DocumentParseError(f"duplicate node id {node.id!r}", f"$.nodes[{i}].id")
        nodes[node.id] = node

    edges: dict[str, Edge] = {}
    for i, edge_doc in enumerate(_require_list(obj["edges"], "$.edges")):
        edge = _edge_from_document(edge_doc, f"$.edges[{i}]")
        if edge.id in edges:
            raise DocumentParseError(f"duplicate edge id {edge.id!r}", f"$.edges[{i}].id")
        edges[edge.id] = edge

    metadata_obj = _require_object(obj["metadata"], "$.metadata")
    _check_fields(metadata_obj, _METADATA_REQUIRED, set(), "$.metadata")
    metadata = GraphMetadata(
        created_at=_parse_timestamp(metadata_obj, "created_at", "$.metadata"),
        modified_at=_parse_timestamp(metadata_obj, "modified_at", "$.metadata"),
    )

    graph = ArgumentGraph(
        id=_parse_str(obj, "id", "$"),
        title=_parse_str(obj, "title", "$"),
        delta=_parse_number(obj, "delta", "$"),
        nodes=nodes,
        edges=edges,
        metadata=metadata,
    )

    if validate:
        violations = validate_graph(graph)
        if violations:
            summary = "; ".join(f"{v.subject}: {v.message}" for v in violations[:5])
            if len(violations) > 5:
                summary += f"; and {len(violations) - 5} more"
            raise ValidationError(f"document violates graph invariants: {summary}", violations)
    return graph


def parse_graph_json(text: str, validate: bool = True) -> ArgumentGraph:
    """Parse a JSON string; syntax errors surface with line/column location."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    return graph_from_document(doc, validate=validate)


def load_graph_file(path, validate: bool = True) -> ArgumentGraph:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    return parse_graph_json(text, validate=validate)


def save_graph_file(graph: ArgumentGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(graph_to_json(graph) + "\n")
