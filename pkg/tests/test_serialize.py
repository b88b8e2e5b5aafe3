from __future__ import annotations

import json
import random

import pytest

from argugraph.errors import DocumentParseError, ValidationError
from argugraph.serialize import (
    graph_from_document,
    graph_to_document,
    graph_to_json,
    parse_graph_json,
)
from randgraphs import random_graph


def test_roundtrip_empty(empty_graph):
    doc = graph_to_document(empty_graph)
    again = graph_from_document(doc)
    assert again == empty_graph
    assert graph_to_document(again) == doc


def test_roundtrip_demo_preserves_provenance_and_delta(demo_graph):
    doc = graph_to_document(demo_graph)
    again = graph_from_document(doc)
    assert again == demo_graph
    assert again.delta == demo_graph.delta
    assert again.edges["CB"].origin.value == "human_override"
    assert again.nodes["A"].evidence[1].origin.value == "human_override"


def test_roundtrip_random_graphs_property():
    # structural identity under serialize/deserialize for generated graphs
    for seed in range(1000):
        rng = random.Random(10_000 + seed)
        graph = random_graph(rng, max_nodes=20)
        for node in graph.nodes.values():
            node.credibility = rng.uniform(-0.999, 0.999)
            node.credibility_stale = rng.random() < 0.5
        doc = graph_to_document(graph)
        again = graph_from_document(doc)
        assert again == graph
        assert graph_to_document(again) == doc


def test_missing_delta_is_a_parse_error(chain_graph):
    doc = graph_to_document(chain_graph)
    del doc["delta"]
    with pytest.raises(DocumentParseError) as excinfo:
        graph_from_document(doc)
    assert "delta" in str(excinfo.value)


def test_unknown_fields_rejected_everywhere(chain_graph):
    doc = graph_to_document(chain_graph)
    for mutate, location in [
        (lambda d: d.update(extra=1), "$"),
        (lambda d: d["nodes"][0].update(extra=1), "$.nodes[0]"),
        (lambda d: d["nodes"][0]["evidence"][0].update(extra=1), "$.nodes[0].evidence[0]"),
        (lambda d: d["edges"][0].update(extra=1), "$.edges[0]"),
        (lambda d: d["metadata"].update(extra=1), "$.metadata"),
    ]:
        broken = json.loads(json.dumps(doc))
        mutate(broken)
        with pytest.raises(DocumentParseError) as excinfo:
            graph_from_document(broken)
        assert excinfo.value.location == location


def test_unknown_enum_labels_rejected(chain_graph):
    doc = graph_to_document(chain_graph)
    doc["nodes"][0]["claim_type"] = "opinion"
    with pytest.raises(DocumentParseError) as excinfo:
        graph_from_document(doc)
    assert "opinion" in str(excinfo.value)

    doc = graph_to_document(chain_graph)
    doc["nodes"][0]["evidence"][0]["strength"] = "kinda strong"
    with pytest.raises(DocumentParseError):
        graph_from_document(doc)


def test_schema_valid_but_invariant_violating_document(chain_graph):
    doc = graph_to_document(chain_graph)
    doc["nodes"][0]["credibility"] = 1.0
    with pytest.raises(ValidationError) as excinfo:
        graph_from_document(doc)
    assert any(v.code == "credibility_range" for v in excinfo.value.violations)
    # the audit path parses it anyway
    graph = graph_from_document(doc, validate=False)
    assert graph.nodes["A"].credibility == 1.0


def test_json_syntax_error_reports_location():
    with pytest.raises(DocumentParseError) as excinfo:
        parse_graph_json('{"id": "x", \n  "title": }')
    assert "line 2" in excinfo.value.location


def test_bad_timestamp_rejected(chain_graph):
    doc = graph_to_document(chain_graph)
    doc["metadata"]["created_at"] = "yesterday"
    with pytest.raises(DocumentParseError) as excinfo:
        graph_from_document(doc)
    assert "RFC 3339" in str(excinfo.value)


def test_zulu_timestamps_accepted(chain_graph):
    doc = graph_to_document(chain_graph)
    doc["metadata"]["created_at"] = "2025-11-05T12:00:00Z"
    graph = graph_from_document(doc)
    assert graph.metadata.created_at.tzinfo is not None


def test_duplicate_ids_rejected_at_parse(chain_graph):
    doc = graph_to_document(chain_graph)
    doc["nodes"].append(json.loads(json.dumps(doc["nodes"][0])))
    with pytest.raises(DocumentParseError) as excinfo:
        graph_from_document(doc)
    assert "duplicate node id" in str(excinfo.value)


def test_graph_to_json_is_deterministic(demo_graph):
    assert graph_to_json(demo_graph) == graph_to_json(demo_graph)
