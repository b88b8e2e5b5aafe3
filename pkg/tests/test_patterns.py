from __future__ import annotations

import json
import random

import pytest

from argugraph.errors import DocumentParseError, ProviderError, ValidationError
from argugraph.graph import (
    ClaimType,
    QualitativeStrength,
    Relation,
    add_claim,
    add_edge,
    new_graph,
)
from argugraph.llm.provider import MockProvider
from argugraph.patterns import (
    PatternKind,
    default_pattern_bank,
    detect_semantic,
    detect_structural,
    load_pattern_bank,
)

from oracles import (
    brute_contradictory_pairs,
    brute_isolated,
    brute_support_cycles,
    brute_unsupported,
)
from randgraphs import random_graph

MINIMAL_SEMANTIC = """
version: "1"
patterns:
  - id: straw_man
    name: Straw man
    category: fallacy
    kind: semantic
    severity: warning
    description: test
    prompt_template: "Check for straw man attacks. {graph_summary}"
"""


# ---------------------------------------------------------------------------
# Bank loading
# ---------------------------------------------------------------------------


def test_default_bank_contents():
    bank = default_pattern_bank()
    ids = {p.id for p in bank.patterns}
    assert {"circular_reasoning", "contradictory_pair", "unsupported_claim",
            "isolated_node", "straw_man", "false_cause"} <= ids
    assert len(bank.patterns) >= 6
    for pattern in bank.patterns:
        if pattern.kind is PatternKind.STRUCTURAL:
            assert pattern.structural_signature is not None
        else:
            assert pattern.prompt_template


def test_bank_duplicate_ids_rejected():
    text = """
version: "1"
patterns:
  - {id: p, name: a, category: fallacy, kind: structural, structural_signature: cycle, description: d, severity: info}
  - {id: p, name: b, category: fallacy, kind: structural, structural_signature: cycle, description: d, severity: info}
"""
    with pytest.raises(ValidationError) as excinfo:
        load_pattern_bank(text)
    assert "duplicate pattern id" in str(excinfo.value)


def test_bank_structural_without_signature_rejected():
    text = """
version: "1"
patterns:
  - {id: p, name: a, category: fallacy, kind: structural, description: d, severity: info}
"""
    with pytest.raises(ValidationError) as excinfo:
        load_pattern_bank(text)
    assert "structural_signature" in str(excinfo.value)


def test_bank_semantic_without_template_rejected():
    text = """
version: "1"
patterns:
  - {id: p, name: a, category: fallacy, kind: semantic, description: d, severity: info}
"""
    with pytest.raises(ValidationError):
        load_pattern_bank(text)


def test_bank_unknown_kind_and_version_rejected():
    with pytest.raises(ValidationError):
        load_pattern_bank('{version: "2", patterns: [{id: p, name: a, category: fallacy, kind: structural, structural_signature: cycle, description: d, severity: info}]}')
    with pytest.raises(ValidationError):
        load_pattern_bank('{version: "1", patterns: [{id: p, name: a, category: fallacy, kind: magic, description: d, severity: info}]}')


def test_bank_yaml_syntax_error_reports_location():
    with pytest.raises(DocumentParseError) as excinfo:
        load_pattern_bank("version: '1'\npatterns:\n  - id: [unclosed")
    assert "line" in excinfo.value.location


def test_bank_empty_patterns_rejected():
    with pytest.raises(ValidationError):
        load_pattern_bank('{version: "1", patterns: []}')


# ---------------------------------------------------------------------------
# Structural detection
# ---------------------------------------------------------------------------


def test_cycle_fixture_detection(cycle_graph):
    findings = detect_structural(cycle_graph, default_pattern_bank())
    cycles = [f for f in findings if f.pattern_id == "circular_reasoning"]
    assert len(cycles) == 1
    assert cycles[0].involved_node_ids == ["A", "B", "C"]
    assert set(cycles[0].involved_edge_ids) == {"AB", "BC", "CA"}
    assert len(findings) == 1  # every node has incoming support, none isolated


def test_attack_cycles_are_not_circular_reasoning():
    graph = new_graph("t")
    for nid in "AB":
        add_claim(graph, f"claim {nid}", ClaimType.FACT, claim_id=nid)
    add_edge(graph, "A", "B", Relation.ATTACK, QualitativeStrength.STRONG)
    add_edge(graph, "B", "A", Relation.ATTACK, QualitativeStrength.STRONG)
    findings = detect_structural(graph, default_pattern_bank())
    assert not [f for f in findings if f.pattern_id == "circular_reasoning"]


def test_contradictory_pair_detection():
    graph = new_graph("t")
    add_claim(graph, "a", ClaimType.FACT, claim_id="A")
    add_claim(graph, "b", ClaimType.FACT, claim_id="B")
    add_edge(graph, "A", "B", Relation.SUPPORT, QualitativeStrength.STRONG, edge_id="s")
    add_edge(graph, "A", "B", Relation.ATTACK, QualitativeStrength.WEAK, edge_id="a")
    findings = detect_structural(graph, default_pattern_bank())
    pairs = [f for f in findings if f.pattern_id == "contradictory_pair"]
    assert len(pairs) == 1
    assert pairs[0].involved_node_ids == ["A", "B"]
    assert pairs[0].involved_edge_ids == ["s", "a"]


def test_lonely_node_is_both_isolated_and_unsupported():
    graph = new_graph("t")
    add_claim(graph, "alone", ClaimType.VALUE, claim_id="X")
    findings = detect_structural(graph, default_pattern_bank())
    assert [f.pattern_id for f in findings] == ["isolated_node", "unsupported_claim"]


def test_findings_sorted_and_ids_resolve(demo_graph):
    findings = detect_structural(demo_graph, default_pattern_bank())
    keys = [(f.pattern_id, min(f.involved_node_ids)) for f in findings]
    assert keys == sorted(keys)
    for finding in findings:
        assert all(nid in demo_graph.nodes for nid in finding.involved_node_ids)
        assert all(eid in demo_graph.edges for eid in finding.involved_edge_ids)


def test_detect_structural_rejects_invalid_graph(demo_graph):
    demo_graph.nodes["A"].credibility = 2.0
    with pytest.raises(ValidationError):
        detect_structural(demo_graph, default_pattern_bank())


def _structural_as_sets(findings):
    cycles = {tuple(f.involved_node_ids) for f in findings if f.pattern_id == "circular_reasoning"}
    pairs = {
        (f.involved_node_ids[0], f.involved_node_ids[1])
        for f in findings
        if f.pattern_id == "contradictory_pair"
    }
    unsupported = {
        f.involved_node_ids[0] for f in findings if f.pattern_id == "unsupported_claim"
    }
    isolated = {f.involved_node_ids[0] for f in findings if f.pattern_id == "isolated_node"}
    return cycles, pairs, unsupported, isolated


def test_structural_matches_bruteforce_property():
    bank = default_pattern_bank()
    for seed in range(400):
        graph = random_graph(random.Random(20_000 + seed), max_nodes=8)
        cycles, pairs, unsupported, isolated = _structural_as_sets(detect_structural(graph, bank))
        assert cycles == brute_support_cycles(graph)
        assert pairs == brute_contradictory_pairs(graph)
        assert unsupported == brute_unsupported(graph)
        assert isolated == brute_isolated(graph)


def test_removing_edge_never_creates_cycle_finding():
    bank = default_pattern_bank()
    for seed in range(150):
        rng = random.Random(30_000 + seed)
        graph = random_graph(rng, max_nodes=7, edge_prob=0.3)
        if not graph.edges:
            continue
        before, *_ = _structural_as_sets(detect_structural(graph, bank))
        victim = rng.choice(list(graph.edges))
        del graph.edges[victim]
        after, *_ = _structural_as_sets(detect_structural(graph, bank))
        assert after <= before


def test_detect_structural_is_provider_free_and_deterministic(demo_graph):
    bank = default_pattern_bank()
    first = detect_structural(demo_graph, bank)
    second = detect_structural(demo_graph, bank)
    assert first == second


# ---------------------------------------------------------------------------
# Semantic detection
# ---------------------------------------------------------------------------


def test_semantic_mock_flags_edge(demo_graph):
    reply = json.dumps(
        {"findings": [{"node_ids": [], "edge_ids": ["CB"], "explanation": "misstates the target"}]}
    )
    provider = MockProvider(responses={"critique_semantic": reply})
    bank = load_pattern_bank(MINIMAL_SEMANTIC)
    detection = detect_semantic(demo_graph, bank, provider)
    assert len(detection.findings) == 1
    finding = detection.findings[0]
    assert finding.pattern_id == "straw_man"
    assert finding.involved_edge_ids == ["CB"]
    assert finding.origin is PatternKind.SEMANTIC
    assert detection.diagnostics == []


def test_semantic_malformed_reply_yields_diagnostic(demo_graph):
    provider = MockProvider(responses={"critique_semantic": "not json at all"}, max_retries=1)
    bank = load_pattern_bank(MINIMAL_SEMANTIC)
    detection = detect_semantic(demo_graph, bank, provider)
    assert detection.findings == []
    assert len(detection.diagnostics) == 1
    assert "straw_man" in detection.diagnostics[0]


def test_semantic_unknown_ids_dropped_with_diagnostic(demo_graph):
    reply = json.dumps(
        {"findings": [{"node_ids": ["nope"], "edge_ids": [], "explanation": "ghost"}]}
    )
    provider = MockProvider(responses={"critique_semantic": reply})
    detection = detect_semantic(demo_graph, load_pattern_bank(MINIMAL_SEMANTIC), provider)
    assert detection.findings == []
    assert len(detection.diagnostics) == 1


def test_semantic_empty_graph_skips_provider(empty_graph):
    provider = MockProvider()
    detection = detect_semantic(empty_graph, default_pattern_bank(), provider)
    assert detection.findings == []
    assert detection.diagnostics == []
    assert provider.calls == []


def test_semantic_transport_error_propagates(demo_graph):
    provider = MockProvider(
        responses={"critique_semantic": [ProviderError("down"), ProviderError("down"), ProviderError("down")]},
        max_retries=2,
    )
    with pytest.raises(ProviderError):
        detect_semantic(demo_graph, load_pattern_bank(MINIMAL_SEMANTIC), provider)


def test_semantic_retry_then_success(demo_graph):
    good = json.dumps(
        {"findings": [{"node_ids": ["A"], "edge_ids": [], "explanation": "after retry"}]}
    )
    provider = MockProvider(responses={"critique_semantic": ["garbage", good]})
    detection = detect_semantic(demo_graph, load_pattern_bank(MINIMAL_SEMANTIC), provider)
    assert len(detection.findings) == 1
    # the retry embedded the schema complaint
    assert len(provider.calls) == 2
    assert "rejected" in provider.calls[1].messages[-1]["content"]
