"""Eight-section analysis report assembled from engine and critique output.

Sections 2-7 are templated deterministically from their inputs; the opening
summary and closing recommendations are provider-generated prose that
degrades to a templated fallback (with a visible notice) when the provider
is unavailable. Every number in the report is copied from engine output,
never recomputed here.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from datetime import datetime
from typing import Any, Mapping, Sequence

from .engine import PropagationResult, edge_weight, evidence_score
from .errors import ProviderError, ReplyFormatError
from .graph import ArgumentGraph, utc_now
from .llm.capabilities import Assumption
from .llm.provider import ChatProvider, ChatRequest, request_text
from .patterns import Finding

SECTION_TITLES = (
    "Executive Summary",
    "Graph Overview & Statistics",
    "Claim Credibility Analysis",
    "Evidence Evaluation",
    "Edge Validation",
    "Assumptions Analysis",
    "Graph Critique",
    "Recommendations",
)

_DEGRADED_NOTICE = "[Language-model assistance unavailable; this section was templated instead.]"


@dataclass
class ReportSection:
    title: str
    body: str


@dataclass
class Report:
    graph_id: str
    generated_at: datetime
    sections: list[ReportSection]


def format_score(value: float) -> str:
    """Canonical rendering of a credibility score inside reports."""
    return f"{value:.5f}"


def _provider_prose(
    provider: ChatProvider | None,
    capability: str,
    instruction: str,
    payload: dict[str, Any],
    fallback: str,
) -> str:
    if provider is None:
        return f"{fallback}\n\n{_DEGRADED_NOTICE}"
    request = ChatRequest(
        capability=capability,
        system="You write one short paragraph of report prose. Reply with plain text only.",
        messages=[{"role": "user", "content": f"{instruction}\n\n{json.dumps(payload, indent=2)}"}],
        payload=payload,
    )
    try:
        return request_text(provider, request)
    except (ProviderError, ReplyFormatError):
        return f"{fallback}\n\n{_DEGRADED_NOTICE}"


def _overview_body(graph: ArgumentGraph, propagation: PropagationResult) -> str:
    type_counts: dict[str, int] = {"fact": 0, "policy": 0, "value": 0}
    for node in graph.nodes.values():
        type_counts[node.claim_type.value] += 1
    support = sum(1 for e in graph.edges.values() if e.relation.value == "support")
    attack = len(graph.edges) - support
    supporting = sum(1 for n in graph.nodes.values() for e in n.evidence if e.polarity.value == "supporting")
    negating = sum(len(n.evidence) for n in graph.nodes.values()) - supporting
    overridden = sum(1 for e in graph.edges.values() if e.origin.value == "human_override") + sum(
        1 for n in graph.nodes.values() for e in n.evidence if e.origin.value == "human_override"
    )
    lines = [
        f"Claims: {len(graph.nodes)} ({type_counts['fact']} fact, {type_counts['policy']} policy, "
        f"{type_counts['value']} value)",
        f"Edges: {len(graph.edges)} ({support} support, {attack} attack)",
        f"Evidence items: {supporting + negating} ({supporting} supporting, {negating} negating)",
        f"Human overrides: {overridden}",
        f"Evidence scaling delta: {propagation.delta}",
    ]
    return "\n".join(lines)


def _credibility_body(graph: ArgumentGraph, propagation: PropagationResult) -> str:
    lines = []
    for node_id in graph.nodes:
        node = graph.nodes[node_id]
        lines.append(f"- {node_id} ({node.claim_type.value}): {format_score(propagation.scores[node_id])}")
    status = "converged" if propagation.converged else "did NOT converge"
    lines.append(
        f"Propagation {status} in {propagation.iterations_used} iteration(s); "
        f"max residual {propagation.max_residual:.3e} at epsilon {propagation.epsilon:.1e}."
    )
    return "\n".join(lines)


def _evidence_body(graph: ArgumentGraph) -> str:
    lines = []
    bare: list[str] = []
    for node in graph.nodes.values():
        if not node.evidence:
            bare.append(node.id)
            continue
        lines.append(f"Claim {node.id}: {node.text}")
        for item in node.evidence:
            lines.append(
                f"- {item.id} ({item.polarity.value}/{item.strength.value}, value {evidence_score(item):+.2f}, "
                f"{item.origin.value}): \"{item.excerpt}\" -- {item.justification}"
            )
    if bare:
        lines.append("Claims without evidence: " + ", ".join(bare))
    return "\n".join(lines) if lines else "No claims in this graph."


def _edges_body(graph: ArgumentGraph) -> str:
    if not graph.edges:
        return "No edges in this graph."
    lines = []
    for edge in graph.edges.values():
        lines.append(
            f"- {edge.id}: {edge.source_id} -{edge.relation.value}-> {edge.target_id} "
            f"({edge.strength.value}, weight {edge_weight(edge):+.2f}, {edge.origin.value}) "
            f"-- {edge.justification}"
        )
    return "\n".join(lines)


def _assumptions_body(
    graph: ArgumentGraph,
    assumptions: Mapping[str, Sequence[Assumption]] | None,
) -> str:
    if not assumptions:
        return (
            "No assumption analysis was attached to this report. Generate assumptions per edge "
            "(CLI or API assumptions operation) and pass them in to populate this section."
        )
    lines = []
    for edge_id in sorted(assumptions):
        edge = graph.edges.get(edge_id)
        header = (
            f"Edge {edge_id}: {edge.source_id} -{edge.relation.value}-> {edge.target_id}"
            if edge is not None
            else f"Edge {edge_id}"
        )
        lines.append(header)
        for i, assumption in enumerate(assumptions[edge_id], start=1):
            lines.append(
                f"  {i}. {assumption.text} (importance {assumption.importance}/5) "
                f"-- {assumption.justification}"
            )
    return "\n".join(lines)


def _critique_body(findings: Sequence[Finding]) -> str:
    if not findings:
        return "No pattern findings."
    lines = []
    for finding in findings:
        involved = []
        if finding.involved_node_ids:
            involved.append("nodes: " + ", ".join(finding.involved_node_ids))
        if finding.involved_edge_ids:
            involved.append("edges: " + ", ".join(finding.involved_edge_ids))
        lines.append(
            f"- [{finding.severity.value}] {finding.pattern_id} ({finding.origin.value}): "
            f"{finding.explanation} ({'; '.join(involved)})"
        )
    return "\n".join(lines)


def generate_report(
    graph: ArgumentGraph,
    propagation: PropagationResult,
    findings: Sequence[Finding],
    provider: ChatProvider | None = None,
    assumptions: Mapping[str, Sequence[Assumption]] | None = None,
    now: datetime | None = None,
) -> Report:
    """Assemble the eight fixed sections; never hard-fails on provider trouble."""
    stats_payload = {
        "graph_id": graph.id,
        "title": graph.title,
        "node_count": len(graph.nodes),
        "edge_count": len(graph.edges),
        "converged": propagation.converged,
        "finding_count": len(findings),
    }
    summary_fallback = (
        f"The argument map '{graph.title}' contains {len(graph.nodes)} claims and "
        f"{len(graph.edges)} edges. Credibility propagation "
        f"{'converged' if propagation.converged else 'did not converge'}; "
        f"{len(findings)} critique finding(s) were recorded."
    )
    recommendations_fallback = (
        "Review the critique findings above, attach evidence to unsupported claims, and re-run "
        "propagation after each change."
    )
    sections = [
        ReportSection(
            SECTION_TITLES[0],
            _provider_prose(
                provider,
                "report_summary",
                "Write a short executive summary of this argument map analysis.",
                stats_payload,
                summary_fallback,
            ),
        ),
        ReportSection(SECTION_TITLES[1], _overview_body(graph, propagation)),
        ReportSection(SECTION_TITLES[2], _credibility_body(graph, propagation)),
        ReportSection(SECTION_TITLES[3], _evidence_body(graph)),
        ReportSection(SECTION_TITLES[4], _edges_body(graph)),
        ReportSection(SECTION_TITLES[5], _assumptions_body(graph, assumptions)),
        ReportSection(SECTION_TITLES[6], _critique_body(findings)),
        ReportSection(
            SECTION_TITLES[7],
            _provider_prose(
                provider,
                "report_recommendations",
                "Write short, concrete recommendations for improving this argument map.",
                stats_payload,
                recommendations_fallback,
            ),
        ),
    ]
    return Report(graph_id=graph.id, generated_at=now or utc_now(), sections=sections)


def report_to_document(report: Report) -> dict[str, Any]:
    return {
        "graph_id": report.graph_id,
        "generated_at": report.generated_at.isoformat(),
        "sections": [{"title": s.title, "body": s.body} for s in report.sections],
    }


def render_markdown(report: Report) -> str:
    lines = [
        f"# Argument analysis report: {report.graph_id}",
        "",
        f"_Generated {report.generated_at.isoformat()}_",
        "",
    ]
    for i, section in enumerate(report.sections, start=1):
        lines.append(f"## {i}. {section.title}")
        lines.append("")
        lines.append(section.body)
        lines.append("")
    return "\n".join(lines)


def markdown_filename(graph_id: str) -> str:
    return f"{graph_id}-report.md"


def write_scores_csv(graph: ArgumentGraph, propagation: PropagationResult, path) -> None:
    """Delimited per-claim scores for spreadsheet use, alongside the report files."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["node_id", "claim_type", "credibility", "text"])
        for node_id, node in graph.nodes.items():
            writer.writerow([node_id, node.claim_type.value, format_score(propagation.scores[node_id]), node.text])
