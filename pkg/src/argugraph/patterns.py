"""Argument pattern bank: loading, structural detection, semantic detection.

Structural motifs (support cycles, contradictory pairs, unsupported and
isolated claims) are matched deterministically with no provider involvement.
Semantic patterns (straw man, false cause, ...) cannot be decided from shape
alone and are delegated to the chat-completion provider, one prompt per
pattern, with strict reply parsing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Any

import yaml

from .cycles import elementary_cycles
from .errors import DocumentParseError, ReplyFormatError, ValidationError
from .graph import ArgumentGraph, Relation, validate_graph
from .llm.provider import ChatProvider, ChatRequest, request_json
from .serialize import graph_to_document

BANK_VERSION = "1"


class PatternCategory(Enum):
    FALLACY = "fallacy"
    GOOD_ARGUMENT = "good_argument"
    ABSURD_REASONING = "absurd_reasoning"


class PatternKind(Enum):
    STRUCTURAL = "structural"
    SEMANTIC = "semantic"


class StructuralSignature(Enum):
    CYCLE = "cycle"
    CONTRADICTORY_PAIR = "contradictory_pair"
    UNSUPPORTED_CLAIM = "unsupported_claim"
    ISOLATED_NODE = "isolated_node"


class Severity(Enum):
    INFO = "info"
    WARNING = "warning"
    CRITICAL = "critical"


@dataclass
class Pattern:
    """One critique rule from the bank."""

    id: str
    name: str
    category: PatternCategory
    kind: PatternKind
    description: str
    severity: Severity
    structural_signature: StructuralSignature | None = None
    prompt_template: str | None = None


@dataclass
class PatternBank:
    version: str
    patterns: list[Pattern]

    def get(self, pattern_id: str) -> Pattern:
        for pattern in self.patterns:
            if pattern.id == pattern_id:
                return pattern
        raise KeyError(pattern_id)


@dataclass
class Finding:
    """One pattern match against a concrete graph."""

    pattern_id: str
    involved_node_ids: list[str]
    involved_edge_ids: list[str]
    explanation: str
    severity: Severity
    category: PatternCategory
    origin: PatternKind

    def to_document(self) -> dict[str, Any]:
        return {
            "pattern_id": self.pattern_id,
            "involved_node_ids": list(self.involved_node_ids),
            "involved_edge_ids": list(self.involved_edge_ids),
            "explanation": self.explanation,
            "severity": self.severity.value,
            "category": self.category.value,
            "origin": self.origin.value,
        }


@dataclass
class SemanticDetection:
    """Semantic findings plus diagnostics for replies that failed the schema."""

    findings: list[Finding] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Bank loading
# ---------------------------------------------------------------------------

_PATTERN_REQUIRED = {"id", "name", "category", "kind", "description", "severity"}


def _parse_pattern(obj: Any, index: int, problems: list[str]) -> Pattern | None:
    where = f"patterns[{index}]"
    if not isinstance(obj, dict):
        problems.append(f"{where}: expected a mapping")
        return None
    allowed = _PATTERN_REQUIRED | {"structural_signature", "prompt_template"}
    unknown = sorted(set(obj) - allowed)
    if unknown:
        problems.append(f"{where}: unknown field(s): {', '.join(unknown)}")
        return None
    missing = sorted(_PATTERN_REQUIRED - set(obj))
    if missing:
        problems.append(f"{where}: missing field(s): {', '.join(missing)}")
        return None

    def enum_field(enum_cls, key):
        try:
            return enum_cls(obj[key])
        except ValueError:
            allowed_values = ", ".join(repr(m.value) for m in enum_cls)
            problems.append(f"{where}.{key}: {obj[key]!r} is not one of {allowed_values}")
            return None

    category = enum_field(PatternCategory, "category")
    kind = enum_field(PatternKind, "kind")
    severity = enum_field(Severity, "severity")
    if category is None or kind is None or severity is None:
        return None

    signature = None
    template = None
    if kind is PatternKind.STRUCTURAL:
        if "structural_signature" not in obj:
            problems.append(f"{where}: structural pattern lacks structural_signature")
            return None
        if "prompt_template" in obj:
            problems.append(f"{where}: structural pattern must not carry prompt_template")
            return None
        signature = enum_field(StructuralSignature, "structural_signature")
        if signature is None:
            return None
    else:
        if "prompt_template" not in obj or not str(obj["prompt_template"]).strip():
            problems.append(f"{where}: semantic pattern lacks prompt_template")
            return None
        if "structural_signature" in obj:
            problems.append(f"{where}: semantic pattern must not carry structural_signature")
            return None
        template = str(obj["prompt_template"])

    return Pattern(
        id=str(obj["id"]),
        name=str(obj["name"]),
        category=category,
        kind=kind,
        description=str(obj["description"]),
        severity=severity,
        structural_signature=signature,
        prompt_template=template,
    )


def load_pattern_bank(source: str | dict) -> PatternBank:
    """Parse and validate a pattern bank from YAML text or a pre-parsed mapping."""
    if isinstance(source, str):
        try:
            doc = yaml.safe_load(source)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            location = f"line {mark.line + 1}, column {mark.column + 1}" if mark else ""
            raise DocumentParseError(f"invalid YAML: {exc}", location) from None
    else:
        doc = source
    if not isinstance(doc, dict):
        raise DocumentParseError("pattern bank must be a mapping with 'version' and 'patterns'")

    problems: list[str] = []
    unknown = sorted(set(doc) - {"version", "patterns"})
    if unknown:
        problems.append(f"unknown top-level field(s): {', '.join(unknown)}")
    version = doc.get("version")
    if version != BANK_VERSION:
        problems.append(f"unsupported bank version {version!r} (expected {BANK_VERSION!r})")
    entries = doc.get("patterns")
    patterns: list[Pattern] = []
    if not isinstance(entries, list) or not entries:
        problems.append("patterns must be a non-empty list")
    else:
        for i, entry in enumerate(entries):
            pattern = _parse_pattern(entry, i, problems)
            if pattern is not None:
                patterns.append(pattern)
        seen: set[str] = set()
        for pattern in patterns:
            if pattern.id in seen:
                problems.append(f"duplicate pattern id {pattern.id!r}")
            seen.add(pattern.id)

    if problems:
        raise ValidationError("invalid pattern bank: " + "; ".join(problems))
    return PatternBank(version=str(version), patterns=patterns)


def load_pattern_bank_file(path) -> PatternBank:
    with open(path, "r", encoding="utf-8") as handle:
        return load_pattern_bank(handle.read())


def default_pattern_bank() -> PatternBank:
    """The bank shipped with the package (structural motifs + minimal semantic rules)."""
    text = resources.files("argugraph").joinpath("data/default_patterns.yaml").read_text("utf-8")
    return load_pattern_bank(text)


# ---------------------------------------------------------------------------
# Structural detection
# ---------------------------------------------------------------------------


def _sorted_findings(findings: list[Finding]) -> list[Finding]:
    return sorted(
        findings,
        key=lambda f: (
            f.pattern_id,
            min(f.involved_node_ids) if f.involved_node_ids else "",
            tuple(f.involved_node_ids),
            tuple(f.involved_edge_ids),
        ),
    )


def _cycle_findings(graph: ArgumentGraph, pattern: Pattern) -> list[Finding]:
    support_adj: dict[str, list[str]] = {nid: [] for nid in graph.nodes}
    support_edge_ids: dict[tuple[str, str], str] = {}
    for edge in graph.edges.values():
        if edge.relation is Relation.SUPPORT:
            support_adj[edge.source_id].append(edge.target_id)
            support_edge_ids[(edge.source_id, edge.target_id)] = edge.id
    findings = []
    for cycle in elementary_cycles(support_adj):
        hops = list(zip(cycle, cycle[1:] + cycle[:1]))
        edge_ids = [support_edge_ids[(u, v)] for u, v in hops]
        chain = " -> ".join(cycle + [cycle[0]])
        findings.append(
            Finding(
                pattern_id=pattern.id,
                involved_node_ids=list(cycle),
                involved_edge_ids=edge_ids,
                explanation=f"Support cycle {chain}: these claims ultimately justify themselves.",
                severity=pattern.severity,
                category=pattern.category,
                origin=PatternKind.STRUCTURAL,
            )
        )
    return findings


def _contradictory_pair_findings(graph: ArgumentGraph, pattern: Pattern) -> list[Finding]:
    by_triple: dict[tuple[str, str, Relation], str] = {
        (e.source_id, e.target_id, e.relation): e.id for e in graph.edges.values()
    }
    findings = []
    for (source, target, relation), support_id in sorted(by_triple.items(), key=lambda kv: kv[1]):
        if relation is not Relation.SUPPORT:
            continue
        attack_id = by_triple.get((source, target, Relation.ATTACK))
        if attack_id is None:
            continue
        findings.append(
            Finding(
                pattern_id=pattern.id,
                involved_node_ids=[source, target],
                involved_edge_ids=[support_id, attack_id],
                explanation=(
                    f"Claims {source} and {target} are linked by both a support edge "
                    f"({support_id}) and an attack edge ({attack_id}) in the same direction."
                ),
                severity=pattern.severity,
                category=pattern.category,
                origin=PatternKind.STRUCTURAL,
            )
        )
    return findings


def _unsupported_claim_findings(graph: ArgumentGraph, pattern: Pattern) -> list[Finding]:
    supported = {e.target_id for e in graph.edges.values() if e.relation is Relation.SUPPORT}
    findings = []
    for node in graph.nodes.values():
        if not node.evidence and node.id not in supported:
            findings.append(
                Finding(
                    pattern_id=pattern.id,
                    involved_node_ids=[node.id],
                    involved_edge_ids=[],
                    explanation=f"Claim {node.id} has no attached evidence and no incoming support.",
                    severity=pattern.severity,
                    category=pattern.category,
                    origin=PatternKind.STRUCTURAL,
                )
            )
    return findings


def _isolated_node_findings(graph: ArgumentGraph, pattern: Pattern) -> list[Finding]:
    touched = set()
    for edge in graph.edges.values():
        touched.add(edge.source_id)
        touched.add(edge.target_id)
    findings = []
    for node in graph.nodes.values():
        if node.id not in touched and not node.evidence:
            findings.append(
                Finding(
                    pattern_id=pattern.id,
                    involved_node_ids=[node.id],
                    involved_edge_ids=[],
                    explanation=f"Claim {node.id} is connected to nothing: no edges and no evidence.",
                    severity=pattern.severity,
                    category=pattern.category,
                    origin=PatternKind.STRUCTURAL,
                )
            )
    return findings


_STRUCTURAL_DETECTORS = {
    StructuralSignature.CYCLE: _cycle_findings,
    StructuralSignature.CONTRADICTORY_PAIR: _contradictory_pair_findings,
    StructuralSignature.UNSUPPORTED_CLAIM: _unsupported_claim_findings,
    StructuralSignature.ISOLATED_NODE: _isolated_node_findings,
}


def detect_structural(graph: ArgumentGraph, bank: PatternBank) -> list[Finding]:
    """Match every structural pattern in the bank; deterministic, provider-free."""
    violations = validate_graph(graph)
    if violations:
        summary = "; ".join(f"{v.subject}: {v.message}" for v in violations[:5])
        raise ValidationError(f"cannot critique an invalid graph: {summary}", violations)
    findings: list[Finding] = []
    for pattern in bank.patterns:
        if pattern.kind is PatternKind.STRUCTURAL:
            detector = _STRUCTURAL_DETECTORS[pattern.structural_signature]
            findings.extend(detector(graph, pattern))
    return _sorted_findings(findings)


# ---------------------------------------------------------------------------
# Semantic detection
# ---------------------------------------------------------------------------

_SEMANTIC_SYSTEM = """You review argument maps for a specific reasoning pattern.
Reply with JSON only, in exactly this shape:
{"findings": [{"node_ids": ["..."], "edge_ids": ["..."], "explanation": "..."}]}
Each finding must reference at least one node id or edge id that appears in the map.
Return {"findings": []} when the pattern does not occur."""


def graph_summary(graph: ArgumentGraph) -> str:
    """Compact plain-text rendering of the graph for prompt embedding."""
    lines = [f"Title: {graph.title}", "Claims:"]
    for node in graph.nodes.values():
        supporting = sum(1 for e in node.evidence if e.polarity.value == "supporting")
        negating = len(node.evidence) - supporting
        lines.append(
            f"- [{node.id}] ({node.claim_type.value}) {node.text!r}"
            f" | evidence: {supporting} supporting, {negating} negating"
        )
    lines.append("Edges:")
    for edge in graph.edges.values():
        lines.append(
            f"- [{edge.id}] {edge.source_id} -{edge.relation.value}/{edge.strength.value}-> "
            f"{edge.target_id} | {edge.justification}"
        )
    return "\n".join(lines)


def _check_semantic_reply(data: Any) -> list[dict[str, Any]]:
    if not isinstance(data, dict) or set(data) != {"findings"} or not isinstance(data["findings"], list):
        raise ValueError('reply must be {"findings": [...]}')
    entries = []
    for i, entry in enumerate(data["findings"]):
        if not isinstance(entry, dict):
            raise ValueError(f"findings[{i}] must be an object")
        unknown = sorted(set(entry) - {"node_ids", "edge_ids", "explanation"})
        if unknown:
            raise ValueError(f"findings[{i}] carries unknown field(s): {', '.join(unknown)}")
        node_ids = entry.get("node_ids", [])
        edge_ids = entry.get("edge_ids", [])
        explanation = entry.get("explanation", "")
        if not isinstance(node_ids, list) or not all(isinstance(x, str) for x in node_ids):
            raise ValueError(f"findings[{i}].node_ids must be a list of strings")
        if not isinstance(edge_ids, list) or not all(isinstance(x, str) for x in edge_ids):
            raise ValueError(f"findings[{i}].edge_ids must be a list of strings")
        if not isinstance(explanation, str) or not explanation.strip():
            raise ValueError(f"findings[{i}].explanation must be a non-empty string")
        entries.append({"node_ids": node_ids, "edge_ids": edge_ids, "explanation": explanation})
    return entries


def detect_semantic(graph: ArgumentGraph, bank: PatternBank, provider: ChatProvider) -> SemanticDetection:
    """Run every semantic pattern through the provider and collect findings.

    Transport failures propagate as :class:`ProviderError` (the caller may
    retry); replies that never meet the schema are recorded as diagnostics
    and contribute zero findings.
    """
    result = SemanticDetection()
    if not graph.nodes:
        return result

    summary = graph_summary(graph)
    for pattern in sorted(bank.patterns, key=lambda p: p.id):
        if pattern.kind is not PatternKind.SEMANTIC:
            continue
        template = pattern.prompt_template or ""
        if "{graph_summary}" in template:
            user = template.replace("{graph_summary}", summary)
        else:
            user = f"{template}\n\n{summary}"
        request = ChatRequest(
            capability="critique_semantic",
            system=_SEMANTIC_SYSTEM,
            messages=[{"role": "user", "content": user}],
            payload={
                "pattern_id": pattern.id,
                "pattern_name": pattern.name,
                "description": pattern.description,
                "graph": graph_to_document(graph),
            },
        )
        try:
            entries = request_json(provider, request, _check_semantic_reply)
        except ReplyFormatError as exc:
            result.diagnostics.append(f"{pattern.id}: reply failed schema ({exc})")
            continue
        for entry in entries:
            bad_nodes = [x for x in entry["node_ids"] if x not in graph.nodes]
            bad_edges = [x for x in entry["edge_ids"] if x not in graph.edges]
            if bad_nodes or bad_edges:
                result.diagnostics.append(
                    f"{pattern.id}: dropped finding referencing unknown ids "
                    f"{', '.join(bad_nodes + bad_edges)}"
                )
                continue
            if not entry["node_ids"] and not entry["edge_ids"]:
                result.diagnostics.append(f"{pattern.id}: dropped finding with no involved elements")
                continue
            result.findings.append(
                Finding(
                    pattern_id=pattern.id,
                    involved_node_ids=entry["node_ids"],
                    involved_edge_ids=entry["edge_ids"],
                    explanation=entry["explanation"],
                    severity=pattern.severity,
                    category=pattern.category,
                    origin=PatternKind.SEMANTIC,
                )
            )
    result.findings = _sorted_findings(result.findings)
    return result
