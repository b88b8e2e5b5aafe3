"""Provider-backed analysis operations.

Each operation renders a prompt, submits it through the shared retry
plumbing, and parses the reply against a strict schema with closed label
sets. Providers never hand back numbers that land in score fields: strength
labels go through the engine's band mapping like every other label, and
extract offsets are recomputed locally by exact substring search rather
than trusted from the reply.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from ..errors import ClassificationFailedError, GenerationFailedError, ValidationError
from ..graph import ArgumentGraph, Polarity, QualitativeStrength, Relation
from ..serialize import graph_to_document
from . import prompts
from .provider import ChatProvider, ChatRequest, request_json, request_text


@dataclass
class EdgeClassification:
    relation: Relation
    strength: QualitativeStrength
    justification: str


@dataclass
class EvidenceAssessment:
    polarity: Polarity
    strength: QualitativeStrength
    justification: str


@dataclass
class Assumption:
    """An implicit premise a relation depends on, rated 1 (minor) to 5 (load-bearing)."""

    text: str
    importance: int
    justification: str

    def to_document(self) -> dict[str, Any]:
        return {"text": self.text, "importance": self.importance, "justification": self.justification}


@dataclass
class ExtractSuggestion:
    """A verbatim slice of a source document judged relevant to a claim."""

    document_id: str
    start_offset: int
    end_offset: int
    excerpt: str
    relevance: QualitativeStrength

    def to_document(self) -> dict[str, Any]:
        return {
            "document_id": self.document_id,
            "start_offset": self.start_offset,
            "end_offset": self.end_offset,
            "excerpt": self.excerpt,
            "relevance": self.relevance.value,
        }


@dataclass
class ExtractResult:
    suggestions: list[ExtractSuggestion] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)


@dataclass
class ChatSession:
    """A copilot conversation; messages alternate user/assistant roles."""

    session_id: str
    messages: list[dict[str, str]] = field(default_factory=list)


def _require_nonempty(value: str, what: str) -> None:
    if not value or not value.strip():
        raise ValidationError(f"{what} must be non-empty")


def _label(enum_cls, value: Any, what: str):
    if not isinstance(value, str):
        raise ValueError(f"{what} must be a string label")
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(repr(m.value) for m in enum_cls)
        raise ValueError(f"{what} {value!r} is not one of {allowed}") from None


def _text_field(value: Any, what: str) -> str:
    if not isinstance(value, str) or not value.strip():
        raise ValueError(f"{what} must be a non-empty string")
    return value


def classify_edge(provider: ChatProvider, source_claim: str, target_claim: str) -> EdgeClassification:
    """Ask the provider to label the relation between two claims for human review."""
    _require_nonempty(source_claim, "source claim")
    _require_nonempty(target_claim, "target claim")

    def check(data: Any) -> EdgeClassification:
        if not isinstance(data, dict) or set(data) != {"relation", "strength", "justification"}:
            raise ValueError('reply must be {"relation", "strength", "justification"}')
        return EdgeClassification(
            relation=_label(Relation, data["relation"], "relation"),
            strength=_label(QualitativeStrength, data["strength"], "strength"),
            justification=_text_field(data["justification"], "justification"),
        )

    request = ChatRequest(
        capability="classify_edge",
        system=prompts.CLASSIFY_EDGE_SYSTEM,
        messages=[{"role": "user", "content": prompts.classify_edge_user(source_claim, target_claim)}],
        payload={"source_claim": source_claim, "target_claim": target_claim},
    )
    return request_json(provider, request, check, failure=ClassificationFailedError)


def assess_evidence(provider: ChatProvider, claim: str, evidence_excerpt: str) -> EvidenceAssessment:
    """Ask the provider whether an excerpt supports or negates a claim, and how strongly."""
    _require_nonempty(claim, "claim")
    _require_nonempty(evidence_excerpt, "evidence excerpt")

    def check(data: Any) -> EvidenceAssessment:
        if not isinstance(data, dict) or set(data) != {"polarity", "strength", "justification"}:
            raise ValueError('reply must be {"polarity", "strength", "justification"}')
        return EvidenceAssessment(
            polarity=_label(Polarity, data["polarity"], "polarity"),
            strength=_label(QualitativeStrength, data["strength"], "strength"),
            justification=_text_field(data["justification"], "justification"),
        )

    request = ChatRequest(
        capability="assess_evidence",
        system=prompts.ASSESS_EVIDENCE_SYSTEM,
        messages=[{"role": "user", "content": prompts.assess_evidence_user(claim, evidence_excerpt)}],
        payload={"claim": claim, "excerpt": evidence_excerpt},
    )
    return request_json(provider, request, check, failure=ClassificationFailedError)


def suggest_extracts(
    provider: ChatProvider,
    document: str,
    claim: str,
    max_suggestions: int,
    document_id: str = "",
) -> ExtractResult:
    """Ask the provider for relevant passages; offsets are located locally.

    Replies carry quoted excerpts only. Each excerpt is searched for
    verbatim in the document; what cannot be found is dropped with a
    diagnostic instead of trusting provider-supplied positions.
    """
    _require_nonempty(document, "document")
    if max_suggestions < 1:
        raise ValidationError(f"max_suggestions must be >= 1, got {max_suggestions}")

    def check(data: Any) -> list[dict[str, Any]]:
        if not isinstance(data, dict) or set(data) != {"extracts"} or not isinstance(data["extracts"], list):
            raise ValueError('reply must be {"extracts": [...]}')
        entries = []
        for i, entry in enumerate(data["extracts"]):
            if not isinstance(entry, dict) or set(entry) != {"excerpt", "relevance"}:
                raise ValueError(f'extracts[{i}] must be {{"excerpt", "relevance"}}')
            entries.append(
                {
                    "excerpt": _text_field(entry["excerpt"], f"extracts[{i}].excerpt"),
                    "relevance": _label(QualitativeStrength, entry["relevance"], f"extracts[{i}].relevance"),
                }
            )
        return entries

    request = ChatRequest(
        capability="suggest_extracts",
        system=prompts.SUGGEST_EXTRACTS_SYSTEM,
        messages=[
            {"role": "user", "content": prompts.suggest_extracts_user(document, claim, max_suggestions)}
        ],
        payload={"document": document, "claim": claim, "max_suggestions": max_suggestions},
    )
    entries = request_json(provider, request, check)

    result = ExtractResult()
    for entry in entries:
        if len(result.suggestions) >= max_suggestions:
            break
        excerpt = entry["excerpt"]
        start = document.find(excerpt)
        if start < 0:
            result.diagnostics.append(f"excerpt not found verbatim in document: {excerpt[:80]!r}")
            continue
        result.suggestions.append(
            ExtractSuggestion(
                document_id=document_id,
                start_offset=start,
                end_offset=start + len(excerpt),
                excerpt=excerpt,
                relevance=entry["relevance"],
            )
        )
    return result


def generate_assumptions(
    provider: ChatProvider,
    source_claim: str,
    target_claim: str,
    relation: Relation,
) -> list[Assumption]:
    """Surface exactly three implicit assumptions behind a claimed relation."""
    _require_nonempty(source_claim, "source claim")
    _require_nonempty(target_claim, "target claim")

    def check(data: Any) -> list[Assumption]:
        if not isinstance(data, dict) or set(data) != {"assumptions"} or not isinstance(data["assumptions"], list):
            raise ValueError('reply must be {"assumptions": [...]}')
        entries = data["assumptions"]
        if len(entries) != 3:
            raise ValueError(f"exactly 3 assumptions required, got {len(entries)}")
        assumptions = []
        for i, entry in enumerate(entries):
            if not isinstance(entry, dict) or set(entry) != {"text", "importance", "justification"}:
                raise ValueError(f'assumptions[{i}] must be {{"text", "importance", "justification"}}')
            importance = entry["importance"]
            if isinstance(importance, bool) or not isinstance(importance, int) or not 1 <= importance <= 5:
                raise ValueError(f"assumptions[{i}].importance must be an integer in [1, 5]")
            assumptions.append(
                Assumption(
                    text=_text_field(entry["text"], f"assumptions[{i}].text"),
                    importance=importance,
                    justification=_text_field(entry["justification"], f"assumptions[{i}].justification"),
                )
            )
        return assumptions

    request = ChatRequest(
        capability="generate_assumptions",
        system=prompts.GENERATE_ASSUMPTIONS_SYSTEM + prompts.assumption_fewshot_corpus(),
        messages=[
            {
                "role": "user",
                "content": prompts.generate_assumptions_user(source_claim, target_claim, relation.value),
            }
        ],
        payload={
            "source_claim": source_claim,
            "target_claim": target_claim,
            "relation": relation.value,
        },
    )
    return request_json(provider, request, check, failure=GenerationFailedError)


def chat(
    provider: ChatProvider,
    session: ChatSession,
    graph: ArgumentGraph,
    user_message: str,
) -> str:
    """One copilot turn; a fresh graph snapshot is embedded on every call.

    The session transcript is only extended after a successful reply, so a
    provider failure leaves it untouched.
    """
    _require_nonempty(user_message, "message")
    snapshot = graph_to_document(graph)
    request = ChatRequest(
        capability="chat",
        system=prompts.CHAT_SYSTEM + json.dumps(snapshot, indent=2),
        messages=[*session.messages, {"role": "user", "content": user_message}],
        payload={"graph": snapshot, "message": user_message},
    )
    reply = request_text(provider, request)
    session.messages.append({"role": "user", "content": user_message})
    session.messages.append({"role": "assistant", "content": reply})
    return reply
