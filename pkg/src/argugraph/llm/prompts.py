"""Prompt texts for the provider-backed capabilities.

All prompts demand closed-set qualitative labels and JSON-only replies;
numeric scores are produced downstream by the engine's band mapping, never
by the provider.
"""

from __future__ import annotations

from importlib import resources

STRENGTH_CHOICES = '"none", "very_weak", "weak", "moderate", "strong", "very_strong"'

CLASSIFY_EDGE_SYSTEM = f"""You classify the relation between two claims in an argument map.
Reply with JSON only, in exactly this shape:
{{"relation": "support" | "attack", "strength": one of {STRENGTH_CHOICES}, "justification": "<one or two sentences>"}}
Use the qualitative labels only; never answer with a number."""

ASSESS_EVIDENCE_SYSTEM = f"""You judge how a text excerpt bears on a claim.
Reply with JSON only, in exactly this shape:
{{"polarity": "supporting" | "negating", "strength": one of {STRENGTH_CHOICES}, "justification": "<one or two sentences>"}}
Use the qualitative labels only; never answer with a number."""

SUGGEST_EXTRACTS_SYSTEM = """You find passages in a document that are relevant to a claim.
Reply with JSON only, in exactly this shape:
{"extracts": [{"excerpt": "<verbatim passage copied from the document>", "relevance": "<qualitative label>"}]}
Every excerpt must be copied character-for-character from the document; do not paraphrase."""

GENERATE_ASSUMPTIONS_SYSTEM = """You surface implicit assumptions that a relation between two claims depends on.
Reply with JSON only, in exactly this shape:
{"assumptions": [{"text": "...", "importance": <integer 1-5>, "justification": "..."}]}
Return exactly three assumptions. Worked examples follow.

"""

CHAT_SYSTEM = """You are the analysis copilot for an argument map. The current state of the
map is embedded below as JSON; every answer must be grounded in it. Point at claims and
edges by id when discussing strengths, weaknesses, or gaps.

Graph state:
"""


def classify_edge_user(source_claim: str, target_claim: str) -> str:
    return f"Source claim: {source_claim}\nTarget claim: {target_claim}"


def assess_evidence_user(claim: str, excerpt: str) -> str:
    return f"Claim: {claim}\nExcerpt: {excerpt}"


def suggest_extracts_user(document: str, claim: str, max_suggestions: int) -> str:
    return (
        f"Claim: {claim}\n"
        f"Return at most {max_suggestions} extracts.\n"
        f"Document:\n{document}"
    )


def generate_assumptions_user(source_claim: str, target_claim: str, relation: str) -> str:
    return (
        f"Source claim: {source_claim}\n"
        f"Target claim: {target_claim}\n"
        f"Stated relation: {relation}"
    )


def assumption_fewshot_corpus() -> str:
    """Worked examples embedded in the assumption-generation prompt (plain-text asset)."""
    return resources.files("argugraph").joinpath("data/assumption_fewshot.txt").read_text("utf-8")
