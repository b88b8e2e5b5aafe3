"""Chat-completion providers and the analysis capabilities built on them."""

from .capabilities import (
    Assumption,
    ChatSession,
    EdgeClassification,
    EvidenceAssessment,
    ExtractResult,
    ExtractSuggestion,
    assess_evidence,
    chat,
    classify_edge,
    generate_assumptions,
    suggest_extracts,
)
from .provider import (
    ChatProvider,
    ChatRequest,
    MockProvider,
    OpenAICompatibleProvider,
    ProviderConfig,
    provider_from_env,
)

__all__ = [
    "Assumption",
    "ChatProvider",
    "ChatRequest",
    "ChatSession",
    "EdgeClassification",
    "EvidenceAssessment",
    "ExtractResult",
    "ExtractSuggestion",
    "MockProvider",
    "OpenAICompatibleProvider",
    "ProviderConfig",
    "assess_evidence",
    "chat",
    "classify_edge",
    "generate_assumptions",
    "provider_from_env",
    "suggest_extracts",
]
