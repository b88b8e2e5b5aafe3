"""Argumentation graphs with credibility propagation, critique, and reporting."""

from .engine import (
    EVANS_BANDS,
    PropagationConfig,
    PropagationResult,
    edge_weight,
    evans_magnitude,
    evidence_score,
    node_preactivation,
    propagate,
)
from .errors import (
    ArgugraphError,
    ClassificationFailedError,
    ConflictError,
    DocumentParseError,
    GenerationFailedError,
    NotFoundError,
    ProviderConfigError,
    ProviderError,
    ReplyFormatError,
    ValidationError,
)
from .graph import (
    ArgumentGraph,
    ClaimNode,
    ClaimType,
    Edge,
    Evidence,
    Origin,
    Polarity,
    QualitativeStrength,
    Relation,
    Violation,
    add_claim,
    add_edge,
    add_evidence,
    new_graph,
    update_edge,
    update_evidence,
    validate_graph,
)
from .patterns import (
    Finding,
    Pattern,
    PatternBank,
    default_pattern_bank,
    detect_semantic,
    detect_structural,
    load_pattern_bank,
)
from .report import Report, generate_report, render_markdown, report_to_document
from .serialize import graph_from_document, graph_to_document, load_graph_file, parse_graph_json

__version__ = "0.1.0"

__all__ = [
    "ArgumentGraph",
    "ArgugraphError",
    "ClaimNode",
    "ClaimType",
    "ClassificationFailedError",
    "ConflictError",
    "DocumentParseError",
    "EVANS_BANDS",
    "Edge",
    "Evidence",
    "Finding",
    "GenerationFailedError",
    "NotFoundError",
    "Origin",
    "Pattern",
    "PatternBank",
    "Polarity",
    "PropagationConfig",
    "PropagationResult",
    "ProviderConfigError",
    "ProviderError",
    "QualitativeStrength",
    "Relation",
    "ReplyFormatError",
    "Report",
    "ValidationError",
    "Violation",
    "add_claim",
    "add_edge",
    "add_evidence",
    "default_pattern_bank",
    "detect_semantic",
    "detect_structural",
    "edge_weight",
    "evans_magnitude",
    "evidence_score",
    "generate_report",
    "graph_from_document",
    "graph_to_document",
    "load_graph_file",
    "load_pattern_bank",
    "new_graph",
    "node_preactivation",
    "parse_graph_json",
    "propagate",
    "render_markdown",
    "report_to_document",
    "update_edge",
    "update_evidence",
    "validate_graph",
]
