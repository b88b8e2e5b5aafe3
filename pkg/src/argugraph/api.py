"""HTTP service exposing graph CRUD, analysis, chat, and document ingestion.

The service is the single writer over the store: mutations are serialized
per graph id, analysis runs on a revision snapshot and only writes back if
the revision is unchanged, and every error leaves the wire as a structured
``{code, message, details}`` body. Auth is a single static bearer token
(``ARGUGRAPH_API_TOKEN``); when the variable is unset the service runs
open, for local use.
"""

from __future__ import annotations

import os
import threading
from typing import Any

from fastapi import Depends, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, ConfigDict
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import errors
from .engine import PropagationConfig, propagate
from .graph import (
    ClaimType,
    Origin,
    Polarity,
    QualitativeStrength,
    Relation,
    add_claim,
    add_edge,
    add_evidence,
    get_node,
    new_graph,
    new_id,
    stale_node_ids,
    utc_now,
)
from .llm.capabilities import ChatSession, assess_evidence, chat, classify_edge, generate_assumptions, suggest_extracts
from .llm.provider import ChatProvider, provider_from_env
from .patterns import default_pattern_bank, detect_semantic, detect_structural
from .report import generate_report, report_to_document
from .serialize import edge_to_document, evidence_to_document, graph_from_document, graph_to_document, node_to_document
from .store import DocumentStore, GraphStore, StoredGraph

ENV_DATA_DIR = "ARGUGRAPH_DATA_DIR"
ENV_API_TOKEN = "ARGUGRAPH_API_TOKEN"


# ---------------------------------------------------------------------------
# Request bodies
# ---------------------------------------------------------------------------


class _StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ClaimBody(_StrictModel):
    text: str
    claim_type: str


class EdgeBody(_StrictModel):
    source_id: str
    target_id: str
    relation: str
    strength: str
    justification: str = ""
    origin: str = "machine"


class EvidenceBody(_StrictModel):
    excerpt: str
    assess: bool = False
    polarity: str | None = None
    strength: str | None = None
    justification: str = ""
    origin: str | None = None
    source_document: str | None = None


class ClassifyEdgeBody(_StrictModel):
    source_id: str
    target_id: str


class AssumptionsBody(_StrictModel):
    edge_id: str


class ChatBody(_StrictModel):
    message: str
    session_id: str = "default"


class SuggestBody(_StrictModel):
    graph_id: str
    claim_id: str
    max_suggestions: int = 3


def _enum(enum_cls, value: str, what: str):
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(repr(m.value) for m in enum_cls)
        raise errors.ValidationError(f"{what} {value!r} is not one of {allowed}") from None


# ---------------------------------------------------------------------------
# App factory
# ---------------------------------------------------------------------------


def _stored_payload(stored: StoredGraph) -> dict[str, Any]:
    return {
        "revision": stored.revision,
        "graph": graph_to_document(stored.graph),
        "stale_node_ids": stale_node_ids(stored.graph),
        "last_propagation": stored.last_propagation.to_document() if stored.last_propagation else None,
        "last_propagation_revision": stored.last_propagation_revision,
    }


def _error_handler(status: int, code: str):
    def handler(request: Request, exc: Exception) -> JSONResponse:
        details: Any = None
        if isinstance(exc, errors.ValidationError) and exc.violations:
            details = [
                {"code": v.code, "subject": v.subject, "message": v.message} for v in exc.violations
            ]
        elif isinstance(exc, errors.DocumentParseError) and exc.location:
            details = {"location": exc.location}
        return JSONResponse(
            status_code=status,
            content={"code": code, "message": str(exc), "details": details},
        )

    return handler


def create_app(
    data_dir: str | None = None,
    provider: ChatProvider | None = None,
    api_token: str | None = None,
) -> FastAPI:
    """Build the service; arguments override the ``ARGUGRAPH_*`` environment."""
    data_dir = data_dir or os.environ.get(ENV_DATA_DIR) or "argugraph_data"
    api_token = api_token if api_token is not None else os.environ.get(ENV_API_TOKEN)
    if provider is None:
        try:
            provider = provider_from_env()
        except errors.ProviderConfigError:
            provider = None

    app = FastAPI(title="argugraph", version="0.1.0")
    app.state.store = GraphStore(data_dir)
    app.state.documents = DocumentStore(os.path.join(data_dir, "documents"))
    app.state.provider = provider
    app.state.api_token = api_token
    app.state.bank = default_pattern_bank()
    app.state.sessions = {}
    app.state.sessions_guard = threading.Lock()

    def require_auth(request: Request) -> None:
        token = app.state.api_token
        if not token:
            return
        supplied = request.headers.get("authorization", "")
        if supplied != f"Bearer {token}":
            raise StarletteHTTPException(status_code=401, detail="missing or invalid bearer token")

    def require_provider() -> ChatProvider:
        if app.state.provider is None:
            raise errors.ProviderConfigError(
                "no chat-completion provider configured (set ARGUGRAPH_LLM_PROVIDER=mock "
                "or ARGUGRAPH_LLM_ENDPOINT)"
            )
        return app.state.provider

    store: GraphStore = app.state.store
    documents: DocumentStore = app.state.documents
    authed = [Depends(require_auth)]

    app.add_exception_handler(errors.ValidationError, _error_handler(400, "validation_error"))
    app.add_exception_handler(errors.DocumentParseError, _error_handler(400, "parse_error"))
    app.add_exception_handler(errors.NotFoundError, _error_handler(404, "not_found"))
    app.add_exception_handler(errors.ConflictError, _error_handler(409, "conflict"))
    app.add_exception_handler(errors.ProviderError, _error_handler(502, "provider_error"))
    app.add_exception_handler(errors.ReplyFormatError, _error_handler(502, "provider_reply_invalid"))
    app.add_exception_handler(errors.ProviderConfigError, _error_handler(503, "provider_unconfigured"))

    @app.exception_handler(RequestValidationError)
    async def invalid_request(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"code": "invalid_request", "message": "request body failed validation",
                     "details": exc.errors()},
        )

    @app.exception_handler(StarletteHTTPException)
    async def http_error(request: Request, exc: StarletteHTTPException) -> JSONResponse:
        codes = {401: "unauthorized", 404: "not_found", 405: "method_not_allowed"}
        return JSONResponse(
            status_code=exc.status_code,
            content={"code": codes.get(exc.status_code, "http_error"), "message": str(exc.detail),
                     "details": None},
        )

    @app.get("/health")
    def health() -> dict[str, str]:
        return {"status": "ok"}

    # -- graph CRUD ------------------------------------------------------

    @app.get("/graphs", dependencies=authed)
    def list_graphs() -> dict[str, Any]:
        return {"graph_ids": store.list_ids()}

    @app.post("/graphs", dependencies=authed, status_code=201)
    def create_graph(body: dict) -> dict[str, Any]:
        if not isinstance(body, dict):
            raise errors.DocumentParseError("request body must be a JSON object")
        if "nodes" in body or "edges" in body:
            document = dict(body)
            document.setdefault("id", new_id())
            if "metadata" not in document:
                now = utc_now().isoformat()
                document["metadata"] = {"created_at": now, "modified_at": now}
            graph = graph_from_document(document)
        else:
            unknown = sorted(set(body) - {"id", "title", "delta"})
            if unknown:
                raise errors.DocumentParseError(f"unknown field(s): {', '.join(unknown)}")
            title = body.get("title")
            if not isinstance(title, str) or not title.strip():
                raise errors.ValidationError("title must be a non-empty string")
            graph = new_graph(title, delta=body.get("delta", 1.0), graph_id=body.get("id"))
        if store.exists(graph.id):
            raise errors.ConflictError(f"graph {graph.id!r} already exists")
        store.persist(graph)
        return _stored_payload(store.load(graph.id))

    @app.get("/graphs/{graph_id}", dependencies=authed)
    def read_graph(graph_id: str) -> dict[str, Any]:
        return _stored_payload(store.load(graph_id))

    @app.put("/graphs/{graph_id}", dependencies=authed)
    def replace_graph(graph_id: str, body: dict, revision: int | None = None) -> dict[str, Any]:
        document = dict(body)
        document.setdefault("id", graph_id)
        if document["id"] != graph_id:
            raise errors.ValidationError(
                f"document id {document['id']!r} does not match path id {graph_id!r}"
            )
        graph = graph_from_document(document)
        if not store.exists(graph_id):
            raise errors.NotFoundError(f"graph {graph_id!r} does not exist")
        store.persist(graph, expected_revision=revision)
        return _stored_payload(store.load(graph_id))

    @app.delete("/graphs/{graph_id}", dependencies=authed, status_code=204)
    def delete_graph(graph_id: str) -> Response:
        store.delete(graph_id)
        return Response(status_code=204)

    # -- graph mutations ---------------------------------------------------

    @app.post("/graphs/{graph_id}/claims", dependencies=authed, status_code=201)
    def create_claim(graph_id: str, body: ClaimBody) -> dict[str, Any]:
        claim_type = _enum(ClaimType, body.claim_type, "claim_type")
        stored, node = store.mutate(graph_id, lambda graph: add_claim(graph, body.text, claim_type))
        return {"revision": stored.revision, "claim": node_to_document(node),
                "stale_node_ids": stale_node_ids(stored.graph)}

    @app.post("/graphs/{graph_id}/edges", dependencies=authed, status_code=201)
    def create_edge(graph_id: str, body: EdgeBody) -> dict[str, Any]:
        relation = _enum(Relation, body.relation, "relation")
        strength = _enum(QualitativeStrength, body.strength, "strength")
        origin = _enum(Origin, body.origin, "origin")
        stored, edge = store.mutate(
            graph_id,
            lambda graph: add_edge(
                graph,
                body.source_id,
                body.target_id,
                relation,
                strength,
                justification=body.justification,
                origin=origin,
            ),
        )
        return {"revision": stored.revision, "edge": edge_to_document(edge),
                "stale_node_ids": stale_node_ids(stored.graph)}

    @app.post("/graphs/{graph_id}/claims/{claim_id}/evidence", dependencies=authed, status_code=201)
    def create_evidence(graph_id: str, claim_id: str, body: EvidenceBody) -> dict[str, Any]:
        if body.assess:
            claim = get_node(store.load(graph_id).graph, claim_id)
            assessment = assess_evidence(require_provider(), claim.text, body.excerpt)
            polarity, strength = assessment.polarity, assessment.strength
            justification = assessment.justification
            origin = Origin.MACHINE
        else:
            if body.polarity is None or body.strength is None:
                raise errors.ValidationError(
                    "polarity and strength are required unless \"assess\": true is set"
                )
            polarity = _enum(Polarity, body.polarity, "polarity")
            strength = _enum(QualitativeStrength, body.strength, "strength")
            justification = body.justification
            origin = _enum(Origin, body.origin, "origin") if body.origin else Origin.HUMAN_OVERRIDE
        stored, item = store.mutate(
            graph_id,
            lambda graph: add_evidence(
                graph,
                claim_id,
                body.excerpt,
                polarity,
                strength,
                justification=justification,
                origin=origin,
                source_document=body.source_document,
            ),
        )
        return {"revision": stored.revision, "evidence": evidence_to_document(item),
                "stale_node_ids": stale_node_ids(stored.graph)}

    # -- analysis ----------------------------------------------------------

    @app.post("/graphs/{graph_id}/classify-edge", dependencies=authed)
    def classify_edge_endpoint(graph_id: str, body: ClassifyEdgeBody) -> dict[str, Any]:
        graph = store.load(graph_id).graph
        source = get_node(graph, body.source_id)
        target = get_node(graph, body.target_id)
        classification = classify_edge(require_provider(), source.text, target.text)
        return {
            "source_id": body.source_id,
            "target_id": body.target_id,
            "relation": classification.relation.value,
            "strength": classification.strength.value,
            "justification": classification.justification,
            "origin": Origin.MACHINE.value,
        }

    @app.post("/graphs/{graph_id}/propagate", dependencies=authed)
    def propagate_endpoint(
        graph_id: str,
        delta: float | None = None,
        epsilon: float = 1e-6,
        max_iters: int = 1000,
    ) -> dict[str, Any]:
        stored = store.load(graph_id)
        config = PropagationConfig(epsilon=epsilon, max_iterations=max_iters, delta=delta)
        result = propagate(stored.graph, config)
        updated = store.record_propagation(graph_id, result, expected_revision=stored.revision)
        return {"revision": updated.revision, "result": result.to_document()}

    @app.post("/graphs/{graph_id}/critique", dependencies=authed)
    def critique_endpoint(graph_id: str, semantic: bool = False) -> dict[str, Any]:
        graph = store.load(graph_id).graph
        findings = detect_structural(graph, app.state.bank)
        diagnostics: list[str] = []
        if semantic:
            detection = detect_semantic(graph, app.state.bank, require_provider())
            findings = findings + detection.findings
            diagnostics = detection.diagnostics
        return {"findings": [f.to_document() for f in findings], "diagnostics": diagnostics}

    @app.post("/graphs/{graph_id}/assumptions", dependencies=authed)
    def assumptions_endpoint(graph_id: str, body: AssumptionsBody) -> dict[str, Any]:
        graph = store.load(graph_id).graph
        edge = graph.edges.get(body.edge_id)
        if edge is None:
            raise errors.NotFoundError(f"edge {body.edge_id!r} does not exist")
        source = get_node(graph, edge.source_id)
        target = get_node(graph, edge.target_id)
        assumptions = generate_assumptions(require_provider(), source.text, target.text, edge.relation)
        return {"edge_id": body.edge_id, "assumptions": [a.to_document() for a in assumptions]}

    @app.post("/graphs/{graph_id}/report", dependencies=authed)
    def report_endpoint(graph_id: str, semantic: bool = False) -> dict[str, Any]:
        stored = store.load(graph_id)
        graph = stored.graph
        if stored.last_propagation is not None and stored.last_propagation_revision == stored.revision:
            result = stored.last_propagation
        else:
            result = propagate(graph, PropagationConfig(delta=None))
        findings = detect_structural(graph, app.state.bank)
        if semantic:
            findings = findings + detect_semantic(graph, app.state.bank, require_provider()).findings
        report = generate_report(graph, result, findings, provider=app.state.provider)
        return report_to_document(report)

    @app.post("/graphs/{graph_id}/chat", dependencies=authed)
    def chat_endpoint(graph_id: str, body: ChatBody) -> dict[str, Any]:
        stored = store.load(graph_id)
        key = (graph_id, body.session_id)
        with app.state.sessions_guard:
            session = app.state.sessions.get(key)
            if session is None:
                session = ChatSession(session_id=body.session_id)
                app.state.sessions[key] = session
        reply = chat(require_provider(), session, stored.graph, body.message)
        return {"session_id": body.session_id, "reply": reply, "revision": stored.revision}

    # -- documents ---------------------------------------------------------

    @app.post("/documents", dependencies=authed, status_code=201)
    async def upload_document(request: Request) -> dict[str, Any]:
        raw = await request.body()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise errors.DocumentParseError(f"document is not valid UTF-8 text: {exc}") from None
        return {"document_id": documents.add(text)}

    @app.post("/documents/{document_id}/suggest", dependencies=authed)
    def suggest_endpoint(document_id: str, body: SuggestBody) -> dict[str, Any]:
        text = documents.get(document_id)
        graph = store.load(body.graph_id).graph
        claim = get_node(graph, body.claim_id)
        result = suggest_extracts(
            require_provider(),
            text,
            claim.text,
            max_suggestions=body.max_suggestions,
            document_id=document_id,
        )
        return {
            "suggestions": [s.to_document() for s in result.suggestions],
            "diagnostics": result.diagnostics,
        }

    return app
