"""Pluggable chat-completion providers.

Two implementations ship: an OpenAI-compatible HTTP client for live use and
a deterministic mock for tests and offline runs. Every request carries a
capability tag and a structured payload alongside the rendered prompt; live
providers only see the prompt text, while the mock derives a schema-valid
reply from the payload and its seed, so identical requests always produce
identical replies without any network access.
"""

from __future__ import annotations

import hashlib
import json
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Mapping

import httpx

from ..errors import ProviderConfigError, ProviderError, ReplyFormatError, ValidationError

ENV_PROVIDER = "ARGUGRAPH_LLM_PROVIDER"
ENV_ENDPOINT = "ARGUGRAPH_LLM_ENDPOINT"
ENV_MODEL = "ARGUGRAPH_LLM_MODEL"
ENV_API_KEY = "ARGUGRAPH_LLM_API_KEY"

_STRENGTH_LABELS = ("very_weak", "weak", "moderate", "strong", "very_strong")


@dataclass
class ProviderConfig:
    """Connection settings for a live provider; the key never reaches repr or logs."""

    endpoint: str
    model_name: str = "default"
    api_key: str | None = field(default=None, repr=False)
    timeout: float = 30.0
    max_retries: int = 2

    def __post_init__(self) -> None:
        if not (isinstance(self.timeout, (int, float)) and self.timeout > 0):
            raise ValidationError(f"timeout must be > 0, got {self.timeout!r}")
        if not (isinstance(self.max_retries, int) and self.max_retries >= 0):
            raise ValidationError(f"max_retries must be >= 0, got {self.max_retries!r}")


@dataclass
class ChatRequest:
    """One chat-completion request.

    ``capability`` names which operation is asking (closed set used across
    the package); ``payload`` holds the structured inputs the prompt was
    rendered from. Both are part of the request content.
    """

    capability: str
    system: str
    messages: list[dict[str, str]] = field(default_factory=list)
    payload: dict[str, Any] = field(default_factory=dict)


class ChatProvider(ABC):
    """A chat-completion backend; implementations perform exactly one attempt per call."""

    max_retries: int = 2

    @abstractmethod
    def complete(self, request: ChatRequest) -> str:
        raise NotImplementedError


class OpenAICompatibleProvider(ChatProvider):
    """Speaks the chat-completions HTTP API at a configurable endpoint."""

    def __init__(self, config: ProviderConfig):
        self.config = config
        self.max_retries = config.max_retries

    def complete(self, request: ChatRequest) -> str:
        url = self.config.endpoint.rstrip("/") + "/chat/completions"
        headers = {"Content-Type": "application/json"}
        if self.config.api_key:
            headers["Authorization"] = f"Bearer {self.config.api_key}"
        body = {
            "model": self.config.model_name,
            "messages": [{"role": "system", "content": request.system}, *request.messages],
            "temperature": 0.0,
        }
        try:
            response = httpx.post(url, json=body, headers=headers, timeout=self.config.timeout)
        except httpx.HTTPError as exc:
            raise ProviderError(f"transport failure: {exc}") from exc
        if response.status_code >= 400:
            raise ProviderError(f"provider returned HTTP {response.status_code}")
        try:
            content = response.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ProviderError(f"malformed completion response: {exc}") from exc
        if not isinstance(content, str):
            raise ProviderError("completion content is not text")
        return content


class MockProvider(ChatProvider):
    """Deterministic offline provider.

    Unscripted calls answer with a schema-valid reply derived from a SHA-256
    digest of (seed, request content): identical inputs give identical
    outputs, across processes. Tests can pin behavior per capability via
    ``responses``: a string (returned every time), a list consumed in order
    (strings returned, exceptions raised, callables invoked), or a callable.
    """

    def __init__(
        self,
        seed: int = 0,
        responses: Mapping[str, Any] | None = None,
        max_retries: int = 2,
    ):
        self.seed = seed
        self.responses: dict[str, Any] = dict(responses or {})
        self.max_retries = max_retries
        self.calls: list[ChatRequest] = []

    def complete(self, request: ChatRequest) -> str:
        self.calls.append(request)
        scripted = self.responses.get(request.capability)
        if isinstance(scripted, list):
            scripted = scripted.pop(0) if scripted else None
        if scripted is not None:
            if isinstance(scripted, Exception):
                raise scripted
            if callable(scripted):
                return scripted(request)
            return scripted
        return self._default_reply(request)

    # -- deterministic defaults ------------------------------------------

    def _digest(self, request: ChatRequest) -> int:
        blob = json.dumps(
            [self.seed, request.capability, request.system, request.messages, request.payload],
            sort_keys=True,
            default=str,
        )
        return int.from_bytes(hashlib.sha256(blob.encode("utf-8")).digest()[:8], "big")

    def _default_reply(self, request: ChatRequest) -> str:
        handler = getattr(self, f"_reply_{request.capability}", None)
        if handler is None:
            return "{}"
        return handler(request, self._digest(request))

    def _reply_classify_edge(self, request: ChatRequest, h: int) -> str:
        payload = request.payload
        relation = "attack" if h % 4 == 0 else "support"
        strength = _STRENGTH_LABELS[(h // 4) % 5]
        return json.dumps(
            {
                "relation": relation,
                "strength": strength,
                "justification": (
                    f"The source claim {relation}s the target claim with {strength.replace('_', ' ')} force, "
                    f"judging from how '{payload.get('source_claim', '')[:60]}' bears on "
                    f"'{payload.get('target_claim', '')[:60]}'."
                ),
            }
        )

    def _reply_assess_evidence(self, request: ChatRequest, h: int) -> str:
        payload = request.payload
        polarity = "negating" if h % 3 == 0 else "supporting"
        strength = _STRENGTH_LABELS[(h // 3) % 5]
        return json.dumps(
            {
                "polarity": polarity,
                "strength": strength,
                "justification": (
                    f"The excerpt reads as {polarity} the claim "
                    f"'{payload.get('claim', '')[:60]}' with {strength.replace('_', ' ')} force."
                ),
            }
        )

    def _reply_suggest_extracts(self, request: ChatRequest, h: int) -> str:
        document = request.payload.get("document", "")
        limit = int(request.payload.get("max_suggestions", 3))
        sentences = [s.strip() for s in re.split(r"(?<=[.!?])\s+", document.strip()) if s.strip()]
        extracts = [
            {"excerpt": sentence, "relevance": _STRENGTH_LABELS[(h + i) % 5]}
            for i, sentence in enumerate(sentences[:limit])
        ]
        return json.dumps({"extracts": extracts})

    def _reply_generate_assumptions(self, request: ChatRequest, h: int) -> str:
        payload = request.payload
        source = payload.get("source_claim", "")[:60]
        target = payload.get("target_claim", "")[:60]
        relation = payload.get("relation", "support")
        texts = [
            f"'{source}' and '{target}' refer to the same context and time frame.",
            f"The conditions under which '{source}' holds remain stable.",
            f"No stronger consideration overrides the stated {relation} relation.",
        ]
        assumptions = [
            {
                "text": text,
                "importance": 1 + (h + i) % 5,
                "justification": f"Without this the {relation} relation between the claims weakens.",
            }
            for i, text in enumerate(texts)
        ]
        return json.dumps({"assumptions": assumptions})

    def _reply_chat(self, request: ChatRequest, h: int) -> str:
        graph_doc = request.payload.get("graph", {})
        nodes = graph_doc.get("nodes", [])
        edges = graph_doc.get("edges", [])
        return (
            f"This graph contains {len(nodes)} claims and {len(edges)} edges. "
            f"Ask about a specific claim id for a closer reading."
        )

    def _reply_report_summary(self, request: ChatRequest, h: int) -> str:
        payload = request.payload
        return (
            f"The argument map '{payload.get('title', '')}' links {payload.get('node_count', 0)} claims "
            f"through {payload.get('edge_count', 0)} relations. Credibility propagation "
            f"{'converged' if payload.get('converged') else 'did not converge'}, and the strongest and "
            f"weakest claims are listed in the credibility section below."
        )

    def _reply_report_recommendations(self, request: ChatRequest, h: int) -> str:
        payload = request.payload
        findings = int(payload.get("finding_count", 0))
        first = (
            f"Address the {findings} critique finding(s) listed above, starting with the most severe."
            if findings
            else "No structural weaknesses were detected; consider strengthening evidence coverage."
        )
        return (
            f"{first} Attach evidence to unsupported claims, revisit attack edges with weak "
            f"justifications, and re-run propagation after each change."
        )

    def _reply_critique_semantic(self, request: ChatRequest, h: int) -> str:
        return json.dumps({"findings": []})


# ---------------------------------------------------------------------------
# Reply plumbing shared by all capabilities
# ---------------------------------------------------------------------------


def extract_json(raw: str) -> Any:
    """Pull a JSON value out of a reply, tolerating code fences and prose wrappers."""
    body = raw.strip()
    try:
        return json.loads(body)
    except json.JSONDecodeError:
        pass
    fenced = re.search(r"```(?:json)?\s*(.+?)\s*```", body, flags=re.DOTALL)
    if fenced:
        return json.loads(fenced.group(1))
    start = body.find("{")
    end = body.rfind("}")
    if start != -1 and end > start:
        return json.loads(body[start : end + 1])
    raise ValueError("reply contains no JSON object")


def request_json(
    provider: ChatProvider,
    request: ChatRequest,
    check: Callable[[Any], Any],
    failure: type = ReplyFormatError,
) -> Any:
    """Submit a request and parse its JSON reply against ``check``.

    Retries up to the provider's budget on transport failures and on schema
    violations; a schema rejection is echoed back in the retry prompt so the
    provider can correct itself. Raises :class:`ProviderError` when
    transport never recovered, otherwise ``failure`` when no reply met the
    schema.
    """
    attempts = provider.max_retries + 1
    messages = list(request.messages)
    last_error: Exception | None = None
    last_was_transport = False
    for _ in range(attempts):
        try:
            raw = provider.complete(replace(request, messages=messages))
        except ProviderError as exc:
            last_error = exc
            last_was_transport = True
            continue
        try:
            return check(extract_json(raw))
        except ValueError as exc:
            last_error = exc
            last_was_transport = False
            messages = messages + [
                {"role": "assistant", "content": raw},
                {
                    "role": "user",
                    "content": (
                        f"Your previous reply was rejected: {exc}. "
                        "Reply again with exactly the required JSON and nothing else."
                    ),
                },
            ]
    if last_was_transport:
        raise ProviderError(f"provider failed after {attempts} attempts: {last_error}")
    raise failure(f"no schema-valid reply after {attempts} attempts: {last_error}")


def request_text(provider: ChatProvider, request: ChatRequest) -> str:
    """Submit a request expecting free text; retries transport failures and empty replies."""
    attempts = provider.max_retries + 1
    last_error: Exception | None = None
    last_was_transport = False
    for _ in range(attempts):
        try:
            raw = provider.complete(request)
        except ProviderError as exc:
            last_error = exc
            last_was_transport = True
            continue
        text = raw.strip()
        if text:
            return text
        last_error = ValueError("empty reply")
        last_was_transport = False
    if last_was_transport:
        raise ProviderError(f"provider failed after {attempts} attempts: {last_error}")
    raise ReplyFormatError(f"no usable reply after {attempts} attempts: {last_error}")


def provider_from_env(environ: Mapping[str, str] | None = None) -> ChatProvider:
    """Build a provider from ``ARGUGRAPH_LLM_*`` environment variables."""
    if environ is None:
        import os

        environ = os.environ
    name = environ.get(ENV_PROVIDER, "").strip().lower()
    if name == "mock":
        return MockProvider()
    endpoint = environ.get(ENV_ENDPOINT, "").strip()
    if name in ("", "openai", "http"):
        if endpoint:
            return OpenAICompatibleProvider(
                ProviderConfig(
                    endpoint=endpoint,
                    model_name=environ.get(ENV_MODEL, "default"),
                    api_key=environ.get(ENV_API_KEY) or None,
                )
            )
        raise ProviderConfigError(
            f"no provider configured: set {ENV_PROVIDER}=mock or {ENV_ENDPOINT}=<url>"
        )
    raise ProviderConfigError(f"unknown provider {name!r} in {ENV_PROVIDER}")
