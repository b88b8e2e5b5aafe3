from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from argugraph.api import create_app
from argugraph.engine import PropagationConfig, propagate
from argugraph.errors import ProviderError
from argugraph.llm.provider import MockProvider
from argugraph.serialize import graph_from_document, graph_to_document

from conftest import API_TOKEN, FIXTURES


def _demo_doc():
    return json.loads((FIXTURES / "demo.json").read_text())


def _create_demo(client) -> dict:
    response = client.post("/graphs", json=_demo_doc())
    assert response.status_code == 201, response.text
    return response.json()


def test_health_is_open(api_client):
    response = api_client.get("/health", headers={"Authorization": ""})
    assert response.status_code == 200


def test_auth_required_when_token_configured(api_client):
    assert api_client.get("/graphs", headers={"Authorization": ""}).status_code == 401
    assert api_client.get("/graphs", headers={"Authorization": "Bearer wrong"}).status_code == 401
    body = api_client.get("/graphs", headers={"Authorization": "Bearer nope"}).json()
    assert body["code"] == "unauthorized"


def test_auth_disabled_without_token(tmp_path):
    app = create_app(data_dir=str(tmp_path), provider=MockProvider(), api_token=None)
    client = TestClient(app)
    assert client.get("/graphs").status_code == 200


def test_create_short_form_and_fetch(api_client):
    created = api_client.post("/graphs", json={"title": "scratch", "delta": 2.0}).json()
    graph_id = created["graph"]["id"]
    assert created["revision"] == 1
    fetched = api_client.get(f"/graphs/{graph_id}").json()
    assert fetched["graph"]["title"] == "scratch"
    assert fetched["graph"]["delta"] == 2.0


def test_create_full_document_roundtrip(api_client):
    created = _create_demo(api_client)
    fetched = api_client.get("/graphs/demo").json()
    assert fetched["graph"] == graph_to_document(graph_from_document(_demo_doc()))
    assert created["revision"] == 1


def test_create_duplicate_conflicts(api_client):
    _create_demo(api_client)
    assert api_client.post("/graphs", json=_demo_doc()).status_code == 409


def test_create_rejects_unknown_fields(api_client):
    response = api_client.post("/graphs", json={"title": "x", "bogus": 1})
    assert response.status_code == 400
    assert response.json()["code"] == "parse_error"


def test_invalid_document_rejected_with_structured_error(api_client):
    doc = _demo_doc()
    doc["nodes"][0]["credibility"] = 1.5
    response = api_client.post("/graphs", json=doc)
    assert response.status_code == 400
    body = response.json()
    assert body["code"] == "validation_error"
    assert any(d["code"] == "credibility_range" for d in body["details"])


def test_put_replaces_and_honors_revision_guard(api_client):
    _create_demo(api_client)
    doc = _demo_doc()
    doc["title"] = "replaced"
    updated = api_client.put("/graphs/demo", json=doc).json()
    assert updated["revision"] == 2
    assert updated["graph"]["title"] == "replaced"

    stale = api_client.put("/graphs/demo", json=doc, params={"revision": 1})
    assert stale.status_code == 409

    fresh = api_client.put("/graphs/demo", json=doc, params={"revision": 2})
    assert fresh.status_code == 200


def test_put_id_mismatch_rejected(api_client):
    _create_demo(api_client)
    doc = _demo_doc()
    doc["id"] = "other"
    assert api_client.put("/graphs/demo", json=doc).status_code == 400


def test_delete(api_client):
    _create_demo(api_client)
    assert api_client.delete("/graphs/demo").status_code == 204
    assert api_client.get("/graphs/demo").status_code == 404


def test_unknown_graph_404_body(api_client):
    response = api_client.get("/graphs/nope")
    assert response.status_code == 404
    assert response.json()["code"] == "not_found"


def test_add_claim_edge_evidence_flow_marks_stale(api_client):
    api_client.post("/graphs", json={"title": "flow", "id": "flow"})
    claim1 = api_client.post("/graphs/flow/claims", json={"text": "first", "claim_type": "fact"})
    assert claim1.status_code == 201
    c1 = claim1.json()["claim"]["id"]
    c2 = api_client.post("/graphs/flow/claims", json={"text": "second", "claim_type": "policy"}).json()[
        "claim"
    ]["id"]

    edge = api_client.post(
        "/graphs/flow/edges",
        json={"source_id": c1, "target_id": c2, "relation": "support", "strength": "strong"},
    )
    assert edge.status_code == 201
    assert c2 in edge.json()["stale_node_ids"]

    evidence = api_client.post(
        f"/graphs/flow/claims/{c1}/evidence",
        json={"excerpt": "quoted", "polarity": "supporting", "strength": "moderate"},
    )
    assert evidence.status_code == 201
    body = evidence.json()
    assert body["evidence"]["origin"] == "human_override"
    assert c1 in body["stale_node_ids"]
    assert body["revision"] == 5  # create + 2 claims + edge + evidence

    # stale markers persist until propagation
    fetched = api_client.get("/graphs/flow").json()
    assert set(fetched["stale_node_ids"]) == {c1, c2}
    api_client.post("/graphs/flow/propagate")
    assert api_client.get("/graphs/flow").json()["stale_node_ids"] == []


def test_evidence_with_assessment(api_client):
    _create_demo(api_client)
    response = api_client.post(
        "/graphs/demo/claims/B/evidence",
        json={"excerpt": "parks reduce heat deaths", "assess": True},
    )
    assert response.status_code == 201
    body = response.json()["evidence"]
    assert body["origin"] == "machine"
    assert body["polarity"] in ("supporting", "negating")
    assert body["strength"] in ("very_weak", "weak", "moderate", "strong", "very_strong")


def test_evidence_requires_labels_without_assessment(api_client):
    _create_demo(api_client)
    response = api_client.post("/graphs/demo/claims/B/evidence", json={"excerpt": "bare"})
    assert response.status_code == 400


def test_edge_validation_errors_are_structured(api_client):
    _create_demo(api_client)
    self_loop = api_client.post(
        "/graphs/demo/edges",
        json={"source_id": "A", "target_id": "A", "relation": "support", "strength": "weak"},
    )
    assert self_loop.status_code == 400
    duplicate = api_client.post(
        "/graphs/demo/edges",
        json={"source_id": "A", "target_id": "B", "relation": "support", "strength": "weak"},
    )
    assert duplicate.status_code == 409
    unknown_label = api_client.post(
        "/graphs/demo/edges",
        json={"source_id": "A", "target_id": "D", "relation": "endorses", "strength": "weak"},
    )
    assert unknown_label.status_code == 400


def test_classify_edge_returns_proposal_without_commit(api_client):
    _create_demo(api_client)
    before = api_client.get("/graphs/demo").json()["revision"]
    response = api_client.post(
        "/graphs/demo/classify-edge", json={"source_id": "D", "target_id": "B"}
    )
    assert response.status_code == 200
    body = response.json()
    assert body["relation"] in ("support", "attack")
    assert body["origin"] == "machine"
    assert api_client.get("/graphs/demo").json()["revision"] == before


def test_propagate_matches_direct_engine_invocation(api_client):
    _create_demo(api_client)
    response = api_client.post("/graphs/demo/propagate")
    assert response.status_code == 200
    api_result = response.json()["result"]

    direct = propagate(graph_from_document(_demo_doc()), PropagationConfig())
    assert api_result["scores"] == direct.scores
    assert api_result["converged"] is True

    fetched = api_client.get("/graphs/demo").json()
    assert fetched["last_propagation"]["scores"] == direct.scores
    assert fetched["last_propagation_revision"] == fetched["revision"]
    for node in fetched["graph"]["nodes"]:
        assert node["credibility"] == direct.scores[node["id"]]


def test_propagate_with_query_overrides(api_client):
    _create_demo(api_client)
    response = api_client.post("/graphs/demo/propagate", params={"delta": 2.0, "max_iters": 5})
    direct = propagate(graph_from_document(_demo_doc()), PropagationConfig(delta=2.0, max_iterations=5))
    assert response.json()["result"]["scores"] == direct.scores


def test_critique_endpoint(api_client):
    _create_demo(api_client)
    response = api_client.post("/graphs/demo/critique")
    assert response.status_code == 200
    body = response.json()
    ids = [f["pattern_id"] for f in body["findings"]]
    assert "isolated_node" in ids and "unsupported_claim" in ids
    assert all(f["origin"] == "structural" for f in body["findings"])

    semantic = api_client.post("/graphs/demo/critique", params={"semantic": "true"}).json()
    assert "diagnostics" in semantic


def test_assumptions_endpoint(api_client):
    _create_demo(api_client)
    response = api_client.post("/graphs/demo/assumptions", json={"edge_id": "AB"})
    assert response.status_code == 200
    assumptions = response.json()["assumptions"]
    assert len(assumptions) == 3
    assert all(1 <= a["importance"] <= 5 for a in assumptions)
    assert api_client.post("/graphs/demo/assumptions", json={"edge_id": "ZZ"}).status_code == 404


def test_report_endpoint_shape(api_client):
    _create_demo(api_client)
    response = api_client.post("/graphs/demo/report")
    assert response.status_code == 200
    body = response.json()
    assert len(body["sections"]) == 8
    assert body["graph_id"] == "demo"


def test_chat_endpoint_tracks_revision_freshness(api_client):
    _create_demo(api_client)
    first = api_client.post("/graphs/demo/chat", json={"message": "how many claims?"})
    assert first.status_code == 200
    assert "4" in first.json()["reply"]

    api_client.post("/graphs/demo/claims", json={"text": "another", "claim_type": "fact"})
    second = api_client.post(
        "/graphs/demo/chat", json={"message": "how many claims?", "session_id": "default"}
    )
    assert "5" in second.json()["reply"]
    assert second.json()["revision"] > first.json()["revision"]


def test_chat_provider_failure_preserves_session(tmp_path):
    provider = MockProvider(responses={"chat": [ProviderError("down")] * 3, }, max_retries=2)
    app = create_app(data_dir=str(tmp_path), provider=provider, api_token=None)
    client = TestClient(app)
    client.post("/graphs", json=_demo_doc())
    response = client.post("/graphs/demo/chat", json={"message": "hello"})
    assert response.status_code == 502
    assert response.json()["code"] == "provider_error"
    # session survives and works once the provider recovers
    ok = client.post("/graphs/demo/chat", json={"message": "hello again"})
    assert ok.status_code == 200


def test_documents_upload_and_suggest(api_client):
    _create_demo(api_client)
    text = "Shade lowers street temperature. Wind cancels the effect. Budgets are tight."
    upload = api_client.post("/documents", content=text.encode("utf-8"))
    assert upload.status_code == 201
    doc_id = upload.json()["document_id"]

    response = api_client.post(
        f"/documents/{doc_id}/suggest",
        json={"graph_id": "demo", "claim_id": "A", "max_suggestions": 2},
    )
    assert response.status_code == 200
    body = response.json()
    assert 1 <= len(body["suggestions"]) <= 2
    for suggestion in body["suggestions"]:
        start, end = suggestion["start_offset"], suggestion["end_offset"]
        assert text[start:end] == suggestion["excerpt"]
        assert suggestion["document_id"] == doc_id


def test_provider_unconfigured_maps_to_503(tmp_path):
    app = create_app(data_dir=str(tmp_path), provider=None, api_token=None)
    # ensure no ambient env sneaks a provider in
    app.state.provider = None
    client = TestClient(app)
    client.post("/graphs", json=_demo_doc())
    response = client.post("/graphs/demo/chat", json={"message": "anyone home?"})
    assert response.status_code == 503
    assert response.json()["code"] == "provider_unconfigured"


def test_malformed_body_maps_to_400(api_client):
    _create_demo(api_client)
    response = api_client.post("/graphs/demo/claims", json={"text": "x"})
    assert response.status_code == 400
    assert response.json()["code"] == "invalid_request"
