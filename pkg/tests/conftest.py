from __future__ import annotations

import sys
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from argugraph.api import create_app
from argugraph.llm.provider import MockProvider
from argugraph.serialize import load_graph_file

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

API_TOKEN = "test-token"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def chain_graph():
    return load_graph_file(FIXTURES / "chain.json")


@pytest.fixture
def cycle_graph():
    return load_graph_file(FIXTURES / "cycle.json")


@pytest.fixture
def demo_graph():
    return load_graph_file(FIXTURES / "demo.json")


@pytest.fixture
def empty_graph():
    return load_graph_file(FIXTURES / "empty.json")


@pytest.fixture
def mock_provider():
    return MockProvider(seed=0)


@pytest.fixture
def api_client(tmp_path):
    app = create_app(data_dir=str(tmp_path / "data"), provider=MockProvider(seed=0), api_token=API_TOKEN)
    client = TestClient(app)
    client.headers.update({"Authorization": f"Bearer {API_TOKEN}"})
    return client
