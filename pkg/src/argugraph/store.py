"""Durable storage: one JSON document per graph, atomic writes, revisions.

Each graph lives in ``<data_dir>/<graph_id>.json`` wrapping the graph
document with a monotonically increasing revision and the most recent
propagation result (tagged with the revision whose scores it produced).
Writes go through a temp file and ``os.replace`` so a crash never leaves a
half-written document. Mutations are serialized per graph id by an
in-process lock; readers see the last durable revision.
"""

from __future__ import annotations

import json
import os
import re
import threading
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, TypeVar

from .engine import PropagationResult
from .errors import ConflictError, NotFoundError, ValidationError
from .graph import ArgumentGraph, validate_graph
from .serialize import graph_from_document, graph_to_document

T = TypeVar("T")

_SAFE_ID = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_.-]{0,63}$")


def _check_id(identifier: str, what: str) -> str:
    if not _SAFE_ID.match(identifier):
        raise ValidationError(
            f"{what} id {identifier!r} is not storable (use 1-64 chars of [A-Za-z0-9_.-], "
            "starting alphanumeric)"
        )
    return identifier


@dataclass
class StoredGraph:
    """One durable graph revision plus its propagation bookkeeping."""

    graph: ArgumentGraph
    revision: int
    last_propagation: PropagationResult | None = None
    last_propagation_revision: int | None = None


class GraphStore:
    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def lock(self, graph_id: str) -> threading.Lock:
        with self._locks_guard:
            if graph_id not in self._locks:
                self._locks[graph_id] = threading.Lock()
            return self._locks[graph_id]

    def _path(self, graph_id: str) -> Path:
        return self.data_dir / f"{_check_id(graph_id, 'graph')}.json"

    def _read(self, graph_id: str) -> dict[str, Any]:
        path = self._path(graph_id)
        if not path.exists():
            raise NotFoundError(f"graph {graph_id!r} does not exist")
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)

    def _write(self, graph_id: str, record: dict[str, Any]) -> None:
        path = self._path(graph_id)
        tmp = path.with_name(f".{path.name}.{uuid.uuid4().hex}.tmp")
        with open(tmp, "w", encoding="utf-8") as handle:
            json.dump(record, handle, indent=2)
            handle.write("\n")
        os.replace(tmp, path)

    @staticmethod
    def _unpack(record: dict[str, Any]) -> StoredGraph:
        propagation = record.get("last_propagation")
        return StoredGraph(
            graph=graph_from_document(record["graph"]),
            revision=int(record["revision"]),
            last_propagation=PropagationResult.from_document(propagation) if propagation else None,
            last_propagation_revision=record.get("last_propagation_revision"),
        )

    def exists(self, graph_id: str) -> bool:
        return self._path(graph_id).exists()

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.data_dir.glob("*.json") if not p.name.startswith("."))

    def load(self, graph_id: str) -> StoredGraph:
        """Latest durable revision; the graph is freshly parsed on every call."""
        return self._unpack(self._read(graph_id))

    def persist(self, graph: ArgumentGraph, expected_revision: int | None = None) -> int:
        """Write a graph document; returns the new revision.

        ``expected_revision`` asserts the revision being replaced; a
        mismatch raises :class:`ConflictError` so the caller can reload and
        retry. Propagation bookkeeping from earlier revisions is kept (it
        stays tagged with the revision it was computed at).
        """
        violations = validate_graph(graph)
        if violations:
            summary = "; ".join(f"{v.subject}: {v.message}" for v in violations[:5])
            raise ValidationError(f"cannot persist an invalid graph: {summary}", violations)
        with self.lock(graph.id):
            if self.exists(graph.id):
                record = self._read(graph.id)
                current = int(record["revision"])
                if expected_revision is not None and current != expected_revision:
                    raise ConflictError(
                        f"graph {graph.id!r} is at revision {current}, expected {expected_revision}"
                    )
                revision = current + 1
            else:
                if expected_revision is not None:
                    raise NotFoundError(f"graph {graph.id!r} does not exist")
                record = {"last_propagation": None, "last_propagation_revision": None}
                revision = 1
            record.update({"revision": revision, "graph": graph_to_document(graph)})
            self._write(graph.id, record)
            return revision

    def mutate(self, graph_id: str, fn: Callable[[ArgumentGraph], T]) -> tuple[StoredGraph, T]:
        """Load-modify-persist under the graph's lock; returns the new state and fn's result."""
        with self.lock(graph_id):
            record = self._read(graph_id)
            stored = self._unpack(record)
            result = fn(stored.graph)
            revision = stored.revision + 1
            record.update({"revision": revision, "graph": graph_to_document(stored.graph)})
            self._write(graph_id, record)
            stored.revision = revision
            return stored, result

    def record_propagation(
        self,
        graph_id: str,
        result: PropagationResult,
        expected_revision: int,
    ) -> StoredGraph:
        """Write scores computed on ``expected_revision`` back into the stored graph.

        If the graph moved on while propagation ran, nothing is written and
        a :class:`ConflictError` tells the caller to re-run on the new
        revision.
        """
        with self.lock(graph_id):
            record = self._read(graph_id)
            stored = self._unpack(record)
            if stored.revision != expected_revision:
                raise ConflictError(
                    f"graph {graph_id!r} moved to revision {stored.revision} while propagating "
                    f"revision {expected_revision}"
                )
            for node_id, score in result.scores.items():
                node = stored.graph.nodes.get(node_id)
                if node is not None:
                    node.credibility = score
                    node.credibility_stale = False
            revision = stored.revision + 1
            record.update(
                {
                    "revision": revision,
                    "graph": graph_to_document(stored.graph),
                    "last_propagation": result.to_document(),
                    "last_propagation_revision": revision,
                }
            )
            self._write(graph_id, record)
            stored.revision = revision
            stored.last_propagation = result
            stored.last_propagation_revision = revision
            return stored

    def delete(self, graph_id: str) -> None:
        path = self._path(graph_id)
        if not path.exists():
            raise NotFoundError(f"graph {graph_id!r} does not exist")
        path.unlink()


class DocumentStore:
    """Plain-text evidence documents, one UTF-8 file per id."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)

    def _path(self, document_id: str) -> Path:
        return self.data_dir / f"{_check_id(document_id, 'document')}.txt"

    def add(self, text: str, document_id: str | None = None) -> str:
        if not text or not text.strip():
            raise ValidationError("document text must be non-empty")
        if document_id is None:
            document_id = uuid.uuid4().hex[:12]
        path = self._path(document_id)
        if path.exists():
            raise ConflictError(f"document {document_id!r} already exists")
        tmp = path.with_name(f".{path.name}.tmp")
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, path)
        return document_id

    def get(self, document_id: str) -> str:
        path = self._path(document_id)
        if not path.exists():
            raise NotFoundError(f"document {document_id!r} does not exist")
        return path.read_text(encoding="utf-8")
