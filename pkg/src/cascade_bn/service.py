"""Read-only HTTP facade over a learned model.

The service holds an immutable snapshot (raw model bytes + parsed
network). Requests work against whatever snapshot they grabbed first, so
a concurrent POST /reload can never expose a half-swapped model.
Learning stays CLI-only; the API answers queries, cascades and path
lookups for the what-if UI.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import cascade as cascade_mod
from . import inference, params
from .errors import CascadeBnError, ZeroProbabilityEvidence
from .graph import enumerate_paths


class QueryRequest(BaseModel):
    target: str
    evidence: dict[str, int] = Field(default_factory=dict)


class PosteriorResponse(BaseModel):
    target: str
    p0: float
    p1: float


class CascadeRequest(BaseModel):
    evidence: dict[str, int]
    target: str
    max_hops: int = cascade_mod.DEFAULT_MAX_HOPS


class _Snapshot:
    __slots__ = ("raw", "net")

    def __init__(self, raw: bytes, net: params.BayesNet):
        self.raw = raw
        self.net = net


class ModelStore:
    """Atomically swappable model snapshot."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._snapshot = self._read()

    def _read(self) -> _Snapshot:
        raw = self.path.read_bytes()
        return _Snapshot(raw=raw, net=params.from_json(raw.decode("utf-8")))

    @property
    def snapshot(self) -> _Snapshot:
        return self._snapshot

    def reload(self) -> _Snapshot:
        fresh = self._read()
        with self._lock:
            self._snapshot = fresh
        return fresh


def _error_status(exc: CascadeBnError) -> int:
    if isinstance(exc, ZeroProbabilityEvidence):
        return 400
    return 422


def _error_body(exc: CascadeBnError) -> dict:
    body = {"error": type(exc).__name__, "detail": str(exc)}
    node = getattr(exc, "node", None)
    if node is not None:
        body["node"] = node
    return body


def create_app(model_path: str | Path, ui_dir: str | Path | None = None) -> FastAPI:
    """Build the service around one model file.

    ``ui_dir`` optionally mounts a directory of static what-if UI assets
    at /ui.
    """
    store = ModelStore(model_path)
    app = FastAPI(title="cascade-bn", docs_url="/docs")
    app.state.store = store

    @app.exception_handler(CascadeBnError)
    async def _domain_error(request: Request, exc: CascadeBnError):
        return JSONResponse(status_code=_error_status(exc), content=_error_body(exc))

    @app.get("/health")
    def health():
        snap = store.snapshot
        return {"status": "ok", "nodes": len(snap.net.dag.nodes)}

    @app.get("/model")
    def model():
        # byte-equivalent to the model file on disk
        return Response(content=store.snapshot.raw, media_type="application/json")

    @app.post("/query", response_model=PosteriorResponse)
    def post_query(req: QueryRequest):
        snap = store.snapshot
        posterior = inference.query(snap.net, req.target, req.evidence)
        return PosteriorResponse(**posterior.to_json())

    @app.post("/cascade")
    def post_cascade(req: CascadeRequest):
        snap = store.snapshot
        report = cascade_mod.cascade_lift(
            snap.net,
            cascade_mod.CascadeScenario(
                source_evidence=dict(req.evidence),
                target=req.target,
                max_hops=req.max_hops,
            ),
        )
        return report.to_json()

    @app.get("/paths")
    def get_paths(
        source_domain: str,
        target_domain: str,
        max_hops: int = cascade_mod.DEFAULT_MAX_HOPS,
    ):
        snap = store.snapshot
        dag = snap.net.dag
        sources = {n for n in dag.nodes if dag.domains[n] == source_domain}
        targets = {n for n in dag.nodes if dag.domains[n] == target_domain}
        if not sources or not targets:
            return {"paths": []}
        found = enumerate_paths(dag, sources, targets, max_hops)
        found.sort(key=lambda p: (len(p), p))
        return {
            "paths": [
                {"nodes": p, "domains": [dag.domains[n] for n in p]} for p in found
            ]
        }

    @app.post("/reload")
    def post_reload():
        snap = store.reload()
        return {"status": "reloaded", "nodes": len(snap.net.dag.nodes)}

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
