"""HTTP service: documents in, session-scoped what-if analysis out.

All reasoning happens in the core package; handlers translate between wire
models and engine calls. Reads are pure; mutations are serialized per
session by optimistic version stamps (stale writers get 409).
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Callable, Optional

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .. import ingest
from ..analysis import isolate
from ..errors import (
    DiveError,
    DocumentSyntaxError,
    MalformedFactorError,
    SchemaError,
    UnknownElementError,
    UnknownNodeError,
    ValidationFailedError,
)
from ..propagate import propagate, seed_confidences
from . import schemas
from .store import Store, VersionConflict

DEFAULT_DATA_DIR = "./dive-data"


def _error(status: int, code: str, message: str, violations=None) -> JSONResponse:
    body = schemas.ErrorBody(
        code=code,
        message=message,
        violations=(
            [schemas.ViolationModel.from_violation(v) for v in violations]
            if violations
            else None
        ),
    )
    return JSONResponse(status_code=status, content=body.model_dump(exclude_none=True))


def create_app(
    data_dir: Optional[str] = None,
    *,
    id_factory: Optional[Callable[[], str]] = None,
    clock: Optional[Callable[[], float]] = None,
    ui_dir: Optional[str] = None,
) -> FastAPI:
    root = Path(data_dir or os.environ.get("DIVE_DATA_DIR", DEFAULT_DATA_DIR))
    store = Store(root, id_factory=id_factory, clock=clock)
    app = FastAPI(title="dive", version="0.1.0")
    app.state.store = store
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(DiveError)
    def on_engine_error(request: Request, exc: DiveError):
        if isinstance(exc, ValidationFailedError):
            return _error(422, exc.code, exc.message, exc.violations)
        if isinstance(exc, (DocumentSyntaxError, SchemaError, MalformedFactorError)):
            return _error(400, exc.code, exc.message)
        if isinstance(exc, (UnknownNodeError, UnknownElementError)):
            return _error(404, exc.code, exc.message)
        return _error(422, exc.code, exc.message)

    @app.exception_handler(VersionConflict)
    def on_version_conflict(request: Request, exc: VersionConflict):
        return _error(409, "VersionConflict", str(exc))

    # --- documents ---------------------------------------------------------

    @app.post("/documents", response_model=schemas.DocumentCreated, status_code=201)
    async def post_document(request: Request):
        raw = await request.body()
        doc = ingest.parse_document(raw)
        return schemas.DocumentCreated(documentId=store.put_document(doc))

    @app.get("/documents/{doc_id}")
    def get_document(doc_id: str) -> Response:
        canonical = store.get_canonical(doc_id)
        if canonical is None:
            return _error(404, "UnknownDocument", f"unknown document {doc_id!r}")
        return Response(content=canonical, media_type="application/json")

    @app.post("/fixtures/lady-ada")
    def post_fixture():
        """Load the built-in demo scenario and report its id and target."""
        doc_id = store.put_document(ingest.build_lady_ada_fixture())
        return {"documentId": doc_id, "targets": [ingest.FIXTURE_TARGET]}

    # --- sessions -------------------------------------------------------------

    def _session_or_none(session_id: str):
        return store.get_session(session_id)

    def _session_body(record) -> schemas.SessionModel:
        return schemas.session_model(
            session_id=record.id,
            document_id=record.document_id,
            version=record.version,
            created_at=record.created_at,
            updated_at=record.updated_at,
            disabled=list(record.disabled),
            cfg=record.cfg,
            analysis=store.analysis_for(record.id),
            state=store.state_for(record.id),
        )

    @app.post("/sessions", response_model=schemas.SessionModel, status_code=201)
    def post_session(body: schemas.SessionCreateRequest):
        if store.get_document(body.documentId) is None:
            return _error(404, "UnknownDocument", f"unknown document {body.documentId!r}")
        record = store.create_session(body.documentId, body.targets)
        return _session_body(record)

    @app.get("/sessions/{session_id}", response_model=schemas.SessionModel)
    def get_session(session_id: str):
        record = _session_or_none(session_id)
        if record is None:
            return _error(404, "UnknownSession", f"unknown session {session_id!r}")
        return _session_body(record)

    @app.get("/sessions/{session_id}/isolate", response_model=schemas.IsolationModel)
    def get_isolation(session_id: str, element: str):
        record = _session_or_none(session_id)
        if record is None:
            return _error(404, "UnknownSession", f"unknown session {session_id!r}")
        view = isolate(store.analysis_for(session_id), element)
        return schemas.IsolationModel.from_view(view)

    @app.put("/sessions/{session_id}/refutations", response_model=schemas.WhatIfModel)
    def put_refutations(session_id: str, body: schemas.RefutationsRequest):
        record = _session_or_none(session_id)
        if record is None:
            return _error(404, "UnknownSession", f"unknown session {session_id!r}")
        record = store.mutate_session(
            session_id, body.version, disabled=body.disabled
        )
        return schemas.WhatIfModel.from_state(
            list(record.disabled), store.state_for(session_id), record.version
        )

    @app.put("/sessions/{session_id}/policy")
    def put_policy(session_id: str, body: schemas.PolicyRequest):
        record = _session_or_none(session_id)
        if record is None:
            return _error(404, "UnknownSession", f"unknown session {session_id!r}")
        record = store.mutate_session(session_id, body.version, cfg=body.to_config())
        return {
            "policy": schemas.PolicyModel.from_config(record.cfg).model_dump(),
            "version": record.version,
        }

    @app.get("/sessions/{session_id}/confidence", response_model=schemas.ConfidenceModel)
    def get_confidence(session_id: str):
        record = _session_or_none(session_id)
        if record is None:
            return _error(404, "UnknownSession", f"unknown session {session_id!r}")
        analysis = store.analysis_for(session_id)
        seeds = seed_confidences(analysis.doc, analysis.subgraph, record.cfg)
        confidence = propagate(
            analysis.labels, seeds, record.cfg, store.state_for(session_id)
        )
        return schemas.ConfidenceModel.from_map(confidence, record.cfg)

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        if _session_or_none(session_id) is None:
            return _error(404, "UnknownSession", f"unknown session {session_id!r}")
        store.delete_session(session_id)
        return Response(status_code=204)

    static_root = ui_dir or os.environ.get("DIVE_UI_DIR")
    if static_root and Path(static_root).is_dir():
        app.mount("/ui", StaticFiles(directory=static_root, html=True), name="ui")

    return app
