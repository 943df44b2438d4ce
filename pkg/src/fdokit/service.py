"""HTTP service exposing records, operations, the graph and conformance checks.

Every error response has the body ``{"status", "code", "detail"}``.
"""

from __future__ import annotations

import json
import logging
from typing import Any, Optional

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from starlette.concurrency import run_in_threadpool

from fdokit import __version__
from fdokit.errors import (
    AlreadyRegistered,
    DuplicatePidConflict,
    FdoError,
    FetchFailed,
    ImmutableEntry,
    InvalidParameter,
    InvalidPidSyntax,
    MalformedRecordDocument,
    MalformedSnapshot,
    MissingAccessKey,
    NotApplicable,
    NotFound,
    RemoteUnavailable,
    UnknownNode,
    UnknownOperation,
    UnknownProfile,
    ValidationFailed,
)
from fdokit.graph import export_graph, path as graph_path
from fdokit.pid import Pid
from fdokit.toolkit import Toolkit

logger = logging.getLogger(__name__)

STATUS = {
    MalformedRecordDocument: 400,
    MalformedSnapshot: 400,
    InvalidPidSyntax: 400,
    InvalidParameter: 400,
    NotFound: 404,
    UnknownOperation: 404,
    UnknownNode: 404,
    MissingAccessKey: 409,
    NotApplicable: 409,
    AlreadyRegistered: 409,
    ImmutableEntry: 409,
    DuplicatePidConflict: 409,
    ValidationFailed: 422,
    UnknownProfile: 422,
    RemoteUnavailable: 502,
    FetchFailed: 502,
}


def status_for(exc: FdoError) -> int:
    for cls in type(exc).__mro__:
        if cls in STATUS:
            return STATUS[cls]
    return 400


def api_error(status: int, code: str, detail: Any) -> JSONResponse:
    return JSONResponse({"status": status, "code": code, "detail": detail}, status_code=status)


async def _json_body(request: Request, required: bool = True) -> Any:
    raw = await request.body()
    if not raw.strip():
        if required:
            raise MalformedRecordDocument("request body is empty")
        return None
    try:
        return json.loads(raw)
    except ValueError as exc:
        raise MalformedRecordDocument(f"request body is not JSON: {exc}") from None


def create_app(toolkit: Optional[Toolkit] = None) -> FastAPI:
    tk = toolkit or Toolkit.create()
    app = FastAPI(title="fdokit", version=__version__)
    app.state.toolkit = tk

    @app.exception_handler(FdoError)
    async def _fdo_error(request: Request, exc: FdoError):
        status = status_for(exc)
        if isinstance(exc, ValidationFailed):
            return api_error(status, exc.code, exc.outcome.to_document())
        return api_error(status, exc.code, exc.detail)

    @app.exception_handler(RequestValidationError)
    async def _request_error(request: Request, exc: RequestValidationError):
        return api_error(400, "BadRequest", str(exc))

    def _pid(prefix: str, suffix: str) -> str:
        return str(Pid.parse(f"{prefix}/{suffix}"))

    @app.get("/healthz")
    def healthz():
        return {
            "status": "ok",
            "version": __version__,
            "records": len(tk.registry),
            "profiles": len(tk.types.profiles()),
            "fixtures": tk.fixture_counts,
        }

    @app.post("/records", status_code=201)
    async def create_record(request: Request):
        body = await _json_body(request)
        record = tk.records.parse(body)
        pid = await run_in_threadpool(tk.records.register_record, record)
        return {"pid": pid}

    @app.post("/records/validate")
    async def validate_record(request: Request, against: Optional[str] = None):
        body = await _json_body(request)
        record = tk.records.parse(body, lenient=True)
        return tk.records.validate_record(record, against=against).to_document()

    @app.get("/records/{prefix}/{suffix:path}/operations")
    def list_operations(prefix: str, suffix: str):
        record = tk.registry.resolve(_pid(prefix, suffix)).record
        return [
            {**d.to_document(), "applicable": tk.operations.applicable(d, record)}
            for d in tk.operations.associate(record)
        ]

    @app.post("/records/{prefix}/{suffix:path}/operations/{name}")
    async def run_operation(prefix: str, suffix: str, name: str, request: Request):
        params = await _json_body(request, required=False) or {}
        if not isinstance(params, dict):
            raise MalformedRecordDocument("operation parameters must be a JSON object")
        record = tk.registry.resolve(_pid(prefix, suffix)).record
        result = await run_in_threadpool(tk.operations.execute, name, record, params)
        return result.to_document()

    @app.get("/records/{prefix}/{suffix:path}")
    def get_record(prefix: str, suffix: str):
        entry = tk.registry.resolve(_pid(prefix, suffix))
        return tk.records.serialize(entry.record)

    @app.get("/graph")
    def get_graph(format: str = "document"):
        graph = tk.graph()
        if format in ("triples", "dot"):
            return PlainTextResponse(export_graph(graph, format))
        if format != "document":
            return api_error(400, "BadRequest", f"unknown format {format!r}")
        return {
            "nodes": sorted(graph.nodes),
            "predicates": sorted(graph.predicates),
            "triples": [list(t) for t in sorted(graph.triples)],
        }

    @app.get("/graph/path")
    def get_path(source: str = Query(alias="from"), target: str = Query(alias="to")):
        hops = graph_path(tk.graph(), source, target)
        return {"reachable": hops is not None, "path": None if hops is None else [list(t) for t in hops]}

    @app.post("/conformance")
    async def conformance(request: Request):
        """Body: one snapshot document, a list of them, or ``{"pids": [...]}``."""
        body = await _json_body(request)
        return await run_in_threadpool(_conformance, body)

    def _conformance(body: Any):
        if isinstance(body, dict) and "pids" in body and "record" not in body:
            if not isinstance(body["pids"], list):
                raise MalformedRecordDocument("'pids' must be an array")
            return [tk.conformance.check(tk.registry.resolve(p).record).to_document() for p in body["pids"]]
        if isinstance(body, list):
            return [tk.conformance.check_document(d).to_document() for d in body]
        return tk.conformance.check_document(body).to_document()

    return app
