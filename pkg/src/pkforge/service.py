"""HTTP service exposing the store to scripts and the elicitation form.

Single-writer discipline: every mutation takes the store lock, re-runs
validation, and persists the snapshot before answering. Read endpoints
answer byte-identically to the in-process library calls they wrap.
"""

from __future__ import annotations

import os
import threading
from pathlib import Path
from urllib.parse import quote

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .cq import UnboundParameter, UnknownQuery, catalog, find, run
from .elicitation import ElicitationError, document_from_graph, procedure_from_document
from .mapper import NotAProcedure, lower_execution, procedure_subgraph
from .model import OrderingError, parse_timestamp
from .rdfio import TurtleParseError, parse_turtle, serialize_jsonld, serialize_turtle
from .session import Session, SessionError, UnknownProcedure, overrun_report, start_execution
from .store import Graph, Triple, load_snapshot, save_snapshot
from .validation import validate
from .vocab import DCT, Iri, PKO, RDF, UnknownPrefix, default_prefixes, expand


def _json_error(status: int, message: str, **extra) -> JSONResponse:
    return JSONResponse({"error": message, **extra}, status_code=status)


def _resolve_iri(value: str) -> Iri:
    if value.startswith("<") and value.endswith(">"):
        value = value[1:-1]
    if "://" in value or value.startswith("urn:"):
        return Iri(value)
    return expand(value, default_prefixes())


class ServiceState:
    def __init__(self, store_path: str | None):
        self.store_path = store_path
        self.lock = threading.Lock()
        self.sessions: dict[str, Session] = {}
        self.finished: dict[str, object] = {}
        if store_path and Path(store_path).exists():
            self.store = load_snapshot(store_path)
        else:
            self.store = Graph()

    def persist(self) -> None:
        if self.store_path:
            save_snapshot(self.store, self.store_path)


def create_app(store_path: str | None = None) -> FastAPI:
    app = FastAPI(title="pk-forge", version="0.1.0")
    state = ServiceState(store_path)
    app.state.pkforge = state

    ui_origin = os.environ.get("PKF_UI_ORIGIN", "*")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[ui_origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    # -- procedures -----------------------------------------------------

    @app.get("/procedures")
    def list_procedures() -> Response:
        rows = []
        for node in state.store.subjects(RDF.type, PKO.Procedure):
            if not isinstance(node, Iri):
                continue
            title = state.store.value(node, DCT.title)
            status = state.store.value(node, PKO.hasProcedureStatus)
            rows.append(
                {
                    "id": node.value,
                    "title": getattr(title, "lexical", None),
                    "status": status.value if isinstance(status, Iri) else None,
                }
            )
        return JSONResponse({"procedures": rows})

    def _store_procedure(pid: Iri, graph: Graph, *, replacing: bool) -> Response | None:
        """Validate candidate store with the new subgraph; commit on success."""
        with state.lock:
            candidate = state.store.copy()
            if replacing:
                for t in procedure_subgraph(state.store, pid):
                    candidate.discard(t)
            candidate.update(graph)
            report = validate(candidate)
            if not report.conforms:
                return Response(
                    report.to_json(), status_code=409, media_type="application/json"
                )
            state.store = candidate
            state.persist()
        return None

    @app.post("/procedures")
    async def create_procedure(request: Request) -> Response:
        try:
            doc = await request.json()
        except Exception:
            return _json_error(400, "body is not valid JSON")
        try:
            pid, graph = procedure_from_document(doc)
        except ElicitationError as exc:
            return _json_error(400, "invalid elicitation document", details=exc.messages)
        if Triple(pid, RDF.type, PKO.Procedure) in state.store:
            return _json_error(409, f"procedure {pid.value} already exists; use PUT")
        rejection = _store_procedure(pid, graph, replacing=False)
        if rejection is not None:
            return rejection
        return JSONResponse(
            {"id": pid.value},
            status_code=201,
            headers={"Location": f"/procedures/{quote(pid.value, safe='')}"},
        )

    @app.put("/procedures/{pid:path}")
    async def update_procedure(pid: str, request: Request) -> Response:
        try:
            target = _resolve_iri(pid)
        except (ValueError, UnknownPrefix):
            return _json_error(400, f"bad procedure IRI {pid!r}")
        if Triple(target, RDF.type, PKO.Procedure) not in state.store:
            return _json_error(404, f"no procedure {target.value}")
        try:
            doc = await request.json()
        except Exception:
            return _json_error(400, "body is not valid JSON")
        doc.setdefault("procedure", {}).setdefault("id", target.value)
        if doc["procedure"]["id"] != target.value:
            return _json_error(400, "document id does not match the URL")
        try:
            pid_resolved, graph = procedure_from_document(doc)
        except ElicitationError as exc:
            return _json_error(400, "invalid elicitation document", details=exc.messages)
        rejection = _store_procedure(pid_resolved, graph, replacing=True)
        if rejection is not None:
            return rejection
        return JSONResponse({"id": pid_resolved.value})

    @app.get("/procedures/{pid:path}")
    def get_procedure(pid: str, request: Request) -> Response:
        try:
            target = _resolve_iri(pid)
        except (ValueError, UnknownPrefix):
            return _json_error(400, f"bad procedure IRI {pid!r}")
        if Triple(target, RDF.type, PKO.Procedure) not in state.store:
            return _json_error(404, f"no procedure {target.value}")
        subgraph = procedure_subgraph(state.store, target)
        accept = request.headers.get("accept", "text/turtle")
        if "application/ld+json" in accept:
            return Response(serialize_jsonld(subgraph), media_type="application/ld+json")
        if "application/json" in accept:
            try:
                doc = document_from_graph(state.store, target)
            except (NotAProcedure, OrderingError) as exc:
                return _json_error(409, f"stored procedure cannot be lifted: {exc}")
            return JSONResponse(doc)
        return Response(serialize_turtle(subgraph), media_type="text/turtle")

    # -- validation -------------------------------------------------------

    @app.post("/validate")
    async def validate_document(request: Request) -> Response:
        content_type = request.headers.get("content-type", "")
        body = await request.body()
        if content_type.startswith("application/json"):
            try:
                doc = await request.json()
            except Exception:
                return _json_error(400, "body is not valid JSON")
            try:
                pid, graph = procedure_from_document(doc)
            except ElicitationError as exc:
                return _json_error(400, "invalid elicitation document", details=exc.messages)
            report = validate(graph)
            return JSONResponse(
                {
                    "id": pid.value,
                    "turtle": serialize_turtle(graph),
                    "report": {
                        "conforms": report.conforms,
                        "findings": [
                            {
                                "rule": f.rule_id,
                                "focus": getattr(f.focus, "value", str(f.focus)),
                                "message": f.message,
                                "severity": f.severity,
                            }
                            for f in report.findings
                        ],
                    },
                }
            )
        try:
            graph, _ = parse_turtle(body.decode("utf-8"))
        except UnicodeDecodeError:
            return _json_error(400, "body is not UTF-8")
        except TurtleParseError as exc:
            return JSONResponse(
                {
                    "error": "parse failure",
                    "diagnostics": [
                        {
                            "line": d.line,
                            "column": d.column,
                            "message": d.message,
                            "severity": d.severity,
                        }
                        for d in exc.diagnostics
                    ],
                },
                status_code=400,
            )
        report = validate(graph)
        return Response(report.to_json(), media_type="application/json")

    # -- competency questions ---------------------------------------------

    @app.get("/cq")
    def list_cqs() -> Response:
        return JSONResponse(
            {
                "queries": [
                    {
                        "id": q.id,
                        "question": q.question,
                        "parameters": list(q.parameters),
                        "columns": list(q.projection),
                    }
                    for q in catalog()
                ]
            }
        )

    @app.get("/cq/{query_id}")
    def run_cq(query_id: str, request: Request) -> Response:
        try:
            query = find(query_id)
        except UnknownQuery:
            return _json_error(404, f"unknown query {query_id!r}")
        bindings = {}
        for name, value in request.query_params.items():
            try:
                bindings[name] = _resolve_iri(value)
            except (ValueError, UnknownPrefix):
                return _json_error(400, f"cannot resolve binding {name}={value!r}")
        try:
            table = run(state.store, query, bindings)
        except UnboundParameter as exc:
            return _json_error(400, str(exc))
        return Response(table.to_json(), media_type="application/json")

    # -- executions ---------------------------------------------------------

    @app.post("/executions")
    async def create_execution(request: Request) -> Response:
        try:
            body = await request.json()
            procedure = _resolve_iri(body["procedure"])
            agent = _resolve_iri(body["agent"])
            at = parse_timestamp(body["at"])
        except Exception as exc:
            return _json_error(400, f"bad execution request: {exc}")
        try:
            session = start_execution(
                state.store, procedure, agent, at, strict=body.get("strict", True) is not False
            )
        except UnknownProcedure as exc:
            return _json_error(404, str(exc))
        except SessionError as exc:
            return _json_error(409, str(exc))
        token = session.execution_id.value.rsplit("/", 1)[-1]
        state.sessions[token] = session
        return JSONResponse(
            {"id": session.execution_id.value, "token": token},
            status_code=201,
            headers={"Location": f"/executions/{token}"},
        )

    def _session_or_error(token: str) -> Session | Response:
        session = state.sessions.get(token)
        if session is None:
            return _json_error(404, f"no open execution {token!r}")
        return session

    @app.post("/executions/{token}/steps/{step:path}/start")
    async def start_step(token: str, step: str, request: Request) -> Response:
        session = _session_or_error(token)
        if isinstance(session, Response):
            return session
        try:
            body = await request.json()
            at = parse_timestamp(body["at"])
            session.start_step(_resolve_iri(step), at)
        except SessionError as exc:
            return _json_error(409, str(exc))
        except Exception as exc:
            return _json_error(400, f"bad request: {exc}")
        return JSONResponse({"ok": True})

    @app.post("/executions/{token}/steps/{step:path}/end")
    async def end_step(token: str, step: str, request: Request) -> Response:
        session = _session_or_error(token)
        if isinstance(session, Response):
            return session
        try:
            body = await request.json()
            at = parse_timestamp(body["at"])
            session.end_step(_resolve_iri(step), at)
        except SessionError as exc:
            return _json_error(409, str(exc))
        except Exception as exc:
            return _json_error(400, f"bad request: {exc}")
        return JSONResponse({"ok": True})

    @app.post("/executions/{token}/occurrences")
    async def record_occurrence(token: str, request: Request) -> Response:
        session = _session_or_error(token)
        if isinstance(session, Response):
            return session
        try:
            body = await request.json()
            kind = body["kind"]
            at = parse_timestamp(body["at"])
        except Exception as exc:
            return _json_error(400, f"bad request: {exc}")
        try:
            if kind == "question":
                occ = session.ask_question(
                    body["text"],
                    at,
                    addressed_by=_resolve_iri(body["addressed_by"]) if body.get("addressed_by") else None,
                )
            elif kind == "feedback":
                occ = session.leave_feedback(
                    body["text"],
                    at,
                    about=_resolve_iri(body["about"]) if body.get("about") else None,
                )
            elif kind == "issue":
                occ = session.report_issue(
                    _resolve_iri(body["error"]),
                    at,
                    cause=body.get("cause"),
                    solution=body.get("solution"),
                )
            else:
                return _json_error(400, f"unknown occurrence kind {kind!r}")
        except SessionError as exc:
            return _json_error(409, str(exc))
        except KeyError as exc:
            return _json_error(400, f"missing field {exc}")
        return JSONResponse({"id": occ.id.value}, status_code=201)

    @app.post("/executions/{token}/finish")
    async def finish_execution(token: str, request: Request) -> Response:
        session = _session_or_error(token)
        if isinstance(session, Response):
            return session
        try:
            body = await request.json()
            status_iri = _resolve_iri(body["status"])
            at = parse_timestamp(body["at"])
        except Exception as exc:
            return _json_error(400, f"bad request: {exc}")
        try:
            trace = session.finish(status_iri, at)
        except SessionError as exc:
            return _json_error(409, str(exc))
        with state.lock:
            state.store.update(lower_execution(trace))
            state.persist()
        state.finished[token] = trace
        del state.sessions[token]
        return JSONResponse({"id": trace.id.value, "status": trace.status.value})

    @app.get("/executions/{token}/report")
    def execution_report(token: str) -> Response:
        trace = state.finished.get(token)
        if trace is None:
            if token in state.sessions:
                return _json_error(409, "execution is still open")
            return _json_error(404, f"no finished execution {token!r}")
        return Response(
            overrun_report(trace, state.store).to_json(), media_type="application/json"
        )

    return app
