"""Wire API over a Session.

Thin translation layer only: parse query parameters into filter states,
call the gateway, map domain errors onto status codes.  All parameters are
parsed by hand so malformed input surfaces as our own 400 payloads rather
than framework validation errors.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .errors import (
    ConflictError,
    FilterError,
    InputError,
    KamasError,
    NotFoundError,
    ParseError,
    PreconditionError,
)
from .filters import ALL_STATES, CallFilterState, RuleFilterState
from .gateway import Session
from .kdb import KnowledgeState

_STATUS = (
    (NotFoundError, 404),
    (ConflictError, 409),
    (PreconditionError, 409),
    (InputError, 400),
    (ParseError, 400),
    (FilterError, 400),
)


def _status_for(exc: KamasError) -> int:
    for klass, code in _STATUS:
        if isinstance(exc, klass):
            return code
    return 500


def _int(params, name) -> int | None:
    raw = params.get(name)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise InputError("parameter %s must be an integer, got %r" % (name, raw))


def _flag(params, name, default=False) -> bool:
    raw = params.get(name)
    if raw is None or raw == "":
        return default
    lowered = raw.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise InputError("parameter %s must be a boolean, got %r" % (name, raw))


def _id_set(params, name) -> frozenset | None:
    raw = params.get(name)
    if raw is None or raw == "":
        return None
    try:
        return frozenset(int(part) for part in raw.split(",") if part != "")
    except ValueError:
        raise InputError("parameter %s must be comma-separated ids, got %r" % (name, raw))


def _call_state(params) -> CallFilterState:
    return CallFilterState(
        occurrence_min=_int(params, "occ_min"),
        occurrence_max=_int(params, "occ_max"),
        name_pattern=params.get("pattern", ""),
        case_sensitive=_flag(params, "cs"),
        id_selection=_id_set(params, "ids"),
        table_selection=_id_set(params, "sel"),
    )


def _rule_state(params) -> RuleFilterState:
    raw_states = params.get("states")
    if raw_states is None or raw_states == "":
        states = ALL_STATES
    else:
        states = frozenset(
            KnowledgeState.from_wire(part) for part in raw_states.split(",") if part != ""
        )
    return RuleFilterState(
        multiples_only=_flag(params, "multiples"),
        equal_only=_flag(params, "equal"),
        knowledge_states=states,
        occurrence_min=_int(params, "rule_occ_min"),
        occurrence_max=_int(params, "rule_occ_max"),
        length_min=_int(params, "len_min"),
        length_max=_int(params, "len_max"),
    )


def create_app(session: Session | None = None) -> FastAPI:
    app = FastAPI(title="kamas", docs_url=None, redoc_url=None)
    app.state.session = session if session is not None else Session()
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(KamasError)
    async def _domain_error(request: Request, exc: KamasError):
        return JSONResponse(
            status_code=_status_for(exc),
            content={"error": type(exc).__name__, "message": str(exc)},
        )

    def sess() -> Session:
        return app.state.session

    @app.post("/api/document")
    async def load_document(request: Request):
        body = await request.body()
        try:
            text = body.decode("utf-8")
        except UnicodeDecodeError:
            raise InputError("document body must be UTF-8 text")
        return sess().load_document_text(text)

    @app.get("/api/calls")
    async def calls(request: Request):
        return sess().query_calls(_call_state(request.query_params))

    @app.get("/api/rules")
    async def rules(request: Request):
        params = request.query_params
        return sess().query_rules(
            _call_state(params),
            _rule_state(params),
            sort=params.get("sort") or None,
            page=_int(params, "page"),
            page_size=_int(params, "page_size") or 100,
        )

    @app.get("/api/rules/{rule_id}")
    async def rule_detail(rule_id: str):
        return sess().rule_detail(_path_id(rule_id, "rule"))

    @app.get("/api/histograms")
    async def histograms(request: Request):
        params = request.query_params
        field = params.get("field", "occurrence")
        bins = _int(params, "bins")
        return sess().histogram(field, bins if bins is not None else 10)

    @app.get("/api/kdb")
    async def kdb_snapshot():
        return sess().kdb_snapshot()

    @app.post("/api/kdb/nodes")
    async def kdb_add_node(request: Request):
        body = await _json_body(request)
        label = body.get("label")
        if not isinstance(label, str):
            raise InputError("body must carry a string 'label'")
        parent = body.get("parent_id")
        if parent is not None and not isinstance(parent, int):
            raise InputError("'parent_id' must be an integer node id")
        return sess().kdb_add_node(label, parent)

    @app.post("/api/kdb/nodes/{node_id}/rules")
    async def kdb_add_rule(node_id: str, request: Request):
        body = await _json_body(request)
        calls = body.get("calls")
        if not isinstance(calls, list) or not all(isinstance(c, str) for c in calls):
            raise InputError("body must carry 'calls': a list of call names")
        polarity = body.get("polarity", "malicious")
        return sess().kdb_add_rule(_path_id(node_id, "node"), calls, polarity)

    @app.patch("/api/kdb/nodes/{node_id}")
    async def kdb_set_active(node_id: str, request: Request):
        body = await _json_body(request)
        active = body.get("active")
        if not isinstance(active, bool):
            raise InputError("body must carry a boolean 'active'")
        return sess().kdb_set_active(_path_id(node_id, "node"), active)

    @app.delete("/api/kdb/rules/{rule_id}")
    async def kdb_remove_rule(rule_id: str):
        return sess().kdb_remove_rule(_path_id(rule_id, "rule"))

    @app.get("/api/export/rules.csv")
    async def export_csv(request: Request):
        params = request.query_params
        data = sess().export_rules_csv(_call_state(params), _rule_state(params))
        return PlainTextResponse(
            data,
            media_type="text/csv; charset=utf-8",
            headers={"Content-Disposition": 'attachment; filename="rules.csv"'},
        )

    return app


def _path_id(raw: str, what: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise InputError("%s id must be an integer, got %r" % (what, raw))


async def _json_body(request: Request) -> dict:
    body = await request.body()
    try:
        obj = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError("request body must be a JSON object: %s" % exc)
    if not isinstance(obj, dict):
        raise InputError("request body must be a JSON object")
    return obj
