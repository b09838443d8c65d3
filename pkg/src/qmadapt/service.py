"""HTTP facade over pools, ranking, sessions, tailoring, tasks, and audit.

Optimistic concurrency: every session carries a revision counter that each
accepted write bumps by exactly one; writes must quote the revision they saw
and get a 409 when it is stale.  Writes to one session are serialized with a
per-session lock; a failed batch is rolled back completely.
"""

from __future__ import annotations

import copy
import itertools
import os
import threading

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import engine, store, tailoring
from .audit import audit as run_audit
from .canon import content_hash
from .errors import (
    InputError,
    NotFoundError,
    QmError,
    StaleReportError,
    TaskStateError,
)
from .goal import parse_goal, rank_reference_models
from .validate import validate


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.details = details or {}


def _domain_status(exc: QmError) -> int:
    if isinstance(exc, NotFoundError):
        return 404
    if isinstance(exc, InputError):
        return 400
    return 422  # integrity, task state, staleness inside the domain


class SessionBox:
    """One live session plus its service-level bookkeeping."""

    def __init__(self, session_id: str, session, plan: dict, reference_id: str):
        self.session_id = session_id
        self.session = session
        self.plan = plan
        self.reference_id = reference_id
        self.revision = 0
        self.tailored = False
        self.lock = threading.Lock()

    def handle(self) -> dict:
        return {
            "sessionId": self.session_id,
            "modelHash": self.session.model_hash(),
            "revision": self.revision,
            "referenceModelId": self.reference_id,
            "tailored": self.tailored,
        }

    def snapshot(self):
        s = self.session
        return (
            s.model.clone(),
            {tid: copy.deepcopy(t) for tid, t in s.tasks.items()},
            list(s.records),
            s._task_seq,
        )

    def restore(self, snap) -> None:
        s = self.session
        s.model, s.tasks, s.records, s._task_seq = snap


def create_app(pool_dir: str, state_dir: str | None = None) -> FastAPI:
    pool = store.load_pool(pool_dir)
    models = dict(pool)
    app = FastAPI(title="qm-adapt", version="1.0.0")
    sessions: dict[str, SessionBox] = {}
    counter = itertools.count(1)
    registry_lock = threading.Lock()

    if state_dir:
        os.makedirs(state_dir, exist_ok=True)

    def persist(box: SessionBox) -> None:
        if state_dir:
            store.save_session(
                box.session, os.path.join(state_dir, f"{box.session_id}.session.jsonl")
            )

    def get_box(session_id: str) -> SessionBox:
        box = sessions.get(session_id)
        if box is None:
            raise ApiError(404, "not-found", f"no session {session_id!r}")
        return box

    def check_revision(box: SessionBox, body: dict) -> None:
        quoted = body.get("revision")
        if not isinstance(quoted, int):
            raise ApiError(400, "bad-request", "body must quote an integer revision")
        if quoted != box.revision:
            raise ApiError(
                409,
                "stale-revision",
                "session changed since this revision was read",
                {"quoted": quoted, "current": box.revision},
            )

    @app.exception_handler(ApiError)
    async def handle_api_error(_: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message, "details": exc.details},
        )

    @app.exception_handler(QmError)
    async def handle_domain_error(_: Request, exc: QmError):
        return JSONResponse(
            status_code=_domain_status(exc),
            content={
                "code": type(exc).__name__,
                "message": str(exc),
                "details": {},
            },
        )

    @app.get("/pool")
    def get_pool():
        entries = []
        for mid, model in pool:
            entries.append(
                {
                    "modelId": mid,
                    "name": model.meta["name"],
                    "elementCount": model.element_count(),
                    "goal": model.goal,
                    "modelHash": content_hash(model.to_json()),
                }
            )
        return {"pool": entries}

    @app.post("/rank")
    async def post_rank(request: Request):
        body = await request.json()
        ga = parse_goal(body)
        entries = [(mid, tailoring.embedded_goal(m)) for mid, m in pool]
        scored, skipped = rank_reference_models(ga, entries)
        return {
            "ranking": [{"model": mid, **fit.to_json()} for mid, fit in scored],
            "skipped": skipped,
        }

    @app.post("/sessions", status_code=201)
    async def post_sessions(request: Request):
        body = await request.json()
        if not isinstance(body, dict) or "goal" not in body:
            raise ApiError(400, "bad-request", "body needs 'goal' and 'referenceModelId'")
        ref_id = body.get("referenceModelId")
        if ref_id not in models:
            raise ApiError(404, "not-found", f"no pool model {ref_id!r}")
        ga = parse_goal(body["goal"])
        reference = models[ref_id]
        flag = bool(body.get("flagContext", True))
        plan = tailoring.plan_tailoring(reference, ga, flag_context=flag)
        session = engine.new_session(reference, ga)
        with registry_lock:
            session_id = f"s{next(counter)}"
            box = SessionBox(session_id, session, plan, ref_id)
            sessions[session_id] = box
        persist(box)
        return {"session": box.handle(), "report": plan}

    @app.post("/sessions/{session_id}/tailor")
    async def post_tailor(session_id: str, request: Request):
        box = get_box(session_id)
        body = await request.json() if await request.body() else {}
        with box.lock:
            check_revision(box, {"revision": body.get("revision", box.revision)})
            if box.tailored:
                raise ApiError(422, "already-tailored", "plan was already applied")
            plan = box.plan
            if "flagContext" in body and bool(body["flagContext"]) != plan["flagContext"]:
                plan = tailoring.plan_tailoring(
                    box.session.initial_model, box.session.ga,
                    flag_context=bool(body["flagContext"]),
                )
                box.plan = plan
            snap = box.snapshot()
            try:
                records = tailoring.apply_tailoring(box.session, plan)
            except StaleReportError as exc:
                raise ApiError(409, "stale-report", str(exc)) from exc
            except QmError:
                box.restore(snap)
                raise
            box.tailored = True
            box.revision += 1
            persist(box)
            return {
                "session": box.handle(),
                "report": plan,
                "records": records,
                "tasks": [t.to_json() for t in box.session.open_tasks()],
            }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return {"session": get_box(session_id).handle()}

    @app.get("/sessions/{session_id}/model")
    def get_model(session_id: str):
        return get_box(session_id).session.model.to_json()

    @app.get("/sessions/{session_id}/tasks")
    def get_tasks(session_id: str):
        box = get_box(session_id)
        return {
            "revision": box.revision,
            "tasks": box.session.tasks_json(),
        }

    @app.get("/sessions/{session_id}/validate")
    def get_validate(session_id: str):
        box = get_box(session_id)
        violations = validate(box.session.model, box.session.ga.purpose)
        return {
            "revision": box.revision,
            "purpose": box.session.ga.purpose,
            "violations": [v.to_json() for v in violations],
        }

    @app.get("/sessions/{session_id}/log")
    def get_log(session_id: str):
        box = get_box(session_id)
        return {"revision": box.revision, "records": box.session.records}

    @app.post("/sessions/{session_id}/operations")
    async def post_operations(session_id: str, request: Request):
        box = get_box(session_id)
        body = await request.json()
        ops = body.get("ops")
        if not isinstance(ops, list) or not ops:
            raise ApiError(400, "bad-request", "body needs a non-empty 'ops' array")
        with box.lock:
            check_revision(box, body)
            snap = box.snapshot()
            records = []
            try:
                for op in ops:
                    records.append(engine.apply_operation(box.session, op))
            except QmError:
                box.restore(snap)
                raise
            box.revision += 1
            persist(box)
            return {
                "session": box.handle(),
                "records": records,
                "tasks": [t.to_json() for t in box.session.open_tasks()],
            }

    @app.post("/sessions/{session_id}/tasks/{task_id}/complete")
    async def post_complete(session_id: str, task_id: str, request: Request):
        box = get_box(session_id)
        body = await request.json()
        ops = body.get("ops", [])
        if not isinstance(ops, list):
            raise ApiError(400, "bad-request", "'ops' must be an array")
        with box.lock:
            check_revision(box, body)
            snap = box.snapshot()
            try:
                record = engine.complete_task(box.session, task_id, ops)
            except (QmError, TaskStateError):
                box.restore(snap)
                raise
            box.revision += 1
            persist(box)
            return {
                "session": box.handle(),
                "record": record,
                "tasks": [t.to_json() for t in box.session.open_tasks()],
            }

    @app.post("/sessions/{session_id}/tasks/{task_id}/waive")
    async def post_waive(session_id: str, task_id: str, request: Request):
        box = get_box(session_id)
        body = await request.json()
        note = body.get("note", "")
        with box.lock:
            check_revision(box, body)
            snap = box.snapshot()
            try:
                record = engine.waive_task(box.session, task_id, note)
            except QmError:
                box.restore(snap)
                raise
            box.revision += 1
            persist(box)
            return {
                "session": box.handle(),
                "record": record,
                "tasks": [t.to_json() for t in box.session.open_tasks()],
            }

    @app.post("/sessions/{session_id}/audit")
    async def post_audit(session_id: str, request: Request):
        box = get_box(session_id)
        body = await request.json()
        gold = body.get("goldDelta")
        if not isinstance(gold, dict):
            raise ApiError(400, "bad-request", "body needs a 'goldDelta' object")
        result = run_audit(
            box.session.initial_model,
            box.session.model,
            gold,
            minutes=body.get("minutes"),
        )
        return result.to_json()

    return app
