"""File formats and persistence.

* ``*.qm.json``      — one quality model, canonical JSON
* ``*.goal.json``    — one adaptation goal
* ``*.gold.json``    — one gold standard for auditing
* ``*.session.jsonl``— one adaptation session: a header line holding the
  initial model and the goal, then one log record per line (append-only)

A pool is simply a directory of ``*.qm.json`` files; the model id is the
file name without the suffix.
"""

from __future__ import annotations

import json
import os

from .canon import canonical_bytes
from .engine import Session, new_session, replay
from .errors import LoadError, SchemaVersionError
from .goal import AdaptationGoal, parse_goal
from .model import SCHEMA_VERSION, QualityModel

MODEL_SUFFIX = ".qm.json"
GOAL_SUFFIX = ".goal.json"
GOLD_SUFFIX = ".gold.json"
SESSION_SUFFIX = ".session.jsonl"


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise LoadError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise LoadError(f"{path}: invalid JSON ({exc})") from exc


def _write_canonical(path: str, obj) -> None:
    with open(path, "wb") as fh:
        fh.write(canonical_bytes(obj))
        fh.write(b"\n")


def _check_schema(doc: dict, path: str) -> None:
    found = (doc.get("meta") or {}).get("schema") if "meta" in doc else doc.get("schema")
    if found != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"{path}: schema {found!r} not supported (expected {SCHEMA_VERSION!r})"
        )


def load_model(path: str) -> QualityModel:
    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise LoadError(f"{path}: model document must be a JSON object")
    _check_schema(doc, path)
    try:
        model = QualityModel.from_json(doc)
    except Exception as exc:
        raise LoadError(f"{path}: {exc}") from exc
    from .validate import structural_violations

    bad = structural_violations(model)
    if bad:
        raise LoadError(
            f"{path}: model is structurally broken: "
            + "; ".join(f"{v.rule_id}@{v.target}" for v in bad[:5])
        )
    return model


def save_model(model: QualityModel, path: str) -> None:
    _write_canonical(path, model.to_json())


def load_goal(path: str) -> AdaptationGoal:
    doc = _read_json(path)
    try:
        return parse_goal(doc)
    except Exception as exc:
        raise LoadError(f"{path}: {exc}") from exc


def save_goal(goal: AdaptationGoal, path: str) -> None:
    _write_canonical(path, goal.to_json())


def load_gold(path: str) -> dict:
    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise LoadError(f"{path}: gold standard must be a JSON object")
    return doc


def load_pool(directory: str) -> list[tuple[str, QualityModel]]:
    """All models in a directory, sorted by id."""
    if not os.path.isdir(directory):
        raise LoadError(f"no such pool directory: {directory}")
    out = []
    for fname in sorted(os.listdir(directory)):
        if fname.endswith(MODEL_SUFFIX):
            mid = fname[: -len(MODEL_SUFFIX)]
            out.append((mid, load_model(os.path.join(directory, fname))))
    if not out:
        raise LoadError(f"pool directory {directory} holds no {MODEL_SUFFIX} files")
    return out


def save_session(session: Session, path: str) -> None:
    header = {
        "schema": SCHEMA_VERSION,
        "goal": session.ga.to_json(),
        "initialModel": session.initial_model.to_json(),
    }
    with open(path, "wb") as fh:
        fh.write(canonical_bytes(header))
        fh.write(b"\n")
        for record in session.records:
            fh.write(canonical_bytes(record))
            fh.write(b"\n")


def load_session(path: str, verify: bool = True) -> Session:
    """Rebuild a session from its log.  With ``verify`` every step is
    re-executed and checked against the recorded state."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    except FileNotFoundError as exc:
        raise LoadError(f"no such file: {path}") from exc
    if not lines:
        raise LoadError(f"{path}: empty session file")
    try:
        header = json.loads(lines[0])
        records = [json.loads(ln) for ln in lines[1:]]
    except json.JSONDecodeError as exc:
        raise LoadError(f"{path}: invalid JSON ({exc})") from exc
    if header.get("schema") != SCHEMA_VERSION:
        raise SchemaVersionError(f"{path}: unsupported session schema")
    try:
        initial = QualityModel.from_json(header["initialModel"])
        goal = parse_goal(header["goal"])
    except Exception as exc:
        raise LoadError(f"{path}: {exc}") from exc
    if verify:
        return replay(initial, goal, records)
    session = new_session(initial, goal)
    from .engine import apply_record_input

    for record in records:
        apply_record_input(session, record)
    return session
