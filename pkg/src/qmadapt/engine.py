"""Iterative-change engine: consequence expansion and the adaptation to-do list.

Every elementary operation (DEL/ADD/MOD) routed through a session is expanded
against the consequence rules: consistency consequences run automatically and
recursively (cascading deletes), adaptation consequences become open tasks.
After each applied operation the engine settles the task list:

1. tasks whose target vanished become obsolete;
2. new tasks spawn (deduplicated on (template, target); tasks whose
   obligation already holds are not opened);
3. open tasks whose obligation predicate became true complete automatically;
4. stub elements with no open task left resolve (stub flag cleared);
5. a repair sweep guarantees every operational validation finding is covered
   by an open or waived task targeting the offending element.

The append-only log makes a session fully replayable.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

from . import model as m
from . import rules
from .canon import content_hash
from .errors import InputError, IntegrityError, NotFoundError, ReplayError, TaskStateError
from .goal import AdaptationGoal
from .validate import OPERATIONAL, STRUCTURAL, validate

OPEN = "open"
COMPLETED = "completed"
WAIVED = "waived"
OBSOLETE = "obsolete"


@dataclass
class AdaptationTask:
    task_id: str
    template_id: str
    target: str | None
    text: str
    status: str = OPEN
    origin: int = 0  # seq of the record that spawned it
    resolution: dict | None = None
    suggested_ops: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "taskId": self.task_id,
            "templateId": self.template_id,
            "target": self.target,
            "text": self.text,
            "status": self.status,
            "origin": self.origin,
            "resolution": self.resolution,
            "suggestedOps": self.suggested_ops,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "AdaptationTask":
        return cls(
            task_id=doc["taskId"],
            template_id=doc["templateId"],
            target=doc["target"],
            text=doc["text"],
            status=doc["status"],
            origin=doc["origin"],
            resolution=doc.get("resolution"),
            suggested_ops=doc.get("suggestedOps", []),
        )


class Session:
    """One adaptation in progress: model, goal, to-do list, append-only log."""

    def __init__(self, initial_model: m.QualityModel, ga: AdaptationGoal):
        self.initial_model = initial_model.clone()
        self.model = initial_model.clone()
        self.ga = ga
        self.tasks: dict[str, AdaptationTask] = {}
        self.records: list[dict] = []
        self._task_seq = 1
        # pre-existing operational gaps become to-dos right away; this is a
        # pure function of (model, goal), so replay reproduces it unlogged
        txn = _Txn(self)
        txn.seq = 0
        txn.settle()
        self.model = txn.model
        self.tasks = txn.tasks
        self._task_seq = txn.task_seq

    # -- read side -----------------------------------------------------------

    def open_tasks(self) -> list[AdaptationTask]:
        return [t for t in self.tasks.values() if t.status == OPEN]

    def get_task(self, task_id: str) -> AdaptationTask:
        if task_id not in self.tasks:
            raise NotFoundError(f"no task {task_id!r}")
        return self.tasks[task_id]

    def model_hash(self) -> str:
        return content_hash(self.model.to_json())

    def fingerprint(self) -> str:
        return content_hash(
            {
                "model": self.model.to_json(),
                "tasks": [t.to_json() for t in self.tasks.values()],
                "records": len(self.records),
            }
        )

    def tasks_json(self) -> list[dict]:
        return [t.to_json() for t in self.tasks.values()]


def new_session(initial_model: m.QualityModel, ga: AdaptationGoal) -> Session:
    return Session(initial_model, ga)


def _check_op(op: dict) -> dict:
    if not isinstance(op, dict) or op.get("op") not in ("DEL", "ADD", "MOD"):
        raise InputError("operation must be an object with op DEL|ADD|MOD")
    kind = op.get("op")
    if kind == "ADD":
        if op.get("kind") not in m.KINDS or not isinstance(op.get("payload"), dict):
            raise InputError("ADD needs a kind and a payload object")
    elif kind == "DEL":
        if not op.get("target"):
            raise InputError("DEL needs a target")
    else:
        if not op.get("target") or not op.get("field"):
            raise InputError("MOD needs a target and a field")
        if "value" not in op:
            raise InputError("MOD needs a value")
    return op


class _Txn:
    """Working state of one atomic apply; committed only on success."""

    def __init__(self, session: Session):
        self.session = session
        self.model = session.model.clone()
        self.tasks = {tid: copy.deepcopy(t) for tid, t in session.tasks.items()}
        self.task_seq = session._task_seq
        self.seq = len(session.records) + 1
        self.auto: list[dict] = []
        self.pending: list[rules.PendingTask] = []
        self.spawned: list[str] = []
        self.completed: list[str] = []
        self.obsoleted: list[str] = []
        self.unstubbed: list[str] = []

    # -- op execution ---------------------------------------------------------

    def execute(self, op: dict) -> str | None:
        op = _check_op(op)
        if op["op"] == "DEL":
            if not self.model.exists(op["target"]):
                raise NotFoundError(f"no element {op['target']!r}")
            self._cascade_delete(op["target"], is_root=True)
            return None
        if op["op"] == "ADD":
            new_id = self.model.insert(op["kind"], op["payload"])
            self.pending.extend(rules.add_adaptation(self.model, new_id))
            self._implied_mods_for_add(op["kind"], op["payload"], new_id)
            return new_id
        touched = self.model.update(op["target"], op["field"], op["value"])
        for eid, fname in touched:
            self.pending.extend(rules.mod_adaptation(self.model, eid, fname))
        return None

    def _implied_mods_for_add(self, kind: str, payload: dict, new_id: str) -> None:
        # Reference payload entries update inverse fields on existing
        # elements; those count as modifications of the inverse field and
        # trigger the matching MOD consequence row.
        for fname, spec in m.SCHEMA[kind].items():
            if spec.derived or not spec.inverse or fname not in payload:
                continue
            value = payload[fname]
            targets = [value] if spec.ftype == "ref" else list(value or [])
            for target in targets:
                if target is not None and self.model.exists(target):
                    self.pending.extend(
                        rules.mod_adaptation(self.model, target, spec.inverse)
                    )

    def _cascade_delete(self, eid: str, is_root: bool) -> None:
        if not self.model.exists(eid):
            return
        self.pending.extend(rules.del_adaptation(self.model, eid))
        for child in rules.consistency_targets(self.model, eid):
            if self.model.exists(child):
                self.auto.append(
                    {"op": "DEL", "kind": self.model.kind_of(child), "target": child}
                )
                self._cascade_delete(child, is_root=False)
        self.model.detach_soft_links(eid)
        self.model.remove(eid)

    # -- settling -------------------------------------------------------------

    def _open_targets(self) -> set:
        return {t.target for t in self.tasks.values() if t.status == OPEN}

    def _open_or_waived_targets(self) -> set:
        return {
            t.target for t in self.tasks.values() if t.status in (OPEN, WAIVED)
        }

    def _find_open(self, template_id: str, target) -> AdaptationTask | None:
        for t in self.tasks.values():
            if t.status == OPEN and t.template_id == template_id and t.target == target:
                return t
        return None

    def _was_waived(self, template_id: str, target) -> bool:
        return any(
            t.status == WAIVED and t.template_id == template_id and t.target == target
            for t in self.tasks.values()
        )

    def _spawn(self, pt: rules.PendingTask) -> bool:
        if pt.target is not None and not self.model.exists(pt.target):
            return False
        if pt.purpose_only and self.session.ga.purpose != pt.purpose_only:
            return False
        existing = self._find_open(pt.template_id, pt.target)
        if existing is not None:
            existing.text = pt.text  # re-trigger refreshes, never duplicates
            return False
        if self._was_waived(pt.template_id, pt.target):
            return False  # an explicit waiver is not re-litigated
        if rules.is_satisfied(pt.template_id, self.model, pt.target, self.session.ga.purpose):
            return False
        task = AdaptationTask(
            task_id=f"t{self.task_seq}",
            template_id=pt.template_id,
            target=pt.target,
            text=pt.text,
            origin=self.seq,
            suggested_ops=list(pt.suggested_ops),
        )
        self.task_seq += 1
        self.tasks[task.task_id] = task
        self.spawned.append(task.task_id)
        return True

    def settle(self) -> None:
        # 1. obsolete tasks whose target is gone
        for t in self.tasks.values():
            if t.status == OPEN and t.target is not None and not self.model.exists(t.target):
                t.status = OBSOLETE
                self.obsoleted.append(t.task_id)
        # 2. spawn pending adaptation tasks
        for pt in self.pending:
            self._spawn(pt)
        self.pending = []
        # 3. auto-complete satisfied obligations
        for t in self.tasks.values():
            if t.status != OPEN:
                continue
            if rules.is_satisfied(t.template_id, self.model, t.target, self.session.ga.purpose):
                t.status = COMPLETED
                t.resolution = {"auto": True}
                self.completed.append(t.task_id)
        self._settle_stubs_and_repair()

    def _settle_stubs_and_repair(self) -> None:
        for _ in range(self.model.element_count() + 1):
            changed = False
            changed |= self._unstub_sweep()
            changed |= self._repair_sweep()
            if not changed:
                break

    def _required_set(self, kind: str, el: dict) -> bool:
        return all(
            el[f] is not None for f, s in m.SCHEMA[kind].items() if s.required
        )

    def _unstub_sweep(self) -> bool:
        # a stub whose to-dos are all closed is resolved (unless clearing the
        # flag would expose unset cardinality-1 references)
        open_targets = self._open_targets()
        ever_targeted = {t.target for t in self.tasks.values()}
        changed = False
        for kind in m.STUB_KINDS:
            for eid in self.model.all_ids(kind):
                el = self.model.elements[kind][eid]
                if (
                    el["stub"]
                    and eid in ever_targeted
                    and eid not in open_targets
                    and self._required_set(kind, el)
                ):
                    el["stub"] = False
                    self.unstubbed.append(eid)
                    changed = True
        return changed

    def _repair_sweep(self) -> bool:
        purpose = self.session.ga.purpose
        violations = validate(self.model, purpose)
        structural = [v for v in violations if v.severity == STRUCTURAL]
        if structural:
            raise IntegrityError(
                "operation would leave structural violations: "
                + "; ".join(f"{v.rule_id}@{v.target}" for v in structural)
            )
        covered = self._open_or_waived_targets()
        changed = False
        for v in violations:
            if v.severity != OPERATIONAL or v.target in covered:
                continue
            if v.rule_id == "V10":
                # a stub nobody tracks: open its natural to-dos, or resolve
                # it outright when every checkable obligation already holds
                spawned_any = False
                for pt in rules.add_adaptation(self.model, v.target):
                    if self._spawn(pt):
                        spawned_any = True
                el = self.model.get(v.target)
                if spawned_any:
                    covered.add(v.target)
                    changed = True
                elif self._required_set(self.model.kind_of(v.target), el):
                    el["stub"] = False
                    self.unstubbed.append(v.target)
                    changed = True
                continue
            pt = rules.repair_task(self.model, v)
            if pt is not None and self._spawn(pt):
                covered.add(pt.target)
                changed = True
        return changed

    # -- commit ----------------------------------------------------------------

    def commit(self, record: dict) -> dict:
        record.update(
            {
                "seq": self.seq,
                "autoConsequences": self.auto,
                "spawnedTasks": self.spawned,
                "completedTasks": self.completed,
                "obsoletedTasks": self.obsoleted,
                "unstubbed": self.unstubbed,
                "modelHashAfter": content_hash(self.model.to_json()),
            }
        )
        s = self.session
        s.model = self.model
        s.tasks = self.tasks
        s._task_seq = self.task_seq
        s.records.append(record)
        return record


def consequences_of(model: m.QualityModel, ga: AdaptationGoal, op: dict):
    """Pure expansion of one operation (no execution): the consistency
    deletions that would run and the adaptation tasks that would be raised."""
    op = _check_op(op)
    probe = Session(model, ga)
    txn = _Txn(probe)
    txn.execute(op)
    consistency = list(txn.auto)
    adaptation = []
    for pt in txn.pending:
        if pt.purpose_only and ga.purpose != pt.purpose_only:
            continue
        if pt.target is not None and not txn.model.exists(pt.target):
            continue
        if rules.is_satisfied(pt.template_id, txn.model, pt.target, ga.purpose):
            continue
        adaptation.append(pt)
    return consistency, adaptation


def apply_operation(session: Session, op: dict) -> dict:
    txn = _Txn(session)
    txn.execute(op)
    txn.settle()
    return txn.commit({"action": "op", "op": op})


def complete_task(session: Session, task_id: str, ops: list[dict]) -> dict:
    task = session.get_task(task_id)
    if task.status != OPEN:
        raise TaskStateError(f"task {task_id} is {task.status}, not open")
    txn = _Txn(session)
    done = txn.tasks[task_id]
    done.status = COMPLETED
    done.resolution = {"ops": ops}
    txn.completed.append(task_id)
    for op in ops:
        txn.execute(op)
    txn.settle()
    return txn.commit({"action": "complete", "taskId": task_id, "ops": ops})


def waive_task(session: Session, task_id: str, note: str) -> dict:
    task = session.get_task(task_id)
    if task.status != OPEN:
        raise TaskStateError(f"task {task_id} is {task.status}, not open")
    if not note or not note.strip():
        raise InputError("a waive note is required")
    txn = _Txn(session)
    waived = txn.tasks[task_id]
    waived.status = WAIVED
    waived.resolution = {"note": note}
    txn.settle()
    return txn.commit({"action": "waive", "taskId": task_id, "note": note})


def add_manual_task(
    session: Session,
    template_id: str,
    target: str | None,
    text: str,
    suggested_ops: list | None = None,
) -> dict:
    """Directly opens an adaptation task outside the rule table (used for
    tailoring review items)."""
    txn = _Txn(session)
    txn.pending.append(
        rules.PendingTask(template_id, target, text, suggested_ops=suggested_ops or [])
    )
    txn.settle()
    return txn.commit(
        {
            "action": "task",
            "templateId": template_id,
            "target": target,
            "text": text,
            "suggestedOps": suggested_ops or [],
        }
    )


def open_tasks(session: Session) -> list[AdaptationTask]:
    return session.open_tasks()


_ACTIONS = {"op", "complete", "waive", "task"}


def apply_record_input(session: Session, record: dict) -> dict:
    """Re-issue the user-facing action captured in a log record."""
    action = record.get("action")
    if action == "op":
        return apply_operation(session, record["op"])
    if action == "complete":
        return complete_task(session, record["taskId"], record.get("ops", []))
    if action == "waive":
        return waive_task(session, record["taskId"], record["note"])
    if action == "task":
        return add_manual_task(
            session,
            record["templateId"],
            record.get("target"),
            record["text"],
            record.get("suggestedOps"),
        )
    raise InputError(f"unknown log action {action!r}")


def replay(
    initial_model: m.QualityModel, ga: AdaptationGoal, records: list[dict]
) -> Session:
    """Rebuild a session from its log, verifying every step byte-for-byte."""
    session = new_session(initial_model, ga)
    for i, record in enumerate(records):
        if record.get("action") not in _ACTIONS:
            raise ReplayError(i, f"unknown action {record.get('action')!r}")
        try:
            produced = apply_record_input(session, _replay_input(record))
        except ReplayError:
            raise
        except Exception as exc:  # noqa: BLE001 - surface as replay failure
            raise ReplayError(i, str(exc)) from exc
        if content_hash(produced) != content_hash(record):
            raise ReplayError(i, "recorded step does not match replayed state")
    return session


def _replay_input(record: dict) -> dict:
    keep = {
        "op": ("action", "op"),
        "complete": ("action", "taskId", "ops"),
        "waive": ("action", "taskId", "note"),
        "task": ("action", "templateId", "target", "text", "suggestedOps"),
    }[record["action"]]
    out = {k: record[k] for k in keep if k in record}
    return out
