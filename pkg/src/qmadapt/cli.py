"""Command-line interface.

Exit codes: 0 success, 1 domain negative (violations, failed preconditions
on otherwise well-formed input), 2 usage or I/O problems.  Ranking and audit
write a CSV table plus a rendered chart next to it when ``--report`` names
an output stem.
"""

from __future__ import annotations

import json
import os
import sys

import click

from . import engine, report, store, tailoring
from .audit import audit as run_audit
from .canon import canonical_bytes
from .errors import QmError
from .goal import rank_reference_models
from .validate import PURPOSES, validate

SESSION_FILE = "session.jsonl"
INITIAL_FILE = "initial.qm.json"
CURRENT_FILE = "current.qm.json"
REPORT_FILE = "tailoring-report.json"


def _fail(message: str, code: int = 2):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _emit(doc, as_json: bool, text: str):
    if as_json:
        click.echo(canonical_bytes(doc).decode("utf-8"))
    else:
        click.echo(text)


@click.group()
def main():
    """Adapt software quality models to project goals."""


@main.command("validate")
@click.argument("model_path", type=click.Path())
@click.option("--purpose", type=click.Choice(PURPOSES), default="evaluation",
              show_default=True)
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
def cmd_validate(model_path, purpose, as_json):
    """Check a model against the consistency rules."""
    try:
        model = store.load_model(model_path)
    except QmError as exc:
        _fail(str(exc))
    violations = validate(model, purpose)
    doc = {"purpose": purpose, "violations": [v.to_json() for v in violations]}
    lines = [f"{v.rule_id}  {v.target}  {v.message}" for v in violations]
    _emit(doc, as_json, "\n".join(lines) if lines else "no violations")
    sys.exit(1 if violations else 0)


@main.command("rank")
@click.argument("goal_path", type=click.Path())
@click.option("--pool", "pool_dir", envvar="QM_ADAPT_POOL", required=True,
              type=click.Path(), help="directory of *.qm.json reference models")
@click.option("--report", "report_stem", type=click.Path(),
              help="write <stem>.csv and <stem>.png")
@click.option("--json", "as_json", is_flag=True)
def cmd_rank(goal_path, pool_dir, report_stem, as_json):
    """Rank a pool of reference models against a goal."""
    try:
        ga = store.load_goal(goal_path)
        pool = store.load_pool(pool_dir)
        entries = [(mid, tailoring.embedded_goal(m)) for mid, m in pool]
        scored, skipped = rank_reference_models(ga, entries)
    except QmError as exc:
        _fail(str(exc))
    doc = {
        "ranking": [{"model": mid, **fit.to_json()} for mid, fit in scored],
        "skipped": skipped,
    }
    lines = [
        f"{i}. {mid}  total={float(fit.total):.4f}"
        for i, (mid, fit) in enumerate(scored, start=1)
    ]
    lines += [f"skipped (no embedded goal): {mid}" for mid in skipped]
    _emit(doc, as_json, "\n".join(lines))
    if report_stem:
        csv_path, png_path = report.write_ranking_report(scored, report_stem)
        click.echo(f"report: {csv_path}, {png_path}", err=True)


@main.command("tailor")
@click.argument("model_path", type=click.Path())
@click.argument("goal_path", type=click.Path())
@click.option("--out", "out_dir", type=click.Path(),
              help="create a session directory and apply the plan")
@click.option("--dry-run", is_flag=True, help="print the plan, change nothing")
@click.option("--no-tr10", is_flag=True, help="skip context review flagging")
@click.option("--json", "as_json", is_flag=True)
def cmd_tailor(model_path, goal_path, out_dir, dry_run, no_tr10, as_json):
    """Tailor a reference model to a goal."""
    if not dry_run and not out_dir:
        _fail("either --dry-run or --out is required")
    try:
        model = store.load_model(model_path)
        ga = store.load_goal(goal_path)
        plan = tailoring.plan_tailoring(model, ga, flag_context=not no_tr10)
    except QmError as exc:
        _fail(str(exc))
    if dry_run:
        lines = [
            f"{a['rule']}  {a['action']}  "
            + (a["op"].get("target") or a["op"].get("payload", {}).get("name", ""))
            + f"  ({a['reason']})"
            for a in plan["actions"]
        ]
        lines += [f"TR10  flag-for-review  {r['dimension']}={r['value']}"
                  for r in plan["reviewTasks"]]
        _emit(plan, as_json, "\n".join(lines) if lines else "nothing to tailor")
        return
    try:
        session = engine.new_session(model, ga)
        tailoring.apply_tailoring(session, plan)
    except QmError as exc:
        _fail(str(exc), code=1)
    os.makedirs(out_dir, exist_ok=True)
    store.save_model(session.initial_model, os.path.join(out_dir, INITIAL_FILE))
    store.save_model(session.model, os.path.join(out_dir, CURRENT_FILE))
    store.save_session(session, os.path.join(out_dir, SESSION_FILE))
    with open(os.path.join(out_dir, REPORT_FILE), "wb") as fh:
        fh.write(canonical_bytes(plan) + b"\n")
    summary = {
        "sessionDir": out_dir,
        "actions": len(plan["actions"]),
        "reviewTasks": len(plan["reviewTasks"]),
        "openTasks": len(session.open_tasks()),
    }
    _emit(summary, as_json,
          f"session written to {out_dir}: {summary['actions']} actions, "
          f"{summary['openTasks']} open tasks")


def _load_session_dir(session_dir):
    path = os.path.join(session_dir, SESSION_FILE)
    try:
        return store.load_session(path)
    except QmError as exc:
        _fail(str(exc))


def _save_session_dir(session, session_dir):
    store.save_session(session, os.path.join(session_dir, SESSION_FILE))
    store.save_model(session.model, os.path.join(session_dir, CURRENT_FILE))


@main.group("tasks")
def cmd_tasks():
    """Inspect and resolve the adaptation to-do list of a session."""


@cmd_tasks.command("list")
@click.argument("session_dir", type=click.Path())
@click.option("--all", "show_all", is_flag=True, help="include closed tasks")
@click.option("--json", "as_json", is_flag=True)
def tasks_list(session_dir, show_all, as_json):
    session = _load_session_dir(session_dir)
    tasks = list(session.tasks.values()) if show_all else session.open_tasks()
    doc = {"tasks": [t.to_json() for t in tasks]}
    lines = [f"{t.task_id}  [{t.status}]  {t.text}" for t in tasks]
    _emit(doc, as_json, "\n".join(lines) if lines else "no open tasks")


@cmd_tasks.command("complete")
@click.argument("session_dir", type=click.Path())
@click.argument("task_id")
@click.option("--ops", "ops_path", type=click.Path(),
              help="JSON file with the operations resolving the task")
@click.option("--json", "as_json", is_flag=True)
def tasks_complete(session_dir, task_id, ops_path, as_json):
    session = _load_session_dir(session_dir)
    ops = []
    if ops_path:
        try:
            with open(ops_path, encoding="utf-8") as fh:
                ops = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            _fail(f"{ops_path}: {exc}")
        if isinstance(ops, dict):
            ops = [ops]
    try:
        record = engine.complete_task(session, task_id, ops)
    except QmError as exc:
        _fail(str(exc), code=1)
    _save_session_dir(session, session_dir)
    _emit(record, as_json,
          f"completed {task_id}; {len(session.open_tasks())} tasks open")


@cmd_tasks.command("waive")
@click.argument("session_dir", type=click.Path())
@click.argument("task_id")
@click.option("--note", required=True, help="why the task is waived")
@click.option("--json", "as_json", is_flag=True)
def tasks_waive(session_dir, task_id, note, as_json):
    session = _load_session_dir(session_dir)
    try:
        record = engine.waive_task(session, task_id, note)
    except QmError as exc:
        _fail(str(exc), code=1)
    _save_session_dir(session, session_dir)
    _emit(record, as_json,
          f"waived {task_id}; {len(session.open_tasks())} tasks open")


@main.command("audit")
@click.option("--base", "base_path", required=True, type=click.Path())
@click.option("--adapted", "adapted_path", required=True, type=click.Path())
@click.option("--gold", "gold_path", required=True, type=click.Path())
@click.option("--minutes", type=float, help="adaptation effort in minutes")
@click.option("--report", "report_stem", type=click.Path(),
              help="write <stem>.csv and <stem>.png")
@click.option("--json", "as_json", is_flag=True)
def cmd_audit(base_path, adapted_path, gold_path, minutes, report_stem, as_json):
    """Score an adaptation against a gold standard."""
    try:
        base = store.load_model(base_path)
        adapted = store.load_model(adapted_path)
        gold = store.load_gold(gold_path)
        result = run_audit(base, adapted, gold, minutes=minutes)
    except QmError as exc:
        _fail(str(exc))
    text = (
        f"completeness = {result.completeness} "
        f"({float(result.completeness):.4f})\n"
        f"correctness  = {result.correctness} "
        f"({float(result.correctness):.4f})"
    )
    if result.efficiency is not None:
        text += (
            f"\nefficiency   = {result.efficiency} per minute "
            f"({float(result.efficiency):.4f})"
        )
    _emit(result.to_json(), as_json, text)
    if report_stem:
        csv_path, png_path = report.write_audit_report(result, report_stem)
        click.echo(f"report: {csv_path}, {png_path}", err=True)


@main.command("serve")
@click.option("--port", default=8765, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--pool", "pool_dir", envvar="QM_ADAPT_POOL", required=True,
              type=click.Path())
@click.option("--state-dir", type=click.Path(),
              help="persist sessions under this directory")
def cmd_serve(port, host, pool_dir, state_dir):
    """Run the HTTP service for the assistant UI."""
    import uvicorn

    from .service import create_app

    try:
        app = create_app(pool_dir, state_dir=state_dir)
    except QmError as exc:
        _fail(str(exc))
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
