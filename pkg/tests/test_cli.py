import json
import os

import pytest
from click.testing import CliRunner

from qmadapt.cli import main
from qmadapt.canon import canonical_bytes
from qmadapt.fixtures import walkthrough_model
from qmadapt.store import save_model

from conftest import fixture_path


@pytest.fixture
def runner():
    return CliRunner()


REFERENCE = fixture_path("pool", "embedded-cpp.qm.json")
TARGET = fixture_path("target.goal.json")
POOL = fixture_path("pool")


def test_validate_clean_model_exits_zero(runner):
    result = runner.invoke(main, ["validate", REFERENCE])
    assert result.exit_code == 0
    assert "no violations" in result.output


def test_validate_reports_violations_exit_one(runner, tmp_path):
    qm = walkthrough_model()
    qm.update("i1", "justification", "")
    path = str(tmp_path / "gap.qm.json")
    save_model(qm, path)
    result = runner.invoke(main, ["validate", path, "--json"])
    assert result.exit_code == 1
    doc = json.loads(result.output)
    assert any(v["rule"] == "V5" for v in doc["violations"])


def test_validate_missing_file_exits_two(runner):
    result = runner.invoke(main, ["validate", "no-such-file.qm.json"])
    assert result.exit_code == 2


def test_rank_orders_pool_and_writes_report(runner, tmp_path):
    stem = str(tmp_path / "rank")
    result = runner.invoke(
        main, ["rank", TARGET, "--pool", POOL, "--json", "--report", stem])
    assert result.exit_code == 0
    doc = json.loads(result.output.splitlines()[0])
    assert [e["model"] for e in doc["ranking"]] == ["embedded-cpp", "web-quality"]
    assert doc["ranking"][0]["total"] == "5/6"
    assert os.path.exists(stem + ".csv") and os.path.exists(stem + ".png")
    header = open(stem + ".csv").readline()
    assert header.startswith("rank,model,total")


def test_rank_pool_from_environment(runner):
    result = runner.invoke(main, ["rank", TARGET, "--json"],
                           env={"QM_ADAPT_POOL": POOL})
    assert result.exit_code == 0


def test_tailor_dry_run_matches_golden(runner):
    result = runner.invoke(main, ["tailor", REFERENCE, TARGET,
                                  "--dry-run", "--json"])
    assert result.exit_code == 0
    golden = open(fixture_path("golden-tailoring-report.json"), "rb").read()
    assert canonical_bytes(json.loads(result.output)) + b"\n" == golden


def test_tailor_no_tr10_drops_review_items(runner):
    result = runner.invoke(main, ["tailor", REFERENCE, TARGET,
                                  "--dry-run", "--no-tr10", "--json"])
    doc = json.loads(result.output)
    assert doc["reviewTasks"] == [] and doc["flagContext"] is False


def test_tailor_requires_out_or_dry_run(runner):
    assert runner.invoke(main, ["tailor", REFERENCE, TARGET]).exit_code == 2


def test_tailor_session_directory_and_task_flow(runner, tmp_path):
    out = str(tmp_path / "session")
    result = runner.invoke(main, ["tailor", REFERENCE, TARGET, "--out", out])
    assert result.exit_code == 0
    for fname in ("initial.qm.json", "current.qm.json", "session.jsonl",
                  "tailoring-report.json"):
        assert os.path.exists(os.path.join(out, fname))

    listing = runner.invoke(main, ["tasks", "list", out, "--json"])
    tasks = json.loads(listing.output)["tasks"]
    assert tasks and all(t["status"] == "open" for t in tasks)

    review = next(t for t in tasks
                  if t["templateId"] == "tailor.review-context")
    waived = runner.invoke(main, ["tasks", "waive", out, review["taskId"],
                                  "--note", "no assembler measures yet"])
    assert waived.exit_code == 0

    stub_eval = next(t for t in tasks
                     if t["templateId"] == "quality-aspect.add.eval")
    ops_file = tmp_path / "ops.json"
    ops_file.write_text(json.dumps([
        {"op": "ADD", "kind": "qualityAspectEvaluations",
         "payload": {"qualityAspect": stub_eval["target"],
                     "aggregationRule": "Mean of considered evaluations."}}]))
    done = runner.invoke(main, ["tasks", "complete", out, stub_eval["taskId"],
                                "--ops", str(ops_file)])
    assert done.exit_code == 0

    final = json.loads(
        runner.invoke(main, ["tasks", "list", out, "--all", "--json"]).output)
    statuses = {t["taskId"]: t["status"] for t in final["tasks"]}
    assert statuses[review["taskId"]] == "waived"
    assert statuses[stub_eval["taskId"]] == "completed"


def test_tasks_complete_unknown_task_exits_one(runner, tmp_path):
    out = str(tmp_path / "session")
    runner.invoke(main, ["tailor", REFERENCE, TARGET, "--out", out])
    result = runner.invoke(main, ["tasks", "complete", out, "t999"])
    assert result.exit_code == 1


def test_audit_command_exact_output(runner, tmp_path):
    stem = str(tmp_path / "audit")
    result = runner.invoke(main, [
        "audit",
        "--base", fixture_path("audit-base.qm.json"),
        "--adapted", fixture_path("audit-adapted.qm.json"),
        "--gold", fixture_path("audit.gold.json"),
        "--report", stem, "--json"])
    assert result.exit_code == 0
    doc = json.loads(result.output.splitlines()[0])
    assert doc["completeness"] == "3/4"
    assert doc["correctness"] == "3/5"
    assert doc["efficiency"] == "2/5"
    assert os.path.exists(stem + ".csv") and os.path.exists(stem + ".png")


def test_audit_bad_input_exits_two(runner):
    result = runner.invoke(main, [
        "audit", "--base", "nope.qm.json",
        "--adapted", fixture_path("audit-adapted.qm.json"),
        "--gold", fixture_path("audit.gold.json")])
    assert result.exit_code == 2
