"""Regenerate the frozen fixture files under fixtures/.

Run from the repository root after an intentional change to the fixture
models or the report format, then review the diff before committing.
"""

from __future__ import annotations

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from qmadapt import engine, fixtures, tailoring
from qmadapt.canon import canonical_bytes
from qmadapt.goal import parse_goal
from qmadapt.model import PROPERTY, QualityModel
from qmadapt.store import save_goal, save_model, save_session

ROOT = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def write(path: str, obj) -> None:
    full = os.path.join(ROOT, path)
    os.makedirs(os.path.dirname(full), exist_ok=True)
    with open(full, "wb") as fh:
        fh.write(canonical_bytes(obj))
        fh.write(b"\n")


def main() -> None:
    os.makedirs(os.path.join(ROOT, "pool"), exist_ok=True)

    reference = fixtures.embedded_reference_model()
    save_model(reference, os.path.join(ROOT, "pool", "embedded-cpp.qm.json"))

    web = QualityModel("web-quality", "1")
    web.goal = parse_goal(
        {
            "object": ["Source code"],
            "purpose": "evaluation",
            "viewpoint": ["Developer"],
            "focus": ["Maintainability", "Usability"],
            "context": {"Domain": ["Web"], "Language": ["Java"]},
        }
    ).to_json()
    web.insert("qualityAspects", {"id": "qa_m", "name": "Maintainability"})
    web.insert("qualityAspects", {"id": "qa_u", "name": "Usability"})
    web.insert("entityTypes", {"id": "et_src", "name": "Source code"})
    web.insert(
        "qualityAspectEvaluations",
        {"id": "qe_m", "qualityAspect": "qa_m", "aggregationRule": "Mean."},
    )
    web.insert(
        "qualityAspectEvaluations",
        {"id": "qe_u", "qualityAspect": "qa_u", "aggregationRule": "Mean."},
    )
    save_model(web, os.path.join(ROOT, "pool", "web-quality.qm.json"))

    save_goal(fixtures.embedded_goal(), os.path.join(ROOT, "embedded.goal.json"))
    save_goal(fixtures.target_goal(), os.path.join(ROOT, "target.goal.json"))

    walkthrough = fixtures.walkthrough_model()
    save_model(walkthrough, os.path.join(ROOT, "walkthrough.qm.json"))

    # golden tailoring plan for (embedded-cpp reference, target goal)
    plan = tailoring.plan_tailoring(reference, fixtures.target_goal())
    write("golden-tailoring-report.json", plan)

    # golden walkthrough session: add a measure, then resolve the cascade
    session = engine.new_session(walkthrough, fixtures.target_goal())
    engine.apply_operation(
        session,
        {"op": "ADD", "kind": "measures",
         "payload": {"id": "m1", "stub": True, "quantifies": ["f1"]}},
    )
    engine.complete_task(session, "t1", [
        {"op": "MOD", "target": "m1", "field": "name",
         "value": "Documentation degree"},
        {"op": "MOD", "target": "m1", "field": "measurementRule",
         "value": "Share of documented elements."},
    ])
    engine.complete_task(session, "t3", [
        {"op": "MOD", "target": "ie1", "field": "uses", "value": ["m0", "m1"]},
    ])
    engine.complete_task(session, "t4", [
        {"op": "MOD", "target": "ie2", "field": "uses", "value": ["m0", "m1"]},
    ])
    engine.complete_task(session, "t5", [
        {"op": "MOD", "target": "ie1", "field": "evaluationRule",
         "value": "Grades weighted over comment ratio and documentation degree."},
    ])
    engine.complete_task(session, "t6", [
        {"op": "MOD", "target": "ie2", "field": "evaluationRule",
         "value": "Grades weighted over comment ratio and documentation degree."},
    ])
    save_session(session, os.path.join(ROOT, "golden-walkthrough.session.jsonl"))

    # audit fixture: 20 gold entries, 15 touched, 12 meeting the expectation
    base = QualityModel("audit-base", "1")
    for i in range(1, 26):
        base.insert(PROPERTY, {"id": f"pr{i:02d}", "name": f"Property {i:02d}"})
    save_model(base, os.path.join(ROOT, "audit-base.qm.json"))

    adapted = base.clone()
    wanted = "Documented for the embedded context."
    for i in range(1, 13):
        adapted.update(f"pr{i:02d}", "description", wanted)
    for i in range(13, 16):
        adapted.update(f"pr{i:02d}", "description", "TODO")
    save_model(adapted, os.path.join(ROOT, "audit-adapted.qm.json"))

    gold = {
        "schema": "qm-adapt/1",
        "minutes": 30,
        "entries": [
            {
                "element": f"pr{i:02d}",
                "op": "MOD",
                "expect": {"value": {"description": wanted}},
            }
            for i in range(1, 21)
        ],
    }
    write("audit.gold.json", gold)
    print("fixtures written to", os.path.abspath(ROOT))


if __name__ == "__main__":
    main()
