"""Goal-driven tailoring: shrink and extend a reference model for a target goal.

Ten ordered rules compare the adaptation goal against the reference model.
Planning simulates every rule on a scratch session, so each element is
claimed by the first rule that reaches it and later rules see the already
shrunk model.  The resulting plan is a canonical, hash-guarded report that
can be applied verbatim to a live session (or re-planned if the model moved).
"""

from __future__ import annotations

from . import model as m
from .canon import content_hash
from .engine import Session, add_manual_task, apply_operation, new_session
from .errors import StaleReportError
from .goal import AdaptationGoal, parse_goal
from .model import SCHEMA_VERSION, norm, tags_compatible
from .validate import SPECIFICATION

REVIEW_TEMPLATE = "tailor.review-context"


def _names(values) -> set:
    return {norm(v) for v in values}


def _effective_viewpoint_prunes(model: m.QualityModel, goal_vp: set) -> list[str]:
    """Aspects to delete because their (inherited) viewpoints miss the goal's.
    Only the highest node of each pruned subtree is returned."""
    out = []

    def visit(aid: str, inherited: set) -> None:
        el = model.elements[m.QUALITY_ASPECT][aid]
        own = _names(el["viewpoints"])
        eff = own or inherited
        if eff and not (eff & goal_vp):
            out.append(aid)
            return
        for child in el["refinedBy"]:
            visit(child, eff)

    for root in model.roots(m.QUALITY_ASPECT):
        visit(root, set())
    return out


def _top_level_aspects(model: m.QualityModel) -> list[str]:
    """The aspects compared against the goal's focus: with a single root
    (an umbrella like 'Quality') its direct refinements, otherwise the roots."""
    roots = model.roots(m.QUALITY_ASPECT)
    if len(roots) == 1:
        children = model.elements[m.QUALITY_ASPECT][roots[0]]["refinedBy"]
        if children:
            return list(children)
    return roots


def _context_review_items(model: m.QualityModel, ga: AdaptationGoal) -> list[dict]:
    embedded = (model.goal or {}).get("context") or {}
    known = {norm(d): _names(vs) for d, vs in embedded.items()}
    items = []
    for dim in sorted(ga.context):
        for value in ga.context[dim]:
            if norm(value) not in known.get(norm(dim), set()):
                items.append({"dimension": dim, "value": value})
    return items


def _run(scratch: Session, actions: list[dict], rule: str, op: dict, reason: str):
    record = apply_operation(scratch, op)
    actions.append(
        {
            "rule": rule,
            "action": "delete" if op["op"] == "DEL" else "add-stub",
            "op": op,
            "reason": reason,
            "autoConsequences": record["autoConsequences"],
            "spawnedTasks": record["spawnedTasks"],
        }
    )


def plan_tailoring(
    model: m.QualityModel, ga: AdaptationGoal, flag_context: bool = True
) -> dict:
    """Simulate all tailoring rules against the model and return the plan."""
    scratch = new_session(model, ga)
    actions: list[dict] = []
    work = scratch.model  # same object the scratch session commits into

    # TR1: entity trees for artifacts outside the goal's object
    wanted_objects = _names(ga.object)
    for root in list(work.roots(m.ENTITY_TYPE)):
        name = work.elements[m.ENTITY_TYPE][root]["name"]
        if norm(name) not in wanted_objects:
            _run(scratch, actions, "TR1",
                 {"op": "DEL", "target": root},
                 f"artifact '{name}' is not an object of the goal")
        work = scratch.model

    # TR2: placeholder roots for goal objects the model does not cover
    covered = _names(
        work.elements[m.ENTITY_TYPE][r]["name"] for r in work.roots(m.ENTITY_TYPE)
    )
    for obj in ga.object:
        if norm(obj) not in covered:
            _run(scratch, actions, "TR2",
                 {"op": "ADD", "kind": m.ENTITY_TYPE,
                  "payload": {"name": obj, "stub": True}},
                 f"goal object '{obj}' has no entity tree in the model")
            work = scratch.model

    # TR3: a specification-purpose goal needs no evaluation part
    if ga.purpose == SPECIFICATION:
        for kind in (m.QUALITY_ASPECT_EVALUATION, m.IMPACT_EVALUATION, m.MEASURE):
            for eid in work.all_ids(kind):
                if work.exists(eid):
                    _run(scratch, actions, "TR3",
                         {"op": "DEL", "target": eid},
                         "evaluation element not needed for purpose 'specification'")
                    work = scratch.model

    # TR4: aspect subtrees whose viewpoints miss the goal's viewpoint
    for aid in _effective_viewpoint_prunes(work, _names(ga.viewpoint)):
        if work.exists(aid):
            name = work.display_name(aid)
            _run(scratch, actions, "TR4",
                 {"op": "DEL", "target": aid},
                 f"viewpoints of aspect '{name}' do not meet the goal's viewpoint")
            work = scratch.model

    # TR5: aspect evaluations whose subject aspect is gone
    for qid in work.all_ids(m.QUALITY_ASPECT_EVALUATION):
        el = work.elements[m.QUALITY_ASPECT_EVALUATION][qid]
        subject = el["qualityAspect"]
        if subject is None or not work.exists(subject):
            _run(scratch, actions, "TR5",
                 {"op": "DEL", "target": qid},
                 "aspect evaluation lost its quality aspect")
            work = scratch.model

    # TR6: top-level aspects outside the goal's focus
    wanted_focus = _names(ga.focus)
    for aid in list(_top_level_aspects(work)):
        if not work.exists(aid):
            continue
        name = work.display_name(aid)
        if norm(name) not in wanted_focus:
            _run(scratch, actions, "TR6",
                 {"op": "DEL", "target": aid},
                 f"aspect '{name}' is not in the focus of the goal")
            work = scratch.model

    # TR7: placeholder aspects for focus entries the model does not cover
    top = _top_level_aspects(work)
    present = _names(work.display_name(a) for a in top)
    roots = work.roots(m.QUALITY_ASPECT)
    umbrella = roots[0] if len(roots) == 1 and work.elements[
        m.QUALITY_ASPECT][roots[0]]["refinedBy"] else None
    for focus in ga.focus:
        if norm(focus) not in present:
            payload = {"name": focus, "stub": True}
            if umbrella is not None:
                payload["parent"] = umbrella
            _run(scratch, actions, "TR7",
                 {"op": "ADD", "kind": m.QUALITY_ASPECT, "payload": payload},
                 f"goal focus '{focus}' has no quality aspect in the model")
            work = scratch.model

    # TR8: factors constrained to contexts the goal does not declare
    for fid in work.all_ids(m.FACTOR):
        if not work.exists(fid):
            continue
        el = work.elements[m.FACTOR][fid]
        if el["tags"] and not tags_compatible(el["tags"], ga.context):
            _run(scratch, actions, "TR8",
                 {"op": "DEL", "target": fid},
                 f"factor '{work.display_name(fid)}' is only relevant outside "
                 "the goal's context")
            work = scratch.model

    # TR9: measures constrained to contexts the goal does not declare
    for mid in work.all_ids(m.MEASURE):
        if not work.exists(mid):
            continue
        el = work.elements[m.MEASURE][mid]
        if el["tags"] and not tags_compatible(el["tags"], ga.context):
            _run(scratch, actions, "TR9",
                 {"op": "DEL", "target": mid},
                 f"measure '{work.display_name(mid)}' is only relevant outside "
                 "the goal's context")
            work = scratch.model

    # TR10: context characteristics the reference goal never saw
    review: list[dict] = []
    if flag_context:
        for item in _context_review_items(model, ga):
            text = (
                f"Add stubs for factors and measures needed for the goal "
                f"context {item['dimension']} = {item['value']}; the "
                "reference model was not built for this characteristic."
            )
            add_manual_task(scratch, REVIEW_TEMPLATE, None, text)
            review.append(
                {"rule": "TR10", "action": "flag-for-review", **item, "text": text}
            )

    counts: dict[str, int] = {}
    for action in actions:
        counts[action["rule"]] = counts.get(action["rule"], 0) + 1
    if review:
        counts["TR10"] = len(review)
    seeded = sorted(
        (t.task_id for t in scratch.open_tasks()),
        key=lambda tid: int(tid[1:]),
    )

    return {
        "schema": SCHEMA_VERSION,
        "modelHash": content_hash(model.to_json()),
        "goal": ga.to_json(),
        "flagContext": flag_context,
        "actions": actions,
        "reviewTasks": review,
        "counts": counts,
        "seededTasks": seeded,
        "resultModelHash": content_hash(scratch.model.to_json()),
        "openTaskCount": len(scratch.open_tasks()),
    }


def apply_tailoring(session: Session, report: dict) -> list[dict]:
    """Execute a tailoring plan on a live session.  The plan is only valid
    for the exact model state it was computed from."""
    current = content_hash(session.model.to_json())
    if report.get("modelHash") != current:
        raise StaleReportError(
            "tailoring report was computed for a different model state"
        )
    records = []
    for action in report.get("actions", []):
        records.append(apply_operation(session, action["op"]))
    for item in report.get("reviewTasks", []):
        records.append(
            add_manual_task(session, REVIEW_TEMPLATE, None, item["text"])
        )
    return records


def tailor(
    model: m.QualityModel, ga: AdaptationGoal, flag_context: bool = True
) -> tuple[Session, dict]:
    """Plan and apply in one step on a fresh session."""
    report = plan_tailoring(model, ga, flag_context)
    session = new_session(model, ga)
    apply_tailoring(session, report)
    return session, report


def embedded_goal(model: m.QualityModel) -> AdaptationGoal | None:
    """The goal a reference model was built for, if it carries one."""
    if model.goal is None:
        return None
    return parse_goal(model.goal)
