"""Deterministic random generators for models, goals, and session activity.

Everything is driven by a seeded ``random.Random`` so failures reproduce.
Generated models are structurally valid by construction (they are built
through the model primitives) but intentionally carry operational gaps:
empty justifications, unmeasured factors, unevaluated impacts, stubs.
"""

from __future__ import annotations

import random
import string

from qmadapt import engine
from qmadapt import model as m
from qmadapt.errors import QmError
from qmadapt.goal import AdaptationGoal, parse_goal

WORDS = (
    "reliability safety usability maintainability portability efficiency "
    "analyzability testability security modularity readability accuracy "
    "robustness traceability consistency completeness conciseness"
).split()

DIMS = ("Domain", "Language", "Paradigm", "Platform")
VALUES = {
    "Domain": ["Embedded", "Web", "Desktop", "Mobile"],
    "Language": ["C", "C++", "Assembler", "Java", "Python"],
    "Paradigm": ["OO", "Procedural", "Functional"],
    "Platform": ["Linux", "Windows", "RTOS"],
}


def _name(rng: random.Random) -> str:
    return (
        rng.choice(WORDS).capitalize()
        + " "
        + "".join(rng.choices(string.ascii_lowercase, k=5))
    )


def _tags(rng: random.Random) -> dict:
    if rng.random() < 0.6:
        return {}
    dims = rng.sample(DIMS, rng.randint(1, 2))
    return {d: rng.sample(VALUES[d], rng.randint(1, 2)) for d in dims}


def random_goal(rng: random.Random) -> AdaptationGoal:
    context = {}
    for dim in DIMS:
        if rng.random() < 0.5:
            context[dim] = rng.sample(VALUES[dim], rng.randint(1, 2))
    return parse_goal(
        {
            "object": rng.sample(
                ["Source code", "Requirements specification", "Design", "Tests"],
                rng.randint(1, 3),
            ),
            "purpose": rng.choice(["specification", "evaluation"]),
            "viewpoint": rng.sample(["Developer", "User", "Manager"], rng.randint(1, 2)),
            "focus": rng.sample(WORDS, rng.randint(1, 4)),
            "context": context,
        }
    )


def random_model(rng: random.Random, max_elements: int = 60) -> m.QualityModel:
    qm = m.QualityModel(f"random-{rng.randrange(10**6)}")
    budget = rng.randint(9, max_elements)

    n_aspects = max(1, budget // 6)
    aspects = []
    for _ in range(n_aspects):
        payload = {"name": _name(rng), "description": _name(rng)}
        if aspects and rng.random() < 0.7:
            payload["parent"] = rng.choice(aspects)
        if rng.random() < 0.4:
            payload["viewpoints"] = rng.sample(
                ["Developer", "User", "Manager"], rng.randint(1, 2)
            )
        aspects.append(qm.insert(m.QUALITY_ASPECT, payload))

    n_entities = max(1, budget // 6)
    entities = []
    for _ in range(n_entities):
        payload = {"name": _name(rng), "description": ""}
        if entities and rng.random() < 0.6:
            payload["parent"] = rng.choice(entities)
        entities.append(qm.insert(m.ENTITY_TYPE, payload))

    properties = [
        qm.insert(m.PROPERTY, {"name": _name(rng)})
        for _ in range(max(1, budget // 8))
    ]

    factors = []
    for _ in range(max(1, budget // 5)):
        factors.append(
            qm.insert(
                m.FACTOR,
                {
                    "name": _name(rng),
                    "entityType": rng.choice(entities),
                    "property": rng.choice(properties),
                    "tags": _tags(rng),
                },
            )
        )

    requirements = [
        qm.insert(m.QUALITY_REQUIREMENT, {"name": _name(rng)})
        for _ in range(rng.randint(0, 2))
    ]

    impacts = []
    for _ in range(max(1, budget // 5)):
        payload = {
            "factor": rng.choice(factors),
            "qualityAspect": rng.choice(aspects),
            "effect": rng.choice(list(m.EFFECTS)),
            "justification": _name(rng) if rng.random() < 0.8 else "",
        }
        if requirements and rng.random() < 0.3:
            payload["requirement"] = rng.choice(requirements)
        impacts.append(qm.insert(m.IMPACT, payload))

    measures = []
    for _ in range(max(1, budget // 6)):
        quantified = rng.sample(factors, rng.randint(0, min(2, len(factors))))
        payload = {
            "name": _name(rng),
            "measurementRule": _name(rng) if rng.random() < 0.8 else "",
            "quantifies": quantified,
            "tags": _tags(rng),
        }
        if not quantified and rng.random() < 0.5:
            payload["stub"] = True
        measures.append(qm.insert(m.MEASURE, payload))

    unevaluated = list(impacts)
    rng.shuffle(unevaluated)
    evaluations = []
    for iid in unevaluated[: rng.randint(0, len(unevaluated))]:
        evaluations.append(
            qm.insert(
                m.IMPACT_EVALUATION,
                {
                    "impact": iid,
                    "uses": rng.sample(measures, rng.randint(0, min(2, len(measures)))),
                    "evaluationRule": _name(rng) if rng.random() < 0.7 else "",
                },
            )
        )

    free_aspects = list(aspects)
    rng.shuffle(free_aspects)
    for aid in free_aspects[: rng.randint(0, len(free_aspects))]:
        considers = rng.sample(
            evaluations, rng.randint(0, min(2, len(evaluations)))
        )
        qm.insert(
            m.QUALITY_ASPECT_EVALUATION,
            {
                "qualityAspect": aid,
                "aggregationRule": _name(rng),
                "considers": considers,
            },
        )
    return qm


def _random_add(rng: random.Random, model: m.QualityModel) -> dict | None:
    kind = rng.choice(m.KINDS)
    if kind == m.QUALITY_ASPECT:
        payload = {"name": _name(rng)}
        aspects = model.all_ids(m.QUALITY_ASPECT)
        if aspects and rng.random() < 0.7:
            payload["parent"] = rng.choice(aspects)
    elif kind == m.ENTITY_TYPE:
        payload = {"name": _name(rng)}
        entities = model.all_ids(m.ENTITY_TYPE)
        if entities and rng.random() < 0.7:
            payload["parent"] = rng.choice(entities)
    elif kind == m.PROPERTY:
        payload = {"name": _name(rng)}
    elif kind == m.FACTOR:
        entities = model.all_ids(m.ENTITY_TYPE)
        properties = model.all_ids(m.PROPERTY)
        if rng.random() < 0.3:
            payload = {"name": _name(rng), "stub": True}
        elif entities and properties:
            payload = {
                "name": _name(rng),
                "entityType": rng.choice(entities),
                "property": rng.choice(properties),
                "tags": _tags(rng),
            }
        else:
            return None
    elif kind == m.IMPACT:
        factors = model.all_ids(m.FACTOR)
        aspects = model.all_ids(m.QUALITY_ASPECT)
        if not factors or not aspects:
            return None
        payload = {
            "factor": rng.choice(factors),
            "qualityAspect": rng.choice(aspects),
            "effect": rng.choice(list(m.EFFECTS)),
            "justification": _name(rng) if rng.random() < 0.6 else "",
        }
    elif kind == m.QUALITY_REQUIREMENT:
        payload = {"name": _name(rng)}
    elif kind == m.MEASURE:
        factors = model.all_ids(m.FACTOR)
        payload = {
            "name": _name(rng) if rng.random() < 0.7 else "",
            "quantifies": rng.sample(factors, rng.randint(0, min(2, len(factors)))),
            "tags": _tags(rng),
        }
        if rng.random() < 0.4:
            payload["stub"] = True
    elif kind == m.IMPACT_EVALUATION:
        free = [
            i
            for i in model.all_ids(m.IMPACT)
            if model.get(i)["evaluatedBy"] is None
        ]
        if not free:
            return None
        measures = model.all_ids(m.MEASURE)
        payload = {
            "impact": rng.choice(free),
            "uses": rng.sample(measures, rng.randint(0, min(2, len(measures)))),
            "evaluationRule": _name(rng) if rng.random() < 0.6 else "",
        }
    else:
        free = [
            a
            for a in model.all_ids(m.QUALITY_ASPECT)
            if model.get(a)["evaluatedBy"] is None
        ]
        if not free:
            return None
        payload = {"qualityAspect": rng.choice(free), "aggregationRule": _name(rng)}
    return {"op": "ADD", "kind": kind, "payload": payload}


def _random_mod(rng: random.Random, model: m.QualityModel) -> dict | None:
    kind = rng.choice(m.KINDS)
    ids = model.all_ids(kind)
    if not ids:
        return None
    target = rng.choice(ids)
    writable = [
        f
        for f, s in m.SCHEMA[kind].items()
        if not s.derived and f != "stub" and f != "parent"
    ]
    fname = rng.choice(writable)
    spec = m.SCHEMA[kind][fname]
    if spec.ftype == "str":
        value = _name(rng)
    elif spec.ftype == "enum":
        value = rng.choice(list(spec.enum))
    elif spec.ftype == "tags":
        value = _tags(rng)
    elif spec.ftype == "strset":
        value = rng.sample(["Developer", "User", "Manager"], rng.randint(1, 2))
    elif spec.ftype == "ref":
        pool = [
            i for k in spec.ref_kinds for i in model.all_ids(k)
        ]
        if not pool:
            return None
        value = rng.choice(pool)
    else:
        pool = [i for k in spec.ref_kinds for i in model.all_ids(k)]
        value = rng.sample(pool, rng.randint(0, min(3, len(pool))))
    return {"op": "MOD", "target": target, "field": fname, "value": value}


def random_step(rng: random.Random, session: engine.Session) -> dict | None:
    """Try to perform one random session action; returns the record or None
    when the sampled action was not applicable."""
    model = session.model
    roll = rng.random()
    try:
        if roll < 0.25:
            op = _random_add(rng, model)
            return engine.apply_operation(session, op) if op else None
        if roll < 0.45:
            candidates = [
                i for k in m.KINDS for i in model.all_ids(k)
            ]
            if not candidates:
                return None
            return engine.apply_operation(
                session, {"op": "DEL", "target": rng.choice(candidates)}
            )
        if roll < 0.7:
            op = _random_mod(rng, model)
            return engine.apply_operation(session, op) if op else None
        open_tasks = session.open_tasks()
        if not open_tasks:
            return None
        task = rng.choice(open_tasks)
        if roll < 0.85:
            ops = [
                op
                for op in task.suggested_ops
                if op.get("op") == "DEL" and model.exists(op.get("target", ""))
            ]
            if rng.random() < 0.5:
                ops = []
            return engine.complete_task(session, task.task_id, ops)
        return engine.waive_task(session, task.task_id, "not relevant here")
    except QmError:
        return None


def random_session(
    rng: random.Random, max_elements: int = 60, max_ops: int = 30
) -> engine.Session:
    session = engine.new_session(random_model(rng, max_elements), random_goal(rng))
    for _ in range(rng.randint(1, max_ops)):
        random_step(rng, session)
    return session
