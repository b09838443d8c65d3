"""Consequence rules for elementary model changes.

Every (element kind, operation type) cell expands into two groups:

* consistency consequences — deletions the engine executes automatically
  and recursively, keeping the graph referentially intact;
* adaptation consequences — to-do items that need a user decision, each
  with a stable template id, an optional satisfaction predicate used for
  automatic completion, and optional suggested operations.

A task whose predicate already holds when it would be spawned is never
opened; a task whose predicate becomes true later is completed
automatically.  Predicates take ``(model, target_id, purpose)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from . import model as m
from .validate import EVALUATION, required_considers


@dataclass
class PendingTask:
    template_id: str
    target: Optional[str]
    text: str
    purpose_only: Optional[str] = None  # spawn only under this goal purpose
    suggested_ops: list = field(default_factory=list)


# ---- satisfaction predicates ------------------------------------------------


def _field_set(fname):
    return lambda model, t, p: model.get(t)[fname] is not None


def _field_nonempty(fname):
    return lambda model, t, p: bool(
        model.get(t)[fname].strip()
        if isinstance(model.get(t)[fname], str)
        else model.get(t)[fname]
    )


def _name_and_rule(model, t, p):
    el = model.get(t)
    return bool(el["name"].strip()) and bool(el["measurementRule"].strip())


def _factor_has_impacts(model, t, p):
    return bool(model.impacts_of_factor(t))


def _measure_used_by_eval(model, t, p):
    return bool(model.evaluations_using_measure(t))


def _property_still_used(model, t, p):
    return bool(model.factors_of_property(t))


def _entity_type_still_needed(model, t, p):
    el = model.get(t)
    return bool(el["children"]) or bool(model.factors_of_entity_type(t))


def _requirement_still_grouping(model, t, p):
    return bool(model.get(t)["groupedImpacts"])


def _aspect_still_needed(model, t, p):
    el = model.get(t)
    return bool(el["refinedBy"]) or bool(el["influencedBy"])


def _considers_complete(model, t, p):
    qae = model.get(t)
    subject = qae["qualityAspect"]
    if subject is None or not model.exists(subject):
        return False
    return all(x in qae["considers"] for x in required_considers(model, subject))


def _ie_complete(model, t, p):
    el = model.get(t)
    return bool(el["uses"]) and bool(el["evaluationRule"].strip())


PREDICATES: dict[str, Callable] = {
    "entity-type.add.name": _field_nonempty("name"),
    "entity-type.add.superordinate": _field_set("parent"),
    "factor.add.entity-type": _field_set("entityType"),
    "factor.add.property": _field_set("property"),
    "factor.add.measure": _field_nonempty("isQuantified"),
    "factor.add.description": _field_nonempty("description"),
    "factor.add.impacts": _factor_has_impacts,
    "impact.add.factor": _field_set("factor"),
    "impact.add.aspect": _field_set("qualityAspect"),
    "impact.add.requirement": _field_set("requirement"),
    "impact.add.justification": _field_nonempty("justification"),
    "impact.add.impact-eval": _field_set("evaluatedBy"),
    "property.add.name": _field_nonempty("name"),
    "quality-aspect.add.name": _field_nonempty("name"),
    "quality-aspect.add.superordinate": _field_set("parent"),
    "quality-aspect.add.eval": _field_set("evaluatedBy"),
    "requirement.add.name": _field_nonempty("name"),
    "measure.add.name-rule": _name_and_rule,
    "measure.add.factor": _field_nonempty("quantifies"),
    "measure.add.impact-eval": _measure_used_by_eval,
    "impact-eval.add.impact": _field_set("impact"),
    "impact-eval.add.measures": _field_nonempty("uses"),
    "qa-eval.add.aspect": _field_set("qualityAspect"),
    "qa-eval.add.aggregation-rule": _field_nonempty("aggregationRule"),
    "factor.del.orphan-property": _property_still_used,
    "factor.del.orphan-entity-type": _entity_type_still_needed,
    "impact.del.orphan-factor": _factor_has_impacts,
    "impact.del.orphan-requirement": _requirement_still_grouping,
    "impact.del.orphan-aspect": _aspect_still_needed,
    "impact-eval.del.reconnect": _field_set("evaluatedBy"),
    "qa-eval.del.reconnect": _field_set("evaluatedBy"),
    "quality-aspect.mod.refined.check-eval": _considers_complete,
    "quality-aspect.mod.influenced.check-eval": _considers_complete,
    "repair.V4": _field_nonempty("quantifies"),
    "repair.V5": _field_nonempty("justification"),
    "repair.V7": _field_nonempty("isQuantified"),
    "repair.V8.impact": _field_set("evaluatedBy"),
    "repair.V8.eval": _ie_complete,
    "repair.V9.aspect": _field_set("evaluatedBy"),
    "repair.V9.eval": _considers_complete,
}


def is_satisfied(template_id: str, model, target, purpose) -> Optional[bool]:
    """None when the template has no machine-checkable obligation."""
    pred = PREDICATES.get(template_id)
    if pred is None:
        return None
    if target is None or not model.exists(target):
        return None
    return bool(pred(model, target, purpose))


# ---- consistency expansion ---------------------------------------------------


def consistency_targets(model: m.QualityModel, element_id: str) -> list[str]:
    """Direct cascade victims of deleting one element (engine recurses)."""
    kind = model.kind_of(element_id)
    el = model.get(element_id)
    if kind == m.ENTITY_TYPE:
        return model.factors_of_entity_type(element_id) + list(el["children"])
    if kind == m.PROPERTY:
        return model.factors_of_property(element_id)
    if kind == m.FACTOR:
        return model.impacts_of_factor(element_id)
    if kind == m.IMPACT:
        return [el["evaluatedBy"]] if el["evaluatedBy"] else []
    if kind == m.QUALITY_ASPECT:
        out = sorted(el["influencedBy"])
        if el["evaluatedBy"]:
            out.append(el["evaluatedBy"])
        out.extend(el["refinedBy"])
        return out
    if kind == m.QUALITY_REQUIREMENT:
        return sorted(el["groupedImpacts"])
    return []  # measures and evaluations cascade nothing


# ---- adaptation expansion ----------------------------------------------------


def _t(model, eid):
    return model.display_name(eid) if model.exists(eid) else eid


def del_adaptation(model: m.QualityModel, element_id: str) -> list[PendingTask]:
    """Adaptation consequences of a deletion, captured at trigger time.
    The engine re-checks targets and predicates after the cascade."""
    kind = model.kind_of(element_id)
    el = model.get(element_id)
    out: list[PendingTask] = []
    if kind == m.FACTOR:
        if el["property"] is not None:
            pid = el["property"]
            out.append(
                PendingTask(
                    "factor.del.orphan-property", pid,
                    f"If the property '{_t(model, pid)}' is no longer needed, delete it.",
                    suggested_ops=[{"op": "DEL", "target": pid}],
                )
            )
        if el["entityType"] is not None:
            etid = el["entityType"]
            out.append(
                PendingTask(
                    "factor.del.orphan-entity-type", etid,
                    f"If the entity type '{_t(model, etid)}' is no longer needed, delete it.",
                    suggested_ops=[{"op": "DEL", "target": etid}],
                )
            )
    elif kind == m.IMPACT:
        if el["factor"] is not None:
            fid = el["factor"]
            out.append(
                PendingTask(
                    "impact.del.orphan-factor", fid,
                    f"If the factor '{_t(model, fid)}' is no longer needed, delete it.",
                    suggested_ops=[{"op": "DEL", "target": fid}],
                )
            )
        if el["requirement"] is not None:
            rid = el["requirement"]
            out.append(
                PendingTask(
                    "impact.del.orphan-requirement", rid,
                    f"If the quality requirement '{_t(model, rid)}' is no longer needed, delete it.",
                    suggested_ops=[{"op": "DEL", "target": rid}],
                )
            )
        if el["qualityAspect"] is not None:
            aid = el["qualityAspect"]
            out.append(
                PendingTask(
                    "impact.del.orphan-aspect", aid,
                    f"If the quality aspect '{_t(model, aid)}' is no longer needed, delete it.",
                    suggested_ops=[{"op": "DEL", "target": aid}],
                )
            )
    elif kind == m.MEASURE:
        for ie in model.evaluations_using_measure(element_id):
            out.append(
                PendingTask(
                    "measure.del.update-eval-rule", ie,
                    f"Delete the measure '{_t(model, element_id)}' from the evaluation "
                    f"rule of the impact evaluation '{ie}'.",
                )
            )
    elif kind == m.IMPACT_EVALUATION:
        if el["impact"] is not None:
            iid = el["impact"]
            out.append(
                PendingTask(
                    "impact-eval.del.reconnect", iid,
                    f"Delete the impact '{iid}' or add a new impact evaluation for it.",
                    purpose_only=EVALUATION,
                    suggested_ops=[{"op": "DEL", "target": iid}],
                )
            )
    elif kind == m.QUALITY_ASPECT_EVALUATION:
        if el["qualityAspect"] is not None:
            aid = el["qualityAspect"]
            out.append(
                PendingTask(
                    "qa-eval.del.reconnect", aid,
                    f"Delete the quality aspect '{_t(model, aid)}' or add a new "
                    "aspect evaluation for it.",
                    purpose_only=EVALUATION,
                    suggested_ops=[{"op": "DEL", "target": aid}],
                )
            )
    return out


def add_adaptation(model: m.QualityModel, new_id: str) -> list[PendingTask]:
    kind = model.kind_of(new_id)
    name = _t(model, new_id)
    t = new_id
    if kind == m.ENTITY_TYPE:
        return [
            PendingTask("entity-type.add.name", t,
                        "Set the name and description of the entity type."),
            PendingTask("entity-type.add.superordinate", t,
                        "Associate the entity type with 1 superordinate entity type."),
            PendingTask("entity-type.add.factors", t,
                        f"Check which factors influencing the quality of interest can "
                        f"be built for entities of type '{name}' and create them."),
        ]
    if kind == m.FACTOR:
        return [
            PendingTask("factor.add.property", t,
                        "Associate the factor with 1 property."),
            PendingTask("factor.add.entity-type", t,
                        "Associate the factor with 1 entity type."),
            PendingTask("factor.add.measure", t,
                        f"Associate the factor '{name}' with ≥ 1 measure.",
                        purpose_only=EVALUATION),
            PendingTask("factor.add.description", t,
                        "Provide a description for the factor."),
            PendingTask("factor.add.impacts", t,
                        f"Define ≥ 1 impacts for the factor '{name}'."),
        ]
    if kind == m.IMPACT:
        return [
            PendingTask("impact.add.aspect", t,
                        "Associate the impact with 1 quality aspect."),
            PendingTask("impact.add.requirement", t,
                        "Associate the impact with 1 quality requirement."),
            PendingTask("impact.add.factor", t,
                        "Associate the impact with 1 factor."),
            PendingTask("impact.add.justification", t,
                        "Set the justification and effect of the added impact."),
            PendingTask("impact.add.impact-eval", t,
                        "Associate the impact with 1 impact evaluation.",
                        purpose_only=EVALUATION),
        ]
    if kind == m.PROPERTY:
        return [
            PendingTask("property.add.name", t,
                        "Set the name and description of the property."),
            PendingTask("property.add.factors", t,
                        f"Check which factors that influence the quality in focus can "
                        f"be built with the property '{name}' and add them."),
        ]
    if kind == m.QUALITY_ASPECT:
        return [
            PendingTask("quality-aspect.add.name", t,
                        "Set the name and description of the quality aspect."),
            PendingTask("quality-aspect.add.superordinate", t,
                        "Associate the quality aspect with 1 superordinate aspect."),
            PendingTask("quality-aspect.add.refine", t,
                        f"Refine the aspect '{name}' with sub-aspects, if necessary."),
            PendingTask("quality-aspect.add.eval", t,
                        "Associate the quality aspect with 1 aspect evaluation.",
                        purpose_only=EVALUATION),
            PendingTask("quality-aspect.add.impacts", t,
                        f"Check which factors influence the aspect '{name}' and add "
                        "impact relationships for them."),
        ]
    if kind == m.QUALITY_REQUIREMENT:
        return [
            PendingTask("requirement.add.name", t,
                        "Set the name and description of the added quality requirement."),
        ]
    if kind == m.MEASURE:
        return [
            PendingTask("measure.add.name-rule", t,
                        "Provide a name and measurement rule."),
            PendingTask("measure.add.factor", t,
                        f"Associate the measure '{name}' with ≥ 1 factor."),
            PendingTask("measure.add.impact-eval", t,
                        f"Associate the measure '{name}' with ≥ 1 impact evaluation."),
        ]
    if kind == m.IMPACT_EVALUATION:
        return [
            PendingTask("impact-eval.add.impact", t,
                        "Associate the impact evaluation with 1 impact."),
            PendingTask("impact-eval.add.measures", t,
                        "Associate the impact evaluation with ≥ 1 measure."),
        ]
    if kind == m.QUALITY_ASPECT_EVALUATION:
        return [
            PendingTask("qa-eval.add.aspect", t,
                        "Associate the aspect evaluation with 1 quality aspect."),
            PendingTask("qa-eval.add.aggregation-rule", t,
                        "Provide an aggregation rule that considers all evaluations of "
                        "influencing impacts and subordinated quality aspects."),
        ]
    return []


def mod_adaptation(
    model: m.QualityModel, element_id: str, fname: str
) -> list[PendingTask]:
    if not model.exists(element_id):
        return []
    kind = model.kind_of(element_id)
    el = model.get(element_id)
    out: list[PendingTask] = []
    if kind == m.FACTOR and fname == "isQuantified":
        for imp in model.impacts_of_factor(element_id):
            ie = model.get(imp)["evaluatedBy"]
            if ie is not None:
                out.append(
                    PendingTask(
                        "factor.mod.quantified.check-eval", ie,
                        f"Check that all relevant measures of the factor "
                        f"'{_t(model, element_id)}' are associated with the impact "
                        f"evaluation '{ie}'.",
                        suggested_ops=[{"op": "MOD", "target": ie, "field": "uses"}],
                    )
                )
    elif kind == m.IMPACT and fname == "factor":
        ie = el["evaluatedBy"]
        if ie is not None:
            out.append(
                PendingTask(
                    "impact.mod.factor.check-eval", ie,
                    "Check that all relevant measures of all associated factors are "
                    f"associated with the impact evaluation '{ie}'.",
                    suggested_ops=[{"op": "MOD", "target": ie, "field": "uses"}],
                )
            )
    elif kind == m.QUALITY_ASPECT and fname == "refinedBy":
        if el["evaluatedBy"] is not None:
            out.append(
                PendingTask(
                    "quality-aspect.mod.refined.check-eval", el["evaluatedBy"],
                    f"Assure that all aspect evaluations of sub-aspects refining "
                    f"'{_t(model, element_id)}' are considered in its aspect evaluation.",
                )
            )
    elif kind == m.QUALITY_ASPECT and fname == "influencedBy":
        if el["evaluatedBy"] is not None:
            out.append(
                PendingTask(
                    "quality-aspect.mod.influenced.check-eval", el["evaluatedBy"],
                    f"Assure that all impact evaluations of impacts influencing "
                    f"'{_t(model, element_id)}' are considered in its aspect evaluation.",
                )
            )
    elif kind == m.MEASURE and fname == "measurementRule":
        for ie in model.evaluations_using_measure(element_id):
            out.append(
                PendingTask(
                    "measure.mod.rule.check-eval", ie,
                    f"Check that the modified measure '{_t(model, element_id)}' is "
                    f"correctly used in the evaluation rule of '{ie}'.",
                )
            )
    elif kind == m.IMPACT_EVALUATION and fname == "uses":
        out.append(
            PendingTask(
                "impact-eval.mod.uses.rule-considers", element_id,
                f"Assure that the evaluation rule of the impact evaluation "
                f"'{element_id}' considers all used measures.",
            )
        )
    return out


# ---- repair templates (operational violation -> obligation) -----------------


def repair_task(model: m.QualityModel, violation) -> Optional[PendingTask]:
    """A to-do item re-establishing the obligation behind an operational
    violation, used when no table-rule task covers the violating element.
    Stub reports (V10) are covered by the stub lifecycle itself."""
    rid, target = violation.rule_id, violation.target
    if rid == "V10" or not model.exists(target):
        return None
    name = _t(model, target)
    kind = model.kind_of(target)
    if rid == "V4":
        return PendingTask("repair.V4", target,
                           f"Associate the measure '{name}' with ≥ 1 factor.")
    if rid == "V5":
        return PendingTask("repair.V5", target,
                           "Set the justification and effect of the impact.")
    if rid == "V7":
        return PendingTask("repair.V7", target,
                           f"Associate the factor '{name}' with ≥ 1 measure.")
    if rid == "V8" and kind == m.IMPACT:
        return PendingTask("repair.V8.impact", target,
                           "Associate the impact with 1 impact evaluation.")
    if rid == "V8":
        return PendingTask(
            "repair.V8.eval", target,
            f"Complete the impact evaluation '{target}': associate ≥ 1 measure "
            "and provide an evaluation rule.")
    if rid == "V9" and kind == m.QUALITY_ASPECT:
        return PendingTask("repair.V9.aspect", target,
                           f"Associate the quality aspect '{name}' with an aspect evaluation.")
    if rid == "V9":
        return PendingTask(
            "repair.V9.eval", target,
            "Assure the aspect evaluation considers all influencing impact "
            "evaluations and sub-aspect evaluations.")
    if rid == "V11":
        return PendingTask(
            "repair.V11", target,
            f"Remove the evaluation element '{name}' (the model purpose is "
            "specification) or adapt the goal.",
            suggested_ops=[{"op": "DEL", "target": target}],
        )
    return None
