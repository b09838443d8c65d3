"""Consistency rule set.  Empty result means the model is fit for the purpose.

Rules V1/V2/V3/V6 guard meta-model conformance (structural severity); the
primitives are designed so they cannot be broken through normal use.  The
remaining rules are operational: they flag work still to be done before the
model can serve the stated purpose, and each maps onto an adaptation-task
obligation in the task engine.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import model as m

SPECIFICATION = "specification"
EVALUATION = "evaluation"
PURPOSES = (SPECIFICATION, EVALUATION)

STRUCTURAL = "structural"
OPERATIONAL = "operational"


@dataclass(frozen=True)
class Violation:
    rule_id: str
    target: str
    severity: str
    message: str

    def to_json(self) -> dict:
        return {
            "rule": self.rule_id,
            "target": self.target,
            "severity": self.severity,
            "message": self.message,
        }


def _sort_key(v: Violation):
    return (int(v.rule_id[1:]), v.target, v.message)


def validate(model: m.QualityModel, purpose: str) -> list[Violation]:
    if purpose not in PURPOSES:
        raise m.InputError(f"purpose must be one of {PURPOSES}")
    out: list[Violation] = []
    out += _v1_dangling(model)
    out += _v2_acyclic(model)
    out += _v3_factor_cardinality(model)
    out += _v4_measure_quantifies(model)
    out += _v5_impact_justification(model)
    out += _v6_symmetry(model)
    if purpose == EVALUATION:
        out += _v7_factor_measured(model)
        out += _v8_impact_evaluated(model)
        out += _v9_aspect_evaluated(model)
    out += _v10_stubs(model)
    if purpose == SPECIFICATION:
        out += _v11_no_evaluation_part(model)
    return sorted(out, key=_sort_key)


def structural_violations(model: m.QualityModel) -> list[Violation]:
    return [v for v in validate(model, SPECIFICATION) if v.severity == STRUCTURAL]


def _v1_dangling(model):
    out = []
    for kind, coll in model.elements.items():
        for fname, spec in m.SCHEMA[kind].items():
            if spec.ftype not in ("ref", "refset", "reflist"):
                continue
            for eid, el in coll.items():
                values = [el[fname]] if spec.ftype == "ref" else el[fname]
                for v in values:
                    if v is None:
                        continue
                    if not model.exists(v):
                        out.append(
                            Violation(
                                "V1", eid, STRUCTURAL,
                                f"{kind}.{fname} references missing element {v!r}",
                            )
                        )
                    elif model.kind_of(v) not in spec.ref_kinds:
                        out.append(
                            Violation(
                                "V1", eid, STRUCTURAL,
                                f"{kind}.{fname} references {v!r} of wrong kind",
                            )
                        )
    return out


def _v2_acyclic(model):
    out = []
    for kind in (m.QUALITY_ASPECT, m.ENTITY_TYPE):
        coll = model.elements[kind]
        for eid in coll:
            seen = set()
            cur = eid
            while cur is not None and cur in coll:
                if cur in seen:
                    out.append(
                        Violation("V2", eid, STRUCTURAL, f"parent cycle through {cur}")
                    )
                    break
                seen.add(cur)
                cur = coll[cur]["parent"]
    return out


def _v3_factor_cardinality(model):
    out = []
    for eid, el in model.elements[m.FACTOR].items():
        if el["stub"]:
            continue
        for fname in ("entityType", "property"):
            if el[fname] is None:
                out.append(
                    Violation("V3", eid, STRUCTURAL, f"factor lacks {fname}")
                )
    return out


def _v4_measure_quantifies(model):
    return [
        Violation("V4", eid, OPERATIONAL, "measure quantifies no factor")
        for eid, el in model.elements[m.MEASURE].items()
        if not el["stub"] and not el["quantifies"]
    ]


def _v5_impact_justification(model):
    return [
        Violation("V5", eid, OPERATIONAL, "impact has no justification")
        for eid, el in model.elements[m.IMPACT].items()
        if not el["justification"].strip()
    ]


def _v6_symmetry(model):
    out = []

    def bad(eid, msg):
        out.append(Violation("V6", eid, STRUCTURAL, msg))

    qa = model.elements[m.QUALITY_ASPECT]
    for eid, el in qa.items():
        if el["parent"] is not None and el["parent"] in qa:
            if eid not in qa[el["parent"]]["refinedBy"]:
                bad(eid, "parent does not list aspect in refinedBy")
        for child in el["refinedBy"]:
            if child in qa and qa[child]["parent"] != eid:
                bad(eid, f"refinedBy child {child} has different parent")
        for imp in el["influencedBy"]:
            impacts = model.elements[m.IMPACT]
            if imp in impacts and impacts[imp]["qualityAspect"] != eid:
                bad(eid, f"influencedBy impact {imp} targets another aspect")
        if el["evaluatedBy"] is not None:
            qaes = model.elements[m.QUALITY_ASPECT_EVALUATION]
            if el["evaluatedBy"] in qaes and qaes[el["evaluatedBy"]]["qualityAspect"] != eid:
                bad(eid, "evaluatedBy evaluation has another subject")

    et = model.elements[m.ENTITY_TYPE]
    for eid, el in et.items():
        if el["parent"] is not None and el["parent"] in et:
            if eid not in et[el["parent"]]["children"]:
                bad(eid, "parent does not list entity type in children")
        for child in el["children"]:
            if child in et and et[child]["parent"] != eid:
                bad(eid, f"child {child} has different parent")

    impacts = model.elements[m.IMPACT]
    for eid, el in impacts.items():
        if el["qualityAspect"] in qa and eid not in qa[el["qualityAspect"]]["influencedBy"]:
            bad(eid, "target aspect does not list impact in influencedBy")
        reqs = model.elements[m.QUALITY_REQUIREMENT]
        if el["requirement"] is not None and el["requirement"] in reqs:
            if eid not in reqs[el["requirement"]]["groupedImpacts"]:
                bad(eid, "requirement does not group this impact")
        ies = model.elements[m.IMPACT_EVALUATION]
        if el["evaluatedBy"] is not None and el["evaluatedBy"] in ies:
            if ies[el["evaluatedBy"]]["impact"] != eid:
                bad(eid, "evaluatedBy evaluation has another subject")

    measures = model.elements[m.MEASURE]
    factors = model.elements[m.FACTOR]
    for eid, el in measures.items():
        for fid in el["quantifies"]:
            if fid in factors and eid not in factors[fid]["isQuantified"]:
                bad(eid, f"factor {fid} does not list measure in isQuantified")
    for eid, el in factors.items():
        for mid in el["isQuantified"]:
            if mid in measures and eid not in measures[mid]["quantifies"]:
                bad(eid, f"measure {mid} does not quantify this factor")
    return out


def _v7_factor_measured(model):
    return [
        Violation("V7", eid, OPERATIONAL, "factor has no measure")
        for eid, el in model.elements[m.FACTOR].items()
        if not el["stub"] and not el["isQuantified"]
    ]


def _v8_impact_evaluated(model):
    out = []
    ies = model.elements[m.IMPACT_EVALUATION]
    for eid, el in model.elements[m.IMPACT].items():
        ie = el["evaluatedBy"]
        if ie is None or ie not in ies:
            out.append(
                Violation("V8", eid, OPERATIONAL, "impact has no impact evaluation")
            )
            continue
        if not ies[ie]["uses"]:
            out.append(
                Violation("V8", ie, OPERATIONAL, "impact evaluation uses no measure")
            )
        if not ies[ie]["evaluationRule"].strip():
            out.append(
                Violation("V8", ie, OPERATIONAL, "impact evaluation has no rule")
            )
    return out


def required_considers(model, aspect_id: str) -> list[str]:
    """Evaluations a quality-aspect evaluation must consider: the impact
    evaluations of influencing impacts plus the sub-aspect evaluations."""
    el = model.elements[m.QUALITY_ASPECT][aspect_id]
    impacts = model.elements[m.IMPACT]
    qa = model.elements[m.QUALITY_ASPECT]
    needed = []
    for imp in el["influencedBy"]:
        if imp in impacts and impacts[imp]["evaluatedBy"] is not None:
            needed.append(impacts[imp]["evaluatedBy"])
    for child in el["refinedBy"]:
        if child in qa and qa[child]["evaluatedBy"] is not None:
            needed.append(qa[child]["evaluatedBy"])
    return sorted(set(needed))


def _v9_aspect_evaluated(model):
    out = []
    qaes = model.elements[m.QUALITY_ASPECT_EVALUATION]
    for eid, el in model.elements[m.QUALITY_ASPECT].items():
        if el["stub"]:
            continue
        qae = el["evaluatedBy"]
        if qae is None or qae not in qaes:
            out.append(
                Violation("V9", eid, OPERATIONAL, "aspect has no evaluation")
            )
            continue
        missing = [
            x for x in required_considers(model, eid) if x not in qaes[qae]["considers"]
        ]
        if missing:
            out.append(
                Violation(
                    "V9", qae, OPERATIONAL,
                    f"evaluation does not consider {', '.join(missing)}",
                )
            )
    return out


def _v10_stubs(model):
    out = []
    for kind in m.STUB_KINDS:
        for eid, el in model.elements[kind].items():
            if el["stub"]:
                out.append(
                    Violation("V10", eid, OPERATIONAL, f"stub {kind[:-1]} to resolve")
                )
    return out


def _v11_no_evaluation_part(model):
    out = []
    for kind in m.EVALUATION_KINDS:
        for eid in model.elements[kind]:
            out.append(
                Violation(
                    "V11", eid, OPERATIONAL,
                    f"{kind} element present in a specification-purpose model",
                )
            )
    return out
