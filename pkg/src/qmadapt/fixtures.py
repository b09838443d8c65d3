"""Built-in demonstration models and goals.

Two fixtures anchor the test suite and the CLI demos:

* the *embedded* reference model — an evaluation model for embedded C/C++
  software covering requirements specifications and source code, with an
  embedded goal, ready to be tailored to narrower goals;
* the *walkthrough* model — a minimal consistent evaluation model used to
  demonstrate the task cascade triggered by adding a new measure.
"""

from __future__ import annotations

from .goal import AdaptationGoal, parse_goal
from .model import (
    ENTITY_TYPE,
    FACTOR,
    IMPACT,
    IMPACT_EVALUATION,
    MEASURE,
    PROPERTY,
    QUALITY_ASPECT,
    QUALITY_ASPECT_EVALUATION,
    QualityModel,
)

EMBEDDED_GOAL = {
    "object": ["Requirements specification", "Source code"],
    "purpose": "evaluation",
    "viewpoint": ["Developer", "User"],
    "focus": ["Maintainability", "Reliability", "Safety"],
    "context": {
        "Domain": ["Embedded"],
        "Paradigm": ["OO"],
        "Language": ["C", "C++"],
    },
}

TARGET_GOAL = {
    "object": ["Source code"],
    "purpose": "evaluation",
    "viewpoint": ["User"],
    "focus": ["Reliability", "Safety", "Usability"],
    "context": {"Domain": ["Embedded"], "Language": ["Assembler"]},
}


def embedded_reference_model() -> QualityModel:
    """Reference model for evaluating embedded C/C++ software quality."""
    qm = QualityModel("embedded-cpp", "1")
    qm.goal = parse_goal(EMBEDDED_GOAL).to_json()
    qm.provenance = "built-in demonstration model"

    qm.insert(QUALITY_ASPECT, {
        "id": "qa_quality", "name": "Quality",
        "description": "Overall product quality.",
        "viewpoints": ["Developer", "User"],
    })
    qm.insert(QUALITY_ASPECT, {
        "id": "qa_maint", "name": "Maintainability",
        "description": "Ease of analysis and change.",
        "parent": "qa_quality", "viewpoints": ["Developer"],
    })
    qm.insert(QUALITY_ASPECT, {
        "id": "qa_analyz", "name": "Analyzability",
        "description": "Ease of diagnosing deficiencies.",
        "parent": "qa_maint",
    })
    qm.insert(QUALITY_ASPECT, {
        "id": "qa_rel", "name": "Reliability",
        "description": "Ability to keep a specified performance level.",
        "parent": "qa_quality", "viewpoints": ["User"],
    })
    qm.insert(QUALITY_ASPECT, {
        "id": "qa_safe", "name": "Safety",
        "description": "Freedom from unacceptable risk of harm.",
        "parent": "qa_quality", "viewpoints": ["User"],
    })

    qm.insert(ENTITY_TYPE, {
        "id": "et_src", "name": "Source code",
        "description": "The implementation artifacts.",
    })
    qm.insert(ENTITY_TYPE, {
        "id": "et_class", "name": "Classes",
        "description": "Class definitions.", "parent": "et_src",
    })
    qm.insert(ENTITY_TYPE, {
        "id": "et_func", "name": "Functions",
        "description": "Free functions and methods.", "parent": "et_src",
    })
    qm.insert(ENTITY_TYPE, {
        "id": "et_req", "name": "Requirements specification",
        "description": "The requirements documents.",
    })
    qm.insert(ENTITY_TYPE, {
        "id": "et_uc", "name": "Use cases",
        "description": "Use case descriptions.", "parent": "et_req",
    })

    qm.insert(PROPERTY, {
        "id": "pr_doc", "name": "Documentation",
        "description": "Presence and quality of explanatory text.",
    })
    qm.insert(PROPERTY, {
        "id": "pr_compl", "name": "Completeness",
        "description": "Coverage of the intended content.",
    })

    qm.insert(FACTOR, {
        "id": "fa_doc_class", "name": "Documentation of classes",
        "description": "Classes carry explanatory documentation.",
        "entityType": "et_class", "property": "pr_doc",
        "tags": {"Paradigm": ["OO"]},
    })
    qm.insert(FACTOR, {
        "id": "fa_doc_src", "name": "Documentation of source code",
        "description": "Source code carries explanatory documentation.",
        "entityType": "et_src", "property": "pr_doc",
    })
    qm.insert(FACTOR, {
        "id": "fa_compl_uc", "name": "Completeness of use cases",
        "description": "Use cases cover the intended behavior.",
        "entityType": "et_uc", "property": "pr_compl",
    })

    qm.insert(IMPACT, {
        "id": "im_dc_maint", "factor": "fa_doc_class",
        "qualityAspect": "qa_maint", "effect": "positive",
        "justification": "Documented classes are easier to analyze and change.",
    })
    qm.insert(IMPACT, {
        "id": "im_ds_maint", "factor": "fa_doc_src",
        "qualityAspect": "qa_maint", "effect": "positive",
        "justification": "Documented code is easier to analyze and change.",
    })
    qm.insert(IMPACT, {
        "id": "im_ds_rel", "factor": "fa_doc_src",
        "qualityAspect": "qa_rel", "effect": "positive",
        "justification": "Documentation reduces misuse that causes failures.",
    })
    qm.insert(IMPACT, {
        "id": "im_uc_safe", "factor": "fa_compl_uc",
        "qualityAspect": "qa_safe", "effect": "positive",
        "justification": "Complete use cases expose hazardous scenarios early.",
    })

    qm.insert(MEASURE, {
        "id": "me_dit", "name": "Depth of inheritance tree",
        "measurementRule": "Maximum DIT over all classes.",
        "scale": "ratio", "quantifies": ["fa_doc_class"],
        "tags": {"Language": ["C", "C++"]},
    })
    qm.insert(MEASURE, {
        "id": "me_cloc", "name": "Comment line ratio",
        "measurementRule": "Comment lines divided by total lines.",
        "scale": "ratio", "quantifies": ["fa_doc_src"],
    })
    qm.insert(MEASURE, {
        "id": "me_ucrev", "name": "Use case review coverage",
        "measurementRule": "Reviewed use cases divided by all use cases.",
        "scale": "ratio", "quantifies": ["fa_compl_uc"],
    })

    qm.insert(IMPACT_EVALUATION, {
        "id": "ie_dc_maint", "impact": "im_dc_maint", "uses": ["me_dit"],
        "evaluationRule": "Map DIT thresholds to school grades.",
        "evaluationScale": "grades 1-6",
    })
    qm.insert(IMPACT_EVALUATION, {
        "id": "ie_ds_maint", "impact": "im_ds_maint", "uses": ["me_cloc"],
        "evaluationRule": "Map comment ratio bands to school grades.",
        "evaluationScale": "grades 1-6",
    })
    qm.insert(IMPACT_EVALUATION, {
        "id": "ie_ds_rel", "impact": "im_ds_rel", "uses": ["me_cloc"],
        "evaluationRule": "Penalize ratios below 0.1.",
        "evaluationScale": "grades 1-6",
    })
    qm.insert(IMPACT_EVALUATION, {
        "id": "ie_uc_safe", "impact": "im_uc_safe", "uses": ["me_ucrev"],
        "evaluationRule": "Require full review coverage for grade 1.",
        "evaluationScale": "grades 1-6",
    })

    qm.insert(QUALITY_ASPECT_EVALUATION, {
        "id": "qe_analyz", "qualityAspect": "qa_analyz",
        "aggregationRule": "No direct impacts; informative only.",
        "considers": [],
    })
    qm.insert(QUALITY_ASPECT_EVALUATION, {
        "id": "qe_maint", "qualityAspect": "qa_maint",
        "aggregationRule": "Weighted mean of impact and sub-aspect grades.",
        "considers": ["ie_dc_maint", "ie_ds_maint", "qe_analyz"],
    })
    qm.insert(QUALITY_ASPECT_EVALUATION, {
        "id": "qe_rel", "qualityAspect": "qa_rel",
        "aggregationRule": "Worst grade of the considered evaluations.",
        "considers": ["ie_ds_rel"],
    })
    qm.insert(QUALITY_ASPECT_EVALUATION, {
        "id": "qe_safe", "qualityAspect": "qa_safe",
        "aggregationRule": "Worst grade of the considered evaluations.",
        "considers": ["ie_uc_safe"],
    })
    qm.insert(QUALITY_ASPECT_EVALUATION, {
        "id": "qe_quality", "qualityAspect": "qa_quality",
        "aggregationRule": "Mean of the sub-aspect grades.",
        "considers": ["qe_maint", "qe_rel", "qe_safe"],
    })
    return qm


def walkthrough_model() -> QualityModel:
    """Minimal consistent evaluation model: one factor impacting two
    aspects, both impacts evaluated.  Used to demonstrate the task cascade
    of adding a measure."""
    qm = QualityModel("walkthrough", "1")
    qm.provenance = "built-in demonstration model"

    qm.insert(QUALITY_ASPECT, {
        "id": "qa1", "name": "Reliability",
        "description": "Ability to keep a specified performance level.",
    })
    qm.insert(QUALITY_ASPECT, {
        "id": "qa2", "name": "Safety",
        "description": "Freedom from unacceptable risk of harm.",
    })
    qm.insert(ENTITY_TYPE, {
        "id": "et1", "name": "Source code",
        "description": "The implementation artifacts.",
    })
    qm.insert(PROPERTY, {
        "id": "pr1", "name": "Documentation",
        "description": "Presence and quality of explanatory text.",
    })
    qm.insert(FACTOR, {
        "id": "f1", "name": "Documentation of source code",
        "description": "Source code carries explanatory documentation.",
        "entityType": "et1", "property": "pr1",
    })
    qm.insert(IMPACT, {
        "id": "i1", "factor": "f1", "qualityAspect": "qa1",
        "effect": "positive",
        "justification": "Documentation reduces misuse that causes failures.",
    })
    qm.insert(IMPACT, {
        "id": "i2", "factor": "f1", "qualityAspect": "qa2",
        "effect": "positive",
        "justification": "Documentation exposes hazardous usage early.",
    })
    qm.insert(MEASURE, {
        "id": "m0", "name": "Comment line ratio",
        "measurementRule": "Comment lines divided by total lines.",
        "scale": "ratio", "quantifies": ["f1"],
    })
    qm.insert(IMPACT_EVALUATION, {
        "id": "ie1", "impact": "i1", "uses": ["m0"],
        "evaluationRule": "Map comment ratio bands to school grades.",
        "evaluationScale": "grades 1-6",
    })
    qm.insert(IMPACT_EVALUATION, {
        "id": "ie2", "impact": "i2", "uses": ["m0"],
        "evaluationRule": "Penalize ratios below 0.1.",
        "evaluationScale": "grades 1-6",
    })
    qm.insert(QUALITY_ASPECT_EVALUATION, {
        "id": "qe1", "qualityAspect": "qa1",
        "aggregationRule": "Worst grade of the considered evaluations.",
        "considers": ["ie1"],
    })
    qm.insert(QUALITY_ASPECT_EVALUATION, {
        "id": "qe2", "qualityAspect": "qa2",
        "aggregationRule": "Worst grade of the considered evaluations.",
        "considers": ["ie2"],
    })
    return qm


def embedded_goal() -> AdaptationGoal:
    return parse_goal(EMBEDDED_GOAL)


def target_goal() -> AdaptationGoal:
    return parse_goal(TARGET_GOAL)
