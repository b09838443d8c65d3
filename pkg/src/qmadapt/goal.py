"""Structured adaptation goals and goal-fitness ranking of reference models.

A goal has five parameters: object (artifacts), purpose, viewpoint, focus,
and context.  Fitness of a candidate reference model is coverage-oriented:
it measures how much of the target goal the candidate's embedded goal
covers, so a candidate exceeding the target is not penalized (the excess is
tailored away later).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError
from .model import norm, normalize_tags
from .validate import PURPOSES

PARAMETERS = ("object", "purpose", "viewpoint", "focus", "context")

DEFAULT_WEIGHTS = {p: Fraction(1) for p in PARAMETERS}


@dataclass(frozen=True)
class AdaptationGoal:
    object: tuple[str, ...]
    purpose: str
    viewpoint: tuple[str, ...]
    focus: tuple[str, ...]
    context: dict[str, tuple[str, ...]] = field(default_factory=dict)
    weights: dict[str, Fraction] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))

    def to_json(self) -> dict:
        doc = {
            "object": list(self.object),
            "purpose": self.purpose,
            "viewpoint": list(self.viewpoint),
            "focus": list(self.focus),
            "context": {d: list(v) for d, v in self.context.items()},
        }
        if self.weights != DEFAULT_WEIGHTS:
            doc["weights"] = {p: float(w) for p, w in self.weights.items()}
        return doc


@dataclass(frozen=True)
class GoalFitness:
    total: Fraction
    per_parameter: dict[str, Fraction]

    def to_json(self) -> dict:
        return {
            "total": str(self.total),
            "totalDecimal": float(self.total),
            "perParameter": {p: str(v) for p, v in self.per_parameter.items()},
        }


def _name_set(values, param: str) -> tuple[str, ...]:
    if not isinstance(values, (list, tuple)) or not values:
        raise InputError(f"goal parameter {param!r} must be a non-empty array")
    seen = {}
    for v in values:
        if not isinstance(v, str) or not v.strip():
            raise InputError(f"goal parameter {param!r} entries must be strings")
        seen.setdefault(norm(v), v.strip())
    return tuple(sorted(seen.values(), key=norm))


def parse_goal(document: dict) -> AdaptationGoal:
    if not isinstance(document, dict):
        raise InputError("goal document must be a JSON object")
    for param in ("object", "purpose", "viewpoint", "focus", "context"):
        if param not in document:
            raise InputError(f"goal document missing parameter {param!r}")
    purpose = document["purpose"]
    if purpose not in PURPOSES:
        raise InputError(f"unknown purpose {purpose!r}; expected one of {PURPOSES}")
    context = normalize_tags(document["context"] or {})
    weights = dict(DEFAULT_WEIGHTS)
    if "weights" in document:
        raw = document["weights"]
        if not isinstance(raw, dict) or set(raw) != set(PARAMETERS):
            raise InputError("weights must map all five goal parameters to numbers")
        for p, w in raw.items():
            frac = Fraction(str(w))
            if frac < 0:
                raise InputError("weights must be non-negative")
            weights[p] = frac
        if sum(weights.values()) == 0:
            raise InputError("at least one weight must be positive")
    return AdaptationGoal(
        object=_name_set(document["object"], "object"),
        purpose=purpose,
        viewpoint=_name_set(document["viewpoint"], "viewpoint"),
        focus=_name_set(document["focus"], "focus"),
        context={d: tuple(v) for d, v in context.items()},
        weights=weights,
    )


def _coverage(ga_values, gr_values) -> Fraction:
    ga = {norm(v) for v in ga_values}
    gr = {norm(v) for v in gr_values}
    return Fraction(len(ga & gr), len(ga))


def _context_score(ga_context, gr_context) -> Fraction:
    if not ga_context:
        return Fraction(1)
    gr = {norm(d): {norm(v) for v in vs} for d, vs in gr_context.items()}
    ok = 0
    for dim, values in ga_context.items():
        constraint = gr.get(norm(dim))
        if constraint is None or constraint.intersection(norm(v) for v in values):
            ok += 1
    return Fraction(ok, len(ga_context))


def goal_fitness(ga: AdaptationGoal, gr: AdaptationGoal) -> GoalFitness:
    """Score how well a reference goal covers the target goal, per parameter
    and as a weighted mean (weights taken from the target goal)."""
    per = {
        "object": _coverage(ga.object, gr.object),
        "purpose": Fraction(1 if ga.purpose == gr.purpose else 0),
        "viewpoint": _coverage(ga.viewpoint, gr.viewpoint),
        "focus": _coverage(ga.focus, gr.focus),
        "context": _context_score(ga.context, gr.context),
    }
    weight_sum = sum(ga.weights.values())
    total = sum(ga.weights[p] * per[p] for p in PARAMETERS) / weight_sum
    return GoalFitness(total=total, per_parameter=per)


def rank_reference_models(
    ga: AdaptationGoal, pool: list[tuple[str, AdaptationGoal | None]]
) -> tuple[list[tuple[str, GoalFitness]], list[str]]:
    """Rank pool models by fitness, descending; ties break on model id.

    Entries without an embedded goal are skipped; their ids come back as
    warnings.
    """
    if not pool:
        raise InputError("reference model pool is empty")
    skipped = [mid for mid, g in pool if g is None]
    scored = [(mid, goal_fitness(ga, g)) for mid, g in pool if g is not None]
    scored.sort(key=lambda pair: (-pair[1].total, pair[0]))
    return scored, sorted(skipped)
