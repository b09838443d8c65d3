"""qmadapt — goal-driven adaptation of software quality models.

Workflow: define an adaptation goal, rank a pool of reference models by
goal fitness, tailor the best fit with ten goal-based rules, then work down
the generated adaptation to-do list until validation is clean.  Finished
adaptations can be audited against a gold standard.
"""

from .audit import AuditResult, audit, diff_models
from .engine import (
    AdaptationTask,
    Session,
    apply_operation,
    complete_task,
    consequences_of,
    new_session,
    open_tasks,
    replay,
    waive_task,
)
from .goal import AdaptationGoal, GoalFitness, goal_fitness, parse_goal, rank_reference_models
from .model import QualityModel
from .tailoring import apply_tailoring, plan_tailoring, tailor
from .validate import Violation, validate

__version__ = "1.0.0"

__all__ = [
    "AdaptationGoal",
    "AdaptationTask",
    "AuditResult",
    "GoalFitness",
    "QualityModel",
    "Session",
    "Violation",
    "apply_operation",
    "apply_tailoring",
    "audit",
    "complete_task",
    "consequences_of",
    "diff_models",
    "goal_fitness",
    "new_session",
    "open_tasks",
    "parse_goal",
    "plan_tailoring",
    "rank_reference_models",
    "replay",
    "tailor",
    "validate",
    "waive_task",
]
