"""Exception hierarchy shared by the whole package."""


class QmError(Exception):
    """Base class for all domain errors."""


class InputError(QmError):
    """Malformed caller input (bad name, unknown field, bad enum value)."""


class NotFoundError(QmError):
    """An element, task, or session id does not exist."""


class KindError(QmError):
    """A reference points at an element of the wrong kind."""


class IntegrityError(QmError):
    """An operation would break referential integrity."""


class BlockedDeleteError(IntegrityError):
    """Removal refused because inbound references remain."""

    def __init__(self, element_id, referrers):
        self.element_id = element_id
        self.referrers = list(referrers)
        refs = ", ".join(f"{rid}.{field}" for rid, field in self.referrers)
        super().__init__(f"cannot remove {element_id}: referenced by {refs}")


class TaskStateError(QmError):
    """Illegal task lifecycle transition."""


class StaleReportError(QmError):
    """A tailoring report no longer matches the model it was planned for."""


class ReplayError(QmError):
    """Session log replay diverged from the recorded state."""

    def __init__(self, step, message):
        self.step = step
        super().__init__(f"replay failed at step {step}: {message}")


class LoadError(QmError):
    """A persisted file could not be loaded."""


class SchemaVersionError(LoadError):
    """The file declares an unsupported schema version."""
