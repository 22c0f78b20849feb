"""Exception and warning taxonomy for the workload pipeline.

Every error raised on a user-facing path derives from :class:`WorkloadError`
so the CLI can serialize failures uniformly.
"""

from __future__ import annotations


class WorkloadError(Exception):
    """Base class for all pipeline errors."""

    def to_json_dict(self) -> dict:
        return {"error": type(self).__name__, "message": str(self)}


class ParameterError(WorkloadError):
    """An argument value violates an operation's preconditions."""


class LabelNotFoundError(WorkloadError):
    """A requested channel or feature name is absent."""


class InsufficientDataError(WorkloadError):
    """The input is too short for the requested operation."""


class EpochBoundsError(WorkloadError):
    """One or more event windows fall outside the recording."""

    def __init__(self, message: str, offending_events: tuple = ()):
        super().__init__(message)
        self.offending_events = tuple(offending_events)


class TrainingError(WorkloadError):
    """Classifier training received unusable data."""


class ConvergenceError(WorkloadError):
    """The optimizer hit its iteration cap before converging."""

    def __init__(self, message: str, iteration_cap: int):
        super().__init__(message)
        self.iteration_cap = int(iteration_cap)


class UndefinedMetricError(WorkloadError):
    """A score is undefined for the given label composition."""


class SchemaError(WorkloadError):
    """A file does not match its documented format."""


class ConfigError(WorkloadError):
    """A configuration document is invalid."""


class DegenerateDataWarning(UserWarning):
    """Signals a defined-by-convention result on degenerate input."""


class ZeroVarianceWarning(UserWarning):
    """A zero-variance feature was excluded from a signature."""
