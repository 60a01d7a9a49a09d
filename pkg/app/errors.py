from __future__ import annotations

from typing import Any, Optional, Sequence


class FpsError(Exception):
    """Base class for every error raised by the pipeline."""


class InvalidElementError(FpsError):
    pass


class GroupAxiomError(FpsError):
    def __init__(self, message: str, witness: Sequence[int] = ()):
        super().__init__(message)
        self.witness = tuple(int(x) for x in witness)


class GroupSizeError(FpsError):
    pass


class NormalityError(FpsError):
    pass


class SpecError(FpsError):
    pass


class ConditionViolation(FpsError):
    """A numbered condition (1-5) does not hold for the requested modulus."""

    def __init__(self, condition: int, message: str, witness: Sequence[int] = (), report: Any = None):
        super().__init__(f"Condition {condition} violated: {message}")
        self.condition = condition
        self.witness = tuple(int(x) for x in witness)
        self.report = report


class DegeneracyError(FpsError):
    pass


class NotApplicableError(FpsError):
    pass


class InconsistencyError(FpsError):
    pass


class DocumentError(FpsError):
    def __init__(self, message: str, position: Optional[str] = None):
        super().__init__(f"{message} (at {position})" if position else message)
        self.position = position


class ExportError(FpsError):
    pass
