"""Exception hierarchy shared across the package."""


class LogicGenError(Exception):
    """Base class for all package errors."""


class RegistrationError(LogicGenError):
    """Duplicate or otherwise invalid task registration."""


class UnknownTaskError(LogicGenError):
    """Task id not present in the registry."""


class ParamError(LogicGenError):
    """Difficulty parameters missing, unknown, or out of range."""


class PayloadError(LogicGenError):
    """Structurally invalid puzzle payload (distinct from a false verdict)."""


class GenerationExhausted(LogicGenError):
    """Rejection-sampling generator ran out of retries.

    Carries the number of attempts made so callers can report it.
    """

    def __init__(self, message: str, attempts: int):
        super().__init__(f"{message} (after {attempts} attempts)")
        self.attempts = attempts


class SearchBudgetExceeded(LogicGenError):
    """Solution-counting search exceeded its node budget."""


class ContaminationError(LogicGenError):
    """Generated prompt matches a benchmark prompt and the build is set to fail."""


class CalibrationTransportError(LogicGenError):
    """Endpoint unreachable after retries; carries partial results."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
