"""Errors raised while constructing invariant contact forms."""

from forms.errors import GeometryError


class ProfileValidationError(GeometryError):
    """A profile pair or collar profile violates one of its defining conditions."""

    def __init__(self, condition: str, witness: float, message: str):
        self.condition = condition
        self.witness = witness
        super().__init__(f"{condition} violated at t={witness:.6g}: {message}")


class TuningFailure(GeometryError):
    """A parameter search ran out of room without a passing candidate."""


class SeamMismatchError(GeometryError):
    """Neighbouring pieces disagree on their overlap collar."""


class PreconditionError(GeometryError):
    """Input data does not satisfy the assumptions of a construction."""


class PostconditionError(GeometryError):
    """A construction finished but its output misses a property it promises."""
