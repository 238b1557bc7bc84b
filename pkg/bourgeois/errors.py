"""Errors raised by the Bourgeois construction."""

from forms.errors import GeometryError


class BourgeoisError(GeometryError):
    """The construction on N x T² failed one of its checks."""


class CutoffValidationError(BourgeoisError):
    """The cutoff ρ violates one of its defining conditions."""

    def __init__(self, condition: str, witness: float, message: str):
        self.condition = condition
        self.witness = witness
        super().__init__(f"{condition} violated at r={witness:.6g}: {message}")


class OpenBookError(BourgeoisError):
    """The open book does not support the contact form on N."""
