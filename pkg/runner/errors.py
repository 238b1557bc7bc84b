"""Errors raised while reading scenarios and running recipes."""

from typing import List

from forms.errors import GeometryError


class ExpressionSyntaxError(GeometryError):
    """An expression does not parse; ``offset`` is the byte offset of the bad token."""

    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


class ExpressionDomainError(GeometryError):
    """An expression left its domain at a sample (log or sqrt of a negative, division by zero)."""


class ScenarioError(GeometryError):
    """A scenario file violates the schema; ``pointer`` locates the offending value."""

    def __init__(self, message: str, pointer: str = ""):
        self.pointer = pointer
        super().__init__(f"{pointer or '/'}: {message}")


class UnknownGalleryEntry(GeometryError):
    def __init__(self, name: str, known: List[str]):
        self.name = name
        self.known = list(known)
        super().__init__(f"Unknown gallery entry {name!r}; choose one of: {', '.join(self.known)}")
