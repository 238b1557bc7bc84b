"""Errors raised while splitting a base along its dividing set."""

from forms.errors import DegeneracyError, GeometryError


class IrregularLevelError(DegeneracyError):
    """A level set of u is not cut out transversally along the chosen axis."""


class SplitParameterError(GeometryError):
    """An axis, slice or width argument does not fit the manifold being split."""


class NotSymplecticError(GeometryError):
    """A piece form meant to be symplectic is not closed or not positive."""
