"""Exception hierarchy shared by the geometry packages."""


class GeometryError(ValueError):
    """Base class for every failed geometric operation or check."""


class ConstraintViolation(GeometryError):
    """A point does not lie on the model manifold."""


class ArityMismatch(GeometryError):
    """Form degree and number of frame vectors disagree."""


class EmptyRegionError(GeometryError):
    """A sweep or piece has no samples to evaluate."""


class DegeneracyError(GeometryError):
    """A frame, level set or zero is degenerate."""


class DegenerateCycleWarning(UserWarning):
    """A cycle Jacobian vanishes at every quadrature node."""
