"""Errors raised by the invariant form calculus."""

from forms.errors import GeometryError


class BundleMismatchError(GeometryError):
    """Invariant forms over different bundles were combined."""


class ConsistencyError(GeometryError):
    """A quantity that must vanish for degree reasons did not."""


class UnknownCycleError(GeometryError):
    """A pairing was requested for a cycle the bundle does not carry."""
