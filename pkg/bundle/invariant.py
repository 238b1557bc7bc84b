"""
Circle-invariant forms on a principal circle bundle, stored downstairs.

An invariant k-form on the total space is written a + ψ∧b for a reference
connection ψ with ψ(∂θ) = 1 and dψ = ω pulled back from the base. Only the
base forms a, b and the curvature ω are ever materialized.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional

import numpy as np

from forms.errors import ArityMismatch
from forms.fields import ScalarField, wrap
from forms.forms import BaseForm, covector_matrix, ext_d, function, tangential_max, wedge, zero
from forms.manifold import ModelManifold
from forms.sweep import Cycle

from .config import CLOSEDNESS_TOL, REGULARITY_TOL
from .errors import BundleMismatchError

logger = logging.getLogger(__name__)


@dataclass
class BundleSpec:
    """Base manifold of dimension 2n, curvature 2-form and named generator cycles."""

    base: ModelManifold
    curvature: BaseForm
    generators: Dict[str, Cycle] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if self.curvature.degree != 2:
            raise BundleMismatchError(f"Curvature must be a 2-form, got degree {self.curvature.degree}")
        if self.curvature.dim != self.base.ambient_dim:
            raise BundleMismatchError(
                f"Curvature lives on R^{self.curvature.dim}, base {self.base.name} on R^{self.base.ambient_dim}"
            )
        if self.base.intrinsic_dim % 2:
            raise BundleMismatchError(f"Base {self.base.name} has odd dimension {self.base.intrinsic_dim}")

    @property
    def n(self) -> int:
        return self.base.intrinsic_dim // 2

    @property
    def dim(self) -> int:
        return self.base.ambient_dim

    def closedness_residual(self) -> float:
        return tangential_max(ext_d(self.curvature), self.base)

    def regauged(self, gamma: BaseForm) -> "BundleSpec":
        """Bundle data relative to ψ' = ψ + γ, whose curvature is ω + dγ."""
        return BundleSpec(self.base, self.curvature + ext_d(gamma), dict(self.generators), self.name)

    def validate(self) -> dict:
        """Closedness residual and the integrality of every generator pairing."""
        from .euler import pairing_table

        residual = self.closedness_residual()
        pairings = pairing_table(self)
        return {
            "closedness": residual,
            "closed": residual <= CLOSEDNESS_TOL,
            "pairings": pairings,
            "integral": all(p["integral"] for p in pairings.values()),
        }


def trivial_bundle(base: ModelManifold, generators: Optional[Dict[str, Cycle]] = None, name: str = "") -> BundleSpec:
    return BundleSpec(base, zero(2, base.ambient_dim), generators or {}, name or f"{base.name}xS1")


@dataclass
class InvariantForm:
    """The invariant form a + ψ∧b, with deg a = deg b + 1."""

    a: BaseForm
    b: BaseForm
    bundle: BundleSpec
    gauge_parent: Optional["InvariantForm"] = field(default=None, repr=False, compare=False)
    gauge_offset: Optional[BaseForm] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.a.degree != self.b.degree + 1:
            raise ArityMismatch(f"Invariant form needs deg a = deg b + 1, got {self.a.degree} and {self.b.degree}")
        if self.a.dim != self.bundle.dim or self.b.dim != self.bundle.dim:
            raise ArityMismatch("Invariant form components must live on the bundle base")

    @property
    def degree(self) -> int:
        return self.a.degree

    def __repr__(self):
        return f"InvariantForm(degree={self.degree}, bundle={self.bundle.name!r})"


def contact_pair(beta: BaseForm, u, bundle: BundleSpec) -> InvariantForm:
    """The candidate α = β + uψ."""
    return InvariantForm(beta, function(wrap(u), bundle.dim), bundle)


def _same_bundle(t1: InvariantForm, t2: InvariantForm) -> BundleSpec:
    if t1.bundle is not t2.bundle and t1.bundle.curvature is not t2.bundle.curvature:
        raise BundleMismatchError(f"Forms over {t1.bundle.name!r} and {t2.bundle.name!r} cannot be combined")
    return t1.bundle


def inv_wedge(t1: InvariantForm, t2: InvariantForm) -> InvariantForm:
    bundle = _same_bundle(t1, t2)
    a = wedge(t1.a, t2.a)
    b = wedge(t1.b, t2.a)
    cross = wedge(t1.a, t2.b)
    b = b - cross if t1.a.degree % 2 else b + cross
    return InvariantForm(a, b, bundle)


def inv_d(t: InvariantForm) -> InvariantForm:
    a = ext_d(t.a) + wedge(t.bundle.curvature, t.b)
    return InvariantForm(a, ext_d(t.b).scaled(-1.0), t.bundle)


def change_gauge(t: InvariantForm, gamma: BaseForm) -> InvariantForm:
    """
    Re-express ``t`` relative to ψ' = ψ + γ, i.e. (a - γ∧b, b) over the
    curvature ω + dγ. Undoing the previous change with an offset that
    cancels it coefficient by coefficient returns the original object.
    """
    if gamma.degree != 1:
        raise ArityMismatch(f"Gauge offsets are 1-forms, got degree {gamma.degree}")
    if t.gauge_parent is not None and t.gauge_offset is not None and (gamma + t.gauge_offset).is_zero:
        return t.gauge_parent
    bundle = t.bundle.regauged(gamma)
    out = InvariantForm(t.a - wedge(gamma, t.b), t.b, bundle)
    out.gauge_parent, out.gauge_offset = t, gamma
    logger.debug(f"Changed gauge of a degree-{t.degree} form over {t.bundle.name}")
    return out


class DecomposedAlpha(NamedTuple):
    beta: BaseForm
    u: ScalarField
    regular: bool


def decompose_alpha(alpha: InvariantForm, tol: float = REGULARITY_TOL) -> DecomposedAlpha:
    """
    The pair (β, u) of α = β + uψ, together with whether 0 is a regular
    value of u on the base grid.
    """
    if alpha.degree != 1:
        raise ArityMismatch(f"Only invariant 1-forms decompose into (beta, u), got degree {alpha.degree}")
    u = alpha.b.component(())
    m = alpha.bundle.base
    points = m.sample_points()
    frames = m.frames(points)
    values = u.evaluate(points)
    du = covector_matrix([ext_d(alpha.b)], points, frames)[:, 0, :]
    grad = np.linalg.norm(du, axis=1)
    critical = (np.abs(values) < tol) & (grad < tol)
    regular = not bool(np.any(critical))
    if not regular:
        logger.info(f"0 is not a regular value of u on {m.name}: {int(np.sum(critical))} critical zero samples")
    return DecomposedAlpha(alpha.a, u, regular)


def pair_gap(t1: InvariantForm, t2: InvariantForm, points: Optional[np.ndarray] = None) -> float:
    """Largest coefficient gap between two invariant forms at the given points."""
    pts = t1.bundle.base.sample_points() if points is None else points
    gaps: List[float] = [0.0]
    for x, y in ((t1.a, t2.a), (t1.b, t2.b)):
        diff = x - y
        for f in diff.coeffs.values():
            gaps.append(float(np.max(np.abs(f.evaluate(pts)))))
    return max(gaps)
