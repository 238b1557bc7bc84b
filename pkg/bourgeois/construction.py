"""
The invariant contact form α_N - x dφ + y dθ on N x T².

The base of the circle bundle is N x S¹_c with the torus angle φ = 2πc, so
the invariant form is the pair (α_N - 2πx dc, y) over the trivial bundle.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from bundle.invariant import BundleSpec, InvariantForm, contact_pair, trivial_bundle
from bundle.volume import contact_check
from forms.config import POSITIVITY_TOL
from forms.fields import ScalarField
from forms.forms import BaseForm, dx, ext_d, function, lift, tangential_max, zero
from forms.manifold import ModelManifold, circle
from forms.sweep import PositivityReport
from splitting.checks import SymplecticPieces, gamma_contact_check, symplectic_pieces
from splitting.dividing import DividingSetMesh, dividing_set

from .config import PAGE_STANDOFF
from .cutoff import CutoffRho
from .errors import BourgeoisError
from .openbook import OpenBookSpec

logger = logging.getLogger(__name__)

PAGE_AXIS = (0, 1)


def xy_fields(ob: OpenBookSpec, rho: CutoffRho) -> Tuple[ScalarField, ScalarField]:
    """x = ρcosφ, y = ρsinφ, computed as (ρ/r)·(X, Y) so that they extend over the binding."""
    h = rho.of(ob.r) / ob.r
    return h * ob.X, h * ob.Y


def xy_identity_residual(ob: OpenBookSpec, x: ScalarField, y: ScalarField, rho: CutoffRho) -> float:
    """Largest gap of x dy - y dx = ρ² dφ on tangent vectors of N away from the binding."""
    dim = ob.N.ambient_dim
    lhs = ext_d(function(y, dim)).times(x) - ext_d(function(x, dim)).times(y)
    rho_r = rho.of(ob.r)
    rhs = ext_d(function(ob.phi, dim)).times(rho_r * rho_r)
    points = ob.N.sample_points()
    away = points[ob.r.evaluate(points) > PAGE_STANDOFF]
    return tangential_max(lhs - rhs, ob.N, away)


@dataclass
class BourgeoisData:
    base: ModelManifold
    beta: BaseForm
    u: ScalarField
    bundle: BundleSpec

    @property
    def n(self) -> int:
        return self.bundle.n


def bourgeois_data(ob: OpenBookSpec, x: ScalarField, y: ScalarField, resolution: Optional[int] = None) -> BourgeoisData:
    res = resolution or ob.N.factors[0].resolution
    base = ModelManifold(list(ob.N.factors) + [circle(res)], name=f"{ob.N.name}xS1")
    dim = base.ambient_dim
    columns = tuple(range(ob.N.ambient_dim))
    xl, yl = x.lift(columns), y.lift(columns)
    beta = lift(ob.alpha_N, dim, columns) - dx(dim - 1, dim).times(xl).scaled(2.0 * np.pi)
    return BourgeoisData(base, beta, yl, trivial_bundle(base, name=f"{base.name}xS1"))


class BourgeoisForm(NamedTuple):
    alpha: InvariantForm
    report: PositivityReport
    data: BourgeoisData


def bourgeois_form(
    ob: OpenBookSpec,
    x: ScalarField,
    y: ScalarField,
    resolution: Optional[int] = None,
    tol: float = POSITIVITY_TOL,
    jobs: Optional[int] = None,
) -> BourgeoisForm:
    data = bourgeois_data(ob, x, y, resolution)
    alpha = contact_pair(data.beta, data.u, data.bundle)
    report = contact_check(alpha, tol, label="bourgeois contact", jobs=jobs)
    if not report.passed:
        raise BourgeoisError(f"Bourgeois form on {data.base.name} is not contact: min {report.min_value:.3e} at {report.argmin}")
    logger.info(f"Bourgeois form on {data.base.name}xS1: min {report.min_value:.4g}")
    return BourgeoisForm(alpha, report, data)


class BourgeoisSplitting(NamedTuple):
    mesh: DividingSetMesh
    gamma: PositivityReport
    pieces: SymplecticPieces

    @property
    def passed(self) -> bool:
        return self.gamma.passed and self.pieces.plus.passed and self.pieces.minus.passed


def bourgeois_splitting(
    ob: OpenBookSpec,
    x: ScalarField,
    y: ScalarField,
    eps: Optional[float] = None,
    resolution: Optional[int] = None,
    jobs: Optional[int] = None,
) -> BourgeoisSplitting:
    """Dividing set {y = 0}, contactness of β₀ on it and the two halves ω± = ±d(β/y)."""
    data = bourgeois_data(ob, x, y, resolution)
    mesh = dividing_set(data.u, data.base, PAGE_AXIS)
    gamma = gamma_contact_check(data.beta, mesh, data.n, jobs=jobs)
    pieces = symplectic_pieces(data.beta, data.u, zero(2, data.base.ambient_dim), data.n, eps, base=data.base, jobs=jobs)
    split = BourgeoisSplitting(mesh, gamma, pieces)
    logger.info(
        f"Bourgeois splitting of {data.base.name}: Gamma {gamma.min_value:.4g}, "
        f"omega+ {pieces.plus.min_value:.4g}, omega- {pieces.minus.min_value:.4g}"
    )
    return split


def rotate_pages(ob: OpenBookSpec, angle: float) -> OpenBookSpec:
    """The same open book with page angle φ - angle."""
    c, s = np.cos(angle), np.sin(angle)
    X = ob.X * c + ob.Y * s
    Y = ob.Y * c - ob.X * s
    return OpenBookSpec(ob.N, ob.alpha_N, X, Y, ob.r0, name=f"{ob.name} rotated {angle:.4g}")
