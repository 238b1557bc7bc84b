"""
Contactisation of ideal Liouville domains and the interpolation between two
contact forms sharing u.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from bundle.invariant import BundleSpec, InvariantForm, contact_pair
from bundle.volume import contact_check
from forms.config import POSITIVITY_TOL
from forms.fields import wrap
from forms.forms import BaseForm, covector_matrix, ext_d, power, tangential_max
from forms.sweep import PositivityReport, positivity_sweep
from splitting.checks import gamma_contact_check
from splitting.dividing import Axis, dividing_set
from splitting.slices import ContactSliceData, boundary_frames

from .config import ALIGN_TOL, INTERIOR_STANDOFF, INTERPOLATION_SAMPLES
from .errors import PreconditionError

logger = logging.getLogger(__name__)


def contactise(
    u,
    lam: BaseForm,
    bundle: BundleSpec,
    extension: Optional[BaseForm] = None,
    boundary: Optional[ContactSliceData] = None,
    eps: float = INTERIOR_STANDOFF,
    tol: float = POSITIVITY_TOL,
    jobs: Optional[int] = None,
) -> InvariantForm:
    """
    α = uλ + uψ over an ideal Liouville domain.

    ``extension`` is uλ given in closed form, so that it can be evaluated on
    the boundary {u = 0}; ``boundary`` samples that boundary.
    """
    u = wrap(u)
    base = bundle.base
    values = u.evaluate(base.sample_points())
    if np.any(values < -tol):
        raise PreconditionError(f"u takes negative values on {base.name}: min {float(np.min(values)):.3e}")

    interior = positivity_sweep(
        power(ext_d(lam) + bundle.curvature, bundle.n), base, tol, mask=values > eps, label="interior omega^n", jobs=jobs
    )
    if not interior.passed:
        raise PreconditionError(f"d lambda + omega is not symplectic inside {base.name}: min {interior.min_value:.3e} at {interior.argmin}")

    beta = extension if extension is not None else lam.times(u)
    if boundary is not None:
        edge = gamma_contact_check(beta, boundary, bundle.n, tol, jobs=jobs)
        if not edge.passed:
            raise PreconditionError(f"u lambda is not contact on the boundary {boundary.label}: min {edge.min_value:.3e}")

    alpha = contact_pair(beta, u, bundle)
    report = contact_check(alpha, tol, label="contactisation", jobs=jobs)
    if not report.passed:
        raise PreconditionError(f"Contactisation over {base.name} is not contact: min {report.min_value:.3e} at {report.argmin}")
    logger.info(f"Contactised {base.name}: min {report.min_value:.4g}")
    return alpha


def _proportional_on_gamma(beta0: BaseForm, beta1: BaseForm, u, bundle: BundleSpec, axis: Axis) -> float:
    mesh = dividing_set(u, bundle.base, axis)
    if mesh.is_empty:
        return 0.0
    frames = boundary_frames(mesh.u, bundle.base, mesh.zero_points)
    cov = covector_matrix([beta0, beta1], mesh.zero_points, frames)
    v0, v1 = cov[:, 0, :], cov[:, 1, :]
    cross = np.einsum("ni,nj->nij", v0, v1)
    skew = np.linalg.norm(cross - np.swapaxes(cross, 1, 2), axis=(1, 2))
    scale = np.linalg.norm(v0, axis=1) * np.linalg.norm(v1, axis=1)
    if np.any(np.sum(v0 * v1, axis=1) <= 0):
        return float("inf")
    return float(np.max(skew / np.maximum(scale, 1e-300)))


def interpolation_check(
    beta0: BaseForm,
    beta1: BaseForm,
    u,
    bundle: BundleSpec,
    t_samples: Sequence[float] = tuple(np.linspace(0.0, 1.0, INTERPOLATION_SAMPLES)),
    eps: float = INTERIOR_STANDOFF,
    axis: Optional[Axis] = None,
    tol: float = POSITIVITY_TOL,
    jobs: Optional[int] = None,
) -> List[PositivityReport]:
    """Contact checks along (1 - t)β₀ + tβ₁ + uψ; the endpoints must induce the same data on B± and Γ."""
    u = wrap(u)
    base = bundle.base
    points = base.sample_points()
    away = np.abs(u.evaluate(points)) > eps
    drift = tangential_max(ext_d((beta0 - beta1).times(1.0 / u)), base, points[away]) if np.any(away) else 0.0
    if drift > ALIGN_TOL:
        raise PreconditionError(f"beta0 and beta1 induce different omega+- on {base.name}: {drift:.3e}")
    if axis is not None:
        skew = _proportional_on_gamma(beta0, beta1, u, bundle, axis)
        if skew > ALIGN_TOL:
            raise PreconditionError(f"beta0 and beta1 have different kernels on the dividing set: {skew:.3e}")

    reports = []
    for t in t_samples:
        beta = beta0.scaled(1.0 - t) + beta1.scaled(t)
        reports.append(contact_check(contact_pair(beta, u, bundle), tol, label=f"interpolation t={t:.2f}", jobs=jobs))
    failed = [r.label for r in reports if not r.passed]
    if failed:
        logger.warning(f"Interpolation fails at {failed}")
    return reports
