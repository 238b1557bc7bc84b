"""The volume form Ω of a candidate α = β + uψ and the contact check."""

import logging
from typing import Optional

import numpy as np

from forms.config import POSITIVITY_TOL
from forms.errors import ArityMismatch
from forms.fields import ScalarField, wrap
from forms.forms import BaseForm, ext_d, function, power, tangential_max, top_value, wedge
from forms.sweep import PositivityReport, positivity_sweep

from .config import CONSISTENCY_TOL
from .errors import ConsistencyError
from .invariant import InvariantForm, inv_d, inv_wedge

logger = logging.getLogger(__name__)


def omega_volume(beta: BaseForm, u, omega: BaseForm, n: int) -> BaseForm:
    """Ω = (dβ + uω)^(n-1) ∧ [n β∧du + u(dβ + uω)], built directly on the base."""
    u = wrap(u)
    du = ext_d(function(u, beta.dim))
    curv = ext_d(beta) + omega.times(u)
    bracket = wedge(beta, du).scaled(float(n)) + curv.times(u)
    return wedge(power(curv, n - 1), bracket)


def contact_volume(alpha: InvariantForm) -> InvariantForm:
    """α ∧ (dα)^n through the invariant calculus."""
    if alpha.degree != 1:
        raise ArityMismatch(f"Contact checks need an invariant 1-form, got degree {alpha.degree}")
    d_alpha = inv_d(alpha)
    top = alpha
    for _ in range(alpha.bundle.n):
        top = inv_wedge(top, d_alpha)
    return top


def contact_check(
    alpha: InvariantForm,
    tol: float = POSITIVITY_TOL,
    mask: Optional[np.ndarray] = None,
    label: str = "contact",
    jobs: Optional[int] = None,
) -> PositivityReport:
    """
    Sweep the ψ-component of α∧(dα)^n over the oriented base.

    The horizontal component has degree 2n + 1 and must vanish on the base;
    a nonzero value signals an inconsistent input.
    """
    top = contact_volume(alpha)
    base = alpha.bundle.base
    residual = tangential_max(top.a, base)
    if residual > CONSISTENCY_TOL:
        raise ConsistencyError(f"Horizontal part of alpha^(d alpha)^n is {residual:.3e} on {base.name}")
    report = positivity_sweep(top.b, base, tol, mask=mask, label=label, jobs=jobs)
    logger.debug(f"Contact check on {base.name}: min={report.min_value:.6g} passed={report.passed}")
    return report.model_copy(update={"details": {**report.details, "horizontal_residual": residual}})


def identity_check_lemma_volume(alpha: InvariantForm, points: Optional[np.ndarray] = None) -> float:
    """Largest gap on base frames between the engine's α∧(dα)^n and the closed formula for Ω."""
    base = alpha.bundle.base
    pts = base.sample_points() if points is None else points
    engine = contact_volume(alpha).b
    beta, u = alpha.a, alpha.b.component(())
    closed = omega_volume(beta, u, alpha.bundle.curvature, alpha.bundle.n)
    gap = np.abs(top_value(engine, base, pts) - top_value(closed, base, pts))
    return float(np.max(gap)) if gap.size else 0.0
