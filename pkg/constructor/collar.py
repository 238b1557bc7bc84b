"""
Collar normal forms near the dividing set.

A collar is a model manifold [0, 1] x Γ whose first factor is the collar
coordinate t, stored in ambient column 0. The slice {0} x Γ is the end
adjacent to the dividing set.
"""

import logging
from typing import NamedTuple, Optional

import numpy as np
from scipy.special import roots_legendre

from forms.config import POSITIVITY_TOL
from forms.fields import ZERO, ScalarField, coordinate, exp, log, wrap
from forms.forms import BaseForm, ext_d, function, power, pullback, tangential_max
from forms.manifold import FactorKind, ModelManifold
from forms.sweep import PositivityReport, positivity_sweep, worst_of
from splitting.checks import weak_filling_w2
from splitting.slices import coordinate_slice

from .config import (
    ALIGN_TOL,
    COLLAR_C_SAMPLES,
    COLLAR_T_SAMPLES,
    NORMAL_FORM_TOL,
    QUADRATURE_ORDER,
)
from .errors import PostconditionError, PreconditionError, TuningFailure
from .profiles import CollarProfile

logger = logging.getLogger(__name__)


def _check_collar(collar: ModelManifold) -> None:
    first = collar.factors[0]
    if first.kind != FactorKind.INTERVAL or collar.columns(0) != (0,):
        raise ValueError(f"Collar {collar.name} must start with its interval coordinate")


def freeze_t(a: BaseForm, t0: float, column: int = 0) -> BaseForm:
    """Pull ``a`` back along the map that sets coordinate ``column`` to ``t0``."""
    components = tuple(wrap(t0) if j == column else coordinate(j) for j in range(a.dim))
    return pullback(a, components, a.dim)


# ----------------------------------------------------------------------
# normal form of the symplectic collar
# ----------------------------------------------------------------------
class CollarNormalForm(NamedTuple):
    omega: BaseForm
    report: PositivityReport


def _w2_precondition(collar, beta, omega_gamma, gamma, n, jobs) -> PositivityReport:
    d_gamma = ext_d(gamma)
    reports = []
    for t in COLLAR_T_SAMPLES:
        data = coordinate_slice(collar, 0, t, beta, normal_sign=1.0)
        for c in COLLAR_C_SAMPLES:
            rep = weak_filling_w2(data, omega_gamma + d_gamma.scaled(c), n, jobs=jobs)
            reports.append(rep.model_copy(update={"label": f"w2 t={t:g} c={c:g}"}))
    return worst_of(reports, label="collar w2")


def collar_normalize(
    omega_plus: BaseForm,
    beta: BaseForm,
    collar: ModelManifold,
    profile: CollarProfile,
    K: float = 1.0,
    *,
    gamma: BaseForm,
    tol: float = POSITIVITY_TOL,
    jobs: Optional[int] = None,
) -> CollarNormalForm:
    """
    Replace ω₊ on the collar by ω^Γ + d(cγ) + d(b·Kβ).

    ω^Γ is the slice form ω₊ restricted to {0} x Γ and carried along t;
    ``gamma`` must satisfy ω₊ = ω^Γ + dγ on the collar.
    """
    _check_collar(collar)
    n = collar.intrinsic_dim // 2
    omega_gamma = freeze_t(omega_plus, 0.0)
    primitive_gap = tangential_max(omega_plus - omega_gamma - ext_d(gamma), collar)
    if primitive_gap > ALIGN_TOL:
        raise PreconditionError(f"gamma is not a primitive of omega+ - omega^Gamma on {collar.name}: {primitive_gap:.3e}")

    w2 = _w2_precondition(collar, beta, omega_gamma, gamma, n, jobs)
    if not w2.passed:
        raise PreconditionError(f"Collar slices fail w2: min {w2.min_value:.3e} ({w2.details.get('worst_label')}) at {w2.argmin}")

    if profile.b_prime_min <= 0:
        raise TuningFailure(f"Collar slope {profile.slope:g} leaves b' <= 0 past eps/2; choose a larger slope")

    scaled_beta = beta.scaled(K)
    omega = omega_gamma + ext_d(gamma.times(profile.c)) + ext_d(scaled_beta.times(profile.b))
    report = positivity_sweep(power(omega, n), collar, tol, label="collar omega^n", jobs=jobs)
    if not report.passed:
        raise TuningFailure(
            f"Normalized collar is not symplectic (min {report.min_value:.3e} at {report.argmin}); "
            f"b' must dominate max(1, b, |c'|), raise the slope above {profile.slope:g}"
        )

    points = collar.sample_points()
    near_end = points[points[:, 0] >= 0.9]
    b_end = float(profile.b.evaluate(np.ones((1, 1)))[0])
    s = log(profile.b) - np.log(b_end)
    normal = omega_gamma + ext_d(scaled_beta.times(exp(s) * b_end))
    residual = tangential_max(omega - normal, collar, near_end) if near_end.shape[0] else 0.0
    if residual > NORMAL_FORM_TOL:
        raise PostconditionError(f"Collar normal form residual {residual:.3e} near t=1 on {collar.name}")

    logger.info(f"Collar {collar.name} normalized with K={K:g}: min omega^n {report.min_value:.4g}")
    details = {**report.details, "K": K, "w2_min": w2.min_value, "normal_form_residual": residual}
    return CollarNormalForm(omega, report.model_copy(update={"details": details}))


# ----------------------------------------------------------------------
# gauge alignment
# ----------------------------------------------------------------------
class AlignedConnection(NamedTuple):
    gamma_slice: BaseForm
    h: ScalarField
    correction: BaseForm
    residual: float


def _t_integral(gamma_t: ScalarField, t0: float, order: int) -> ScalarField:
    """Gauss-Legendre rule for the integral of ``gamma_t`` along x0 from ``t0``, as a field."""
    nodes, weights = roots_legendre(order)
    half = (coordinate(0) - t0) * 0.5
    total: ScalarField = ZERO
    for node, weight in zip(nodes, weights):
        total = total + gamma_t.compose((half * (float(node) + 1.0) + t0,)) * float(weight)
    return half * total


def connection_align(
    gamma: BaseForm,
    chi,
    collar: ModelManifold,
    order: int = QUADRATURE_ORDER,
) -> AlignedConnection:
    """
    Split a closed γ on the collar as γ^Γ + dh, where γ^Γ is γ frozen at the
    start of the collar and h integrates the dt-component of γ from there.
    Returns γ^Γ, h, the correction d(χh) and the residual |γ - γ^Γ - dh|.
    """
    _check_collar(collar)
    closed = tangential_max(ext_d(gamma), collar)
    if closed > ALIGN_TOL:
        raise PreconditionError(f"gamma is not closed on {collar.name}: |d gamma| = {closed:.3e}")

    t0 = collar.factors[0].bounds[0]
    gamma_slice = freeze_t(gamma, t0)
    gamma_t = gamma.component((0,))
    h = ZERO if gamma_t.is_zero else _t_integral(gamma_t, t0, order)
    dh = ext_d(function(h, gamma.dim))
    correction = ext_d(function(wrap(chi) * h, gamma.dim))
    residual = tangential_max(gamma - gamma_slice - dh, collar)
    if residual > ALIGN_TOL:
        raise PostconditionError(f"Gauge alignment residual {residual:.3e} on {collar.name}")
    logger.debug(f"Aligned connection on {collar.name}: residual {residual:.3e}")
    return AlignedConnection(gamma_slice, h, correction, residual)
