"""
The neck [-1, 1] x Γ around the dividing set.

Over the neck the form is fβ + gψ_t with ψ_t = ψ_ref + γ_t, stored as the
pair (fβ + gγ_t, g) relative to ψ_ref. Near t = -1 it equals
(e^{t+1}β + γ₊, 1) and near t = 1 it equals (e^{1-t}β - γ₋, -1), which is
what the glued pieces are compared against.
"""

import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from bundle.invariant import BundleSpec, InvariantForm, contact_pair
from bundle.volume import contact_check, contact_volume
from forms.config import POSITIVITY_TOL
from forms.fields import ScalarField, coordinate, spline
from forms.forms import BaseForm, dx, ext_d, power, tangential_max, top_value, wedge
from forms.manifold import FactorKind, ModelManifold
from forms.sweep import PositivityReport

from .config import ALIGN_TOL, GAUGE_FREEZE, ORACLE_FLOOR, ORACLE_TOL, PROFILE_EXACT_TOL
from .errors import PostconditionError, PreconditionError, TuningFailure
from .profiles import ProfilePair, make_profiles, smooth_step

logger = logging.getLogger(__name__)


def gauge_step() -> ScalarField:
    """τ(t): 0 for t <= -GAUGE_FREEZE, 1 for t >= GAUGE_FREEZE."""
    return spline(smooth_step(-GAUGE_FREEZE, GAUGE_FREEZE, 0.0, 1.0), coordinate(0))


@dataclass
class NeckAssembly:
    """
    Data on the neck base [-1, 1] x Γ, t in ambient column 0.

    ``beta``, ``gamma_plus``, ``gamma_minus`` and ``omega_ref`` are
    t-independent forms on the neck ambient space. ``omega_plus`` and
    ``omega_minus``, when given, are the slice curvatures ω±^Γ; they are
    checked against ω_ref + dγ±.
    """

    base: ModelManifold
    beta: BaseForm
    gamma_plus: BaseForm
    gamma_minus: BaseForm
    omega_ref: BaseForm
    profiles: ProfilePair = field(default_factory=make_profiles)
    omega_plus: Optional[BaseForm] = None
    omega_minus: Optional[BaseForm] = None
    name: str = "neck"

    def __post_init__(self):
        first = self.base.factors[0]
        if first.kind != FactorKind.INTERVAL or self.base.columns(0) != (0,):
            raise ValueError("The neck base must start with the interval coordinate t")

    @property
    def n(self) -> int:
        return self.base.intrinsic_dim // 2

    @property
    def bundle(self) -> BundleSpec:
        return BundleSpec(self.base, self.omega_ref, name=self.name)

    @property
    def gamma_path(self) -> BaseForm:
        tau = gauge_step()
        return self.gamma_plus.times(1.0 - tau) + self.gamma_minus.times(tau)

    def validate(self) -> dict:
        """Frozen ends of γ_t and the slice curvature identities."""
        points = self.base.sample_points()
        frozen = points[np.abs(points[:, 0]) >= GAUGE_FREEZE]
        drift = 0.0
        for f in self.gamma_path.coeffs.values():
            if frozen.shape[0]:
                drift = max(drift, float(np.max(np.abs(f.partial(0).evaluate(frozen)))))
        if drift > PROFILE_EXACT_TOL:
            raise PreconditionError(f"gamma_t moves near the ends of {self.name}: {drift:.3e}")
        gaps = {}
        for label, omega, gamma in (("plus", self.omega_plus, self.gamma_plus), ("minus", self.omega_minus, self.gamma_minus)):
            if omega is None:
                continue
            gaps[label] = tangential_max(omega - self.omega_ref - ext_d(gamma), self.base)
            if gaps[label] > ALIGN_TOL:
                raise PreconditionError(f"omega_{label} differs from omega_ref + d gamma_{label} by {gaps[label]:.3e}")
        return {"end_drift": drift, "curvature_gaps": gaps}


def neck_form(na: NeckAssembly) -> InvariantForm:
    f, g = na.profiles.f, na.profiles.g
    return contact_pair(na.beta.times(f) + na.gamma_path.times(g), g, na.bundle)


def oracle_volume(na: NeckAssembly) -> BaseForm:
    """n dt∧((f'g - fg')β + g²∂_tγ_t)∧(f dβ + g dψ_t)^(n-1) with ∂_t taken coefficientwise."""
    f, g = na.profiles.f, na.profiles.g
    gamma_t = na.gamma_path
    dt_gamma = BaseForm(1, gamma_t.dim, {k: v.partial(0) for k, v in gamma_t.coeffs.items()})
    wronskian = f.partial(0) * g - f * g.partial(0)
    middle = na.beta.times(wronskian) + dt_gamma.times(g * g)
    curv = ext_d(na.beta).times(f) + (na.omega_ref + ext_d(gamma_t)).times(g)
    dt = dx(0, gamma_t.dim)
    return wedge(wedge(dt, middle), power(curv, na.n - 1)).scaled(float(na.n))


def oracle_gap(alpha: InvariantForm, na: NeckAssembly, points: Optional[np.ndarray] = None) -> float:
    """Largest relative gap between the engine's volume and the expansion formula."""
    pts = na.base.sample_points() if points is None else points
    engine = top_value(contact_volume(alpha).b, na.base, pts)
    oracle = top_value(oracle_volume(na), na.base, pts)
    scale = np.maximum(np.abs(engine), np.abs(oracle))
    keep = scale > ORACLE_FLOOR
    if not np.any(keep):
        return 0.0
    return float(np.max(np.abs(engine[keep] - oracle[keep]) / scale[keep]))


class AssembledNeck(NamedTuple):
    alpha: InvariantForm
    report: PositivityReport
    oracle_gap: float
    profiles: ProfilePair


def assemble_neck(
    na: NeckAssembly,
    tol: float = POSITIVITY_TOL,
    escalate: bool = True,
    jobs: Optional[int] = None,
) -> AssembledNeck:
    """
    Build (fβ + gγ_t, g) and sweep it. A failing sweep escalates the
    profile plateau until it passes or the escalation caps are reached.
    """
    na.validate()
    while True:
        alpha = neck_form(na)
        report = contact_check(alpha, tol, label=f"{na.name} contact", jobs=jobs)
        if report.passed:
            break
        if not escalate:
            raise TuningFailure(f"{na.name} is not contact: min {report.min_value:.3e} at {report.argmin}")
        try:
            params = na.profiles.params.escalated()
        except TuningFailure as e:
            raise TuningFailure(f"{e}; last neck min {report.min_value:.3e} at {report.argmin}") from e
        logger.info(f"{na.name} min {report.min_value:.3e}: escalating plateau to {params.plateau:g}")
        na.profiles = make_profiles(params)

    gap = oracle_gap(alpha, na)
    if gap > ORACLE_TOL:
        raise PostconditionError(f"{na.name}: engine and expansion formula differ by {gap:.3e} (relative)")
    logger.info(f"{na.name} assembled: min {report.min_value:.4g}, oracle gap {gap:.2e}")
    details = {**report.details, "oracle_gap": gap, "plateau": na.profiles.params.plateau}
    return AssembledNeck(alpha, report.model_copy(update={"details": details}), gap, na.profiles)
