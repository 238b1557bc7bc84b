"""
Checks on the pieces of a split base: contactness of β on Γ_s, the
symplectic forms ω± on B±, and the weak filling conditions along Γ.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Union

import numpy as np

from bundle.errors import ConsistencyError
from bundle.volume import omega_volume
from forms.config import POSITIVITY_TOL
from forms.errors import DegeneracyError, EmptyRegionError, GeometryError
from forms.fields import wrap
from forms.forms import BaseForm, covector_matrix, ext_d, function, power, tangential_max, top_value, wedge
from forms.manifold import ModelManifold, kernel_frame
from forms.sweep import PositivityReport, positivity_sweep, sweep_frames, worst_of

from .config import CLOSEDNESS_TOL, EPS_FRACTION, EPS_LADDER, VOLUME_RESIDUAL_TOL, W2_B_SAMPLES
from .dividing import Axis, DividingSetMesh
from .errors import NotSymplecticError, SplitParameterError
from .slices import ContactSliceData, level_slice, mesh_slice

logger = logging.getLogger(__name__)


def _as_slice(data: Union[DividingSetMesh, ContactSliceData], beta: Optional[BaseForm] = None) -> ContactSliceData:
    if isinstance(data, DividingSetMesh):
        return mesh_slice(data, beta)
    return data.with_beta(beta) if beta is not None else data


def gamma_contact_check(
    beta: BaseForm,
    data: Union[DividingSetMesh, ContactSliceData],
    n: int,
    tol: float = POSITIVITY_TOL,
    jobs: Optional[int] = None,
) -> PositivityReport:
    """
    Sweep β∧(dβ)^(n-1) over positive frames of Γ. When the defining function
    is known, the equivalent criterion -du∧β∧(dβ)^(n-1) on base frames is
    recorded alongside.
    """
    data = _as_slice(data, beta)
    if data.size == 0:
        raise EmptyRegionError(f"No samples on {data.label}")
    form = wedge(beta, power(ext_d(beta), n - 1))
    report = sweep_frames(form, data.points, data.frames, data.resolution, tol, label=f"gamma contact {data.label}", jobs=jobs)
    details = {"s": data.s}
    if data.u is not None:
        du = ext_d(function(data.u, beta.dim))
        criterion = wedge(du.scaled(-1.0), form)
        details["criterion_min"] = float(np.min(top_value(criterion, data.manifold, data.points)))
    return report.model_copy(update={"details": {**report.details, **details}})


class SymplecticPieces(NamedTuple):
    plus: PositivityReport
    minus: PositivityReport


def default_eps(u, base: ModelManifold) -> float:
    return EPS_FRACTION * float(np.max(np.abs(wrap(u).evaluate(base.sample_points()))))


def symplectic_pieces(
    beta: BaseForm,
    u,
    omega: BaseForm,
    n: int,
    eps: Optional[float] = None,
    *,
    base: ModelManifold,
    tol: float = POSITIVITY_TOL,
    jobs: Optional[int] = None,
) -> SymplecticPieces:
    """
    Sweep ω± = ±(d(β/u) + ω) to the n-th power on {±u >= eps}; B₋ carries
    the reversed orientation.
    """
    u = wrap(u)
    eps = default_eps(u, base) if eps is None else float(eps)
    if eps <= 0:
        raise SplitParameterError("eps must be positive")
    points = base.sample_points()
    values = u.evaluate(points)
    omega_plus = ext_d(beta.times(1.0 / u)) + omega
    top = power(omega_plus, n)

    plus_mask, minus_mask = values >= eps, values <= -eps
    plus = positivity_sweep(top, base, tol, mask=plus_mask, label="omega+", jobs=jobs)
    minus = positivity_sweep(power(omega_plus.scaled(-1.0), n), base.reversed(), tol, mask=minus_mask, label="omega-", jobs=jobs)

    either = plus_mask | minus_mask
    closed = tangential_max(ext_d(omega_plus), base, points[either])
    pts = points[either]
    big_omega = top_value(omega_volume(beta, u, omega, n), base, pts)
    rescaled = values[either] ** (n + 1) * top_value(top, base, pts)
    residual = float(np.max(np.abs(big_omega - rescaled) / (1.0 + np.abs(big_omega))))
    if closed > CLOSEDNESS_TOL:
        raise NotSymplecticError(f"omega+- is not closed on {base.name}: |d omega+| = {closed:.3e}")
    if residual > VOLUME_RESIDUAL_TOL:
        raise ConsistencyError(f"Omega and u^(n+1) omega+^n differ by {residual:.3e} on {base.name}")

    extra = {"eps": eps, "closedness": closed, "volume_residual": residual}
    return SymplecticPieces(
        plus.model_copy(update={"details": {**plus.details, **extra}}),
        minus.model_copy(update={"details": {**minus.details, **extra}}),
    )


def eps_scan(beta, u, omega, n, base: ModelManifold, ladder: Sequence[float] = EPS_LADDER) -> Dict[float, bool]:
    """Whether both pieces pass at each standoff of the ladder."""
    out = {}
    for eps in ladder:
        try:
            pieces = symplectic_pieces(beta, u, omega, n, eps, base=base)
            out[eps] = pieces.plus.passed and pieces.minus.passed
        except (EmptyRegionError, NotSymplecticError):
            out[eps] = False
    return out


def largest_passing_eps(beta, u, omega, n, base: ModelManifold, ladder: Sequence[float] = EPS_LADDER) -> Optional[float]:
    passing = [eps for eps, ok in eps_scan(beta, u, omega, n, base, ladder).items() if ok]
    return max(passing) if passing else None


# ----------------------------------------------------------------------
# weak fillings
# ----------------------------------------------------------------------
def contact_hyperplane_frames(data: ContactSliceData) -> np.ndarray:
    """Oriented frames of η = ker β₀ ∩ TΓ at every slice sample."""
    if data.beta is None:
        raise SplitParameterError(f"Slice {data.label} carries no contact form")
    cov = covector_matrix([data.beta], data.points, data.frames)
    size = np.linalg.norm(cov[:, 0, :], axis=1)
    if size.size and float(np.min(size)) < 1e-10:
        worst = data.points[int(np.argmin(size))]
        raise DegeneracyError(f"beta0 vanishes on the slice at {worst.tolist()}")
    return kernel_frame(data.frames, cov, sign=1.0)


def weak_filling_w1(
    data: ContactSliceData, omega: BaseForm, n: int, tol: float = POSITIVITY_TOL, jobs: Optional[int] = None
) -> PositivityReport:
    """(dβ₀)^k ∧ ω^(n-1-k) > 0 on η for every k = 0..n-1; reports the worst k."""
    eta = contact_hyperplane_frames(data)
    d_beta = ext_d(data.beta)
    reports = []
    for k in range(n):
        form = wedge(power(d_beta, k), power(omega, n - 1 - k))
        rep = sweep_frames(form, data.points, eta, data.resolution, tol, label=f"w1 k={k}", jobs=jobs)
        reports.append(rep.model_copy(update={"details": {**rep.details, "k": k}}))
    worst = worst_of(reports, label="w1")
    return worst.model_copy(update={"details": {**worst.details, "per_k": [r.min_value for r in reports]}})


def weak_filling_w2(
    data: ContactSliceData,
    omega: BaseForm,
    n: int,
    b_samples: Sequence[float] = W2_B_SAMPLES,
    tol: float = POSITIVITY_TOL,
    jobs: Optional[int] = None,
) -> PositivityReport:
    """(b dβ₀ + ω)^(n-1) > 0 on η for every sampled constant b >= 0."""
    if any(b < 0 for b in b_samples):
        raise SplitParameterError("w2 samples must be non-negative")
    eta = contact_hyperplane_frames(data)
    d_beta = ext_d(data.beta)
    reports = []
    for b in b_samples:
        form = power(d_beta.scaled(b) + omega, n - 1)
        rep = sweep_frames(form, data.points, eta, data.resolution, tol, label=f"w2 b={b:g}", jobs=jobs)
        reports.append(rep.model_copy(update={"details": {**rep.details, "b": b}}))
    worst = worst_of(reports, label="w2")
    return worst.model_copy(update={"details": {**worst.details, "per_b": {str(b): r.min_value for b, r in zip(b_samples, reports)}}})


# ----------------------------------------------------------------------
# slice families
# ----------------------------------------------------------------------
@dataclass
class SliceOutcome:
    s: float
    report: Optional[PositivityReport] = None
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.report is not None and self.report.passed


def slice_contact_family(
    beta: BaseForm, u, s_values: Sequence[float], n: int, *, base: ModelManifold, axis: Axis
) -> List[SliceOutcome]:
    """gamma_contact_check on each level Γ_s; a failing level does not stop the others."""
    outcomes = []
    for s in s_values:
        try:
            data = level_slice(u, base, axis, s, beta)
            outcomes.append(SliceOutcome(s, report=gamma_contact_check(beta, data, n)))
        except GeometryError as e:
            logger.info(f"Slice u={s:g} on {base.name} failed: {e}")
            outcomes.append(SliceOutcome(s, error=str(e)))
    return outcomes
