"""Gluing B₊, the neck and B₋ into one invariant contact form."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from bundle.invariant import BundleSpec, InvariantForm, change_gauge
from bundle.volume import contact_check
from forms.config import POSITIVITY_TOL
from forms.fields import ScalarField, wrap
from forms.forms import BaseForm, pullback
from forms.manifold import ModelManifold, interval
from forms.sweep import PositivityReport, worst_of
from splitting.dividing import DividingSetMesh, dividing_set

from .config import COLLAR_MARGIN, SEAM_TOL
from .errors import PostconditionError, SeamMismatchError
from .neck import AssembledNeck

logger = logging.getLogger(__name__)


@dataclass
class Piece:
    """
    One side of the splitting together with the data needed to glue it.

    ``chart`` maps the neck ambient space into the piece's ambient space on
    the overlap; ``gauge_offset`` is γ with ψ_piece = ψ_ref + γ there.
    ``side`` is -1 for the piece meeting t = -1 and +1 for t = 1.
    """

    name: str
    form: InvariantForm
    chart: Tuple[ScalarField, ...]
    gauge_offset: Optional[BaseForm] = None
    side: int = -1

    def __post_init__(self):
        self.chart = tuple(wrap(c) for c in self.chart)
        if self.side not in (-1, 1):
            raise ValueError("side must be -1 or +1")
        if len(self.chart) != self.form.bundle.dim:
            raise ValueError(f"Chart of {self.name} has {len(self.chart)} components, piece ambient is R^{self.form.bundle.dim}")


def overlap_collar(neck_base: ModelManifold, side: int, eps: float = COLLAR_MARGIN) -> ModelManifold:
    """[-1-eps, -1] x Γ or [1, 1+eps] x Γ, sampled like the neck."""
    res = neck_base.factors[0].resolution
    lo, hi = (-1.0 - eps, -1.0) if side < 0 else (1.0, 1.0 + eps)
    factors = [interval(lo, hi, max(2, res // 4))] + list(neck_base.factors[1:])
    return ModelManifold(factors, neck_base.orientation, f"{neck_base.name} overlap {'-' if side < 0 else '+'}")


def pulled_piece(piece: Piece, overlap: ModelManifold) -> InvariantForm:
    """The piece's pair read in neck coordinates and relative to ψ_ref."""
    dim = overlap.ambient_dim
    src = piece.form
    curvature = pullback(src.bundle.curvature, piece.chart, dim)
    bundle = BundleSpec(overlap, curvature, name=f"{piece.name} on overlap")
    pair = InvariantForm(pullback(src.a, piece.chart, dim), pullback(src.b, piece.chart, dim), bundle)
    if piece.gauge_offset is None or piece.gauge_offset.is_zero:
        return pair
    return change_gauge(pair, -piece.gauge_offset)


def seam_gap(x: InvariantForm, y: InvariantForm, points: np.ndarray) -> Tuple[float, List[float]]:
    """Largest gap of coefficients and their t-derivatives; also the worst sample."""
    worst, where = 0.0, points[0]
    for p, q in ((x.a, y.a), (x.b, y.b)):
        for f in (p - q).coeffs.values():
            for g in (f, f.partial(0)):
                values = np.abs(g.evaluate(points))
                if values.size and float(np.max(values)) > worst:
                    worst = float(np.max(values))
                    where = points[int(np.argmax(values))]
    return worst, [float(v) for v in where]


def check_dividing_near_zero(mesh: DividingSetMesh, resolution: int) -> None:
    """The neck's dividing set must sit at t=0 up to one grid step."""
    if mesh.is_empty:
        return
    stray = mesh.zero_points[np.abs(mesh.zero_points[:, 0]) > 1.0 / resolution]
    if stray.shape[0]:
        raise PostconditionError(
            f"Dividing set has {stray.shape[0]} zeros away from t=0, first at {[float(x) for x in stray[0]]}"
        )


def check_piece_sign(piece: Piece, sign: float) -> None:
    """u keeps the sign ``sign`` on every sample of the piece."""
    points = piece.form.bundle.base.sample_points()
    values = piece.form.b.component(()).evaluate(points)
    bad = sign * values <= 0
    if np.any(bad):
        at = [float(x) for x in points[int(np.argmax(bad))]]
        raise PostconditionError(f"u changes sign on {piece.name} (expected {'+' if sign > 0 else '-'}) at {at}")


@dataclass
class GlobalInvariantForm:
    """Piecewise invariant form; pieces are keyed "B+", "neck", "B-"."""

    pieces: Dict[str, InvariantForm]
    report: PositivityReport
    seams: Dict[str, float] = field(default_factory=dict)
    dividing: Optional[DividingSetMesh] = None

    @property
    def passed(self) -> bool:
        return self.report.passed and all(v <= SEAM_TOL for v in self.seams.values())


def assemble_global(
    b_plus: Piece,
    neck: Optional[AssembledNeck],
    b_minus: Optional[Piece] = None,
    *,
    neck_base: Optional[ModelManifold] = None,
    eps: float = COLLAR_MARGIN,
    tol: float = POSITIVITY_TOL,
    jobs: Optional[int] = None,
) -> GlobalInvariantForm:
    """
    Check the seams of both pieces against the neck, sweep every piece and
    locate the dividing set. With an empty dividing set there is no neck and
    B₊ is returned as the only piece.
    """
    if neck is None:
        report = contact_check(b_plus.form, tol, label=f"{b_plus.name} contact", jobs=jobs)
        return GlobalInvariantForm({"B+": b_plus.form}, report)
    if b_minus is None:
        raise ValueError("A neck needs both B+ and B-")

    base = neck_base or neck.alpha.bundle.base
    seams = {}
    for piece in (b_plus, b_minus):
        overlap = overlap_collar(base, piece.side, eps)
        points = overlap.sample_points()
        ours = InvariantForm(neck.alpha.a, neck.alpha.b, BundleSpec(overlap, neck.alpha.bundle.curvature))
        gap, where = seam_gap(pulled_piece(piece, overlap), ours, points)
        if gap > SEAM_TOL:
            raise SeamMismatchError(f"{piece.name} disagrees with the neck by {gap:.3e} at {where}")
        seams[piece.name] = gap

    reports = [neck.report]
    for piece in (b_plus, b_minus):
        reports.append(contact_check(piece.form, tol, label=f"{piece.name} contact", jobs=jobs))
    report = worst_of(reports, label="global contact")

    u = neck.alpha.b.component(())
    mesh = dividing_set(u, base, 0)
    check_dividing_near_zero(mesh, base.factors[0].resolution)
    check_piece_sign(b_plus, 1.0)
    check_piece_sign(b_minus, -1.0)

    logger.info(f"Global form: min {report.min_value:.4g}, seams {seams}")
    details = {**report.details, "per_piece": {r.label: r.min_value for r in reports}}
    pieces = {"B+": b_plus.form, "neck": neck.alpha, "B-": b_minus.form}
    return GlobalInvariantForm(pieces, report.model_copy(update={"details": details}), seams, mesh)
