"""Positivity sweeps of top-degree forms and integrals over 2-cycles."""

import logging
import warnings
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, model_validator

from .config import CYCLE_RESOLUTION, POSITIVITY_TOL
from .errors import ArityMismatch, DegeneracyError, DegenerateCycleWarning, EmptyRegionError
from .fields import ScalarField, evaluate_many, wrap
from .forms import BaseForm, eval_on_frame, pullback
from .manifold import ModelManifold
from .pool import SweepManager

logger = logging.getLogger(__name__)


class PositivityReport(BaseModel):
    min_value: float
    argmin: List[float]
    resolution: List[int]
    tolerance: float
    passed: bool
    samples: int = 0
    label: str = ""
    details: Dict[str, Any] = {}

    @model_validator(mode="after")
    def _passed_matches_min(self):
        if self.passed != (self.min_value > self.tolerance):
            raise ValueError("passed must equal min_value > tolerance")
        return self


def report_from_values(
    values: np.ndarray,
    points: np.ndarray,
    resolution: Sequence[int],
    tol: float = POSITIVITY_TOL,
    label: str = "",
    details: Optional[Dict[str, Any]] = None,
) -> PositivityReport:
    """Build a report from precomputed sample values (first minimum wins)."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise EmptyRegionError(f"No samples to sweep for {label or 'report'}")
    bad = ~np.isfinite(values)
    if np.any(bad):
        at = [float(x) for x in points[int(np.argmax(bad))]]
        raise DegeneracyError(f"Non-finite value in {label or 'report'} at {at}")
    idx = int(np.argmin(values))
    min_value = float(values[idx])
    return PositivityReport(
        min_value=min_value,
        argmin=[float(x) for x in points[idx]],
        resolution=list(resolution),
        tolerance=tol,
        passed=min_value > tol,
        samples=int(values.size),
        label=label,
        details=dict(details or {}),
    )


def worst_of(reports: Sequence[PositivityReport], label: str = "") -> PositivityReport:
    """The report with the smallest minimum, relabelled; ties keep the first."""
    if not reports:
        raise EmptyRegionError("No reports to combine")
    worst = min(reports, key=lambda r: r.min_value)
    passed = all(r.passed for r in reports) and worst.min_value > worst.tolerance
    details = dict(worst.details)
    details["worst_label"] = worst.label
    return worst.model_copy(update={"label": label or worst.label, "passed": passed, "details": details})


def sweep_frames(
    a: BaseForm,
    points: np.ndarray,
    frames: np.ndarray,
    resolution: Sequence[int],
    tol: float = POSITIVITY_TOL,
    label: str = "",
    jobs: Optional[int] = None,
) -> PositivityReport:
    """Evaluate ``a`` on supplied oriented frames and report the minimum."""
    if points.shape[0] == 0:
        raise EmptyRegionError(f"Empty sample set for {label or 'sweep'}")
    if frames.shape[1] != a.degree:
        raise ArityMismatch(f"A {a.degree}-form swept on {frames.shape[1]}-frames")

    def batch(s: slice) -> np.ndarray:
        return eval_on_frame(a, points[s], frames[s])

    with SweepManager(num_workers=jobs) as manager:
        values = manager.map(batch, points.shape[0])
    report = report_from_values(values, points, resolution, tol, label)
    logger.debug(f"Sweep {label or '(unnamed)'}: min={report.min_value:.6g} over {report.samples} samples")
    return report


def positivity_sweep(
    a: BaseForm,
    m: ModelManifold,
    tol: float = POSITIVITY_TOL,
    mask: Optional[np.ndarray] = None,
    label: str = "",
    jobs: Optional[int] = None,
) -> PositivityReport:
    """
    Evaluate a top-degree form on the oriented frame at every grid sample of
    ``m`` and report the minimum. ``mask`` restricts the sweep to a subset of
    the grid.
    """
    if a.degree != m.intrinsic_dim:
        raise ArityMismatch(f"A {a.degree}-form is not top degree on the {m.intrinsic_dim}-manifold {m.name}")
    points = m.sample_points()
    if mask is not None:
        points = points[np.asarray(mask, dtype=bool)]
    if points.shape[0] == 0:
        raise EmptyRegionError(f"No grid samples left on {m.name or 'manifold'} for {label or 'sweep'}")

    def batch(s: slice) -> np.ndarray:
        pts = points[s]
        return eval_on_frame(a, pts, m.frames(pts))

    with SweepManager(num_workers=jobs) as manager:
        values = manager.map(batch, points.shape[0])
    report = report_from_values(values, points, m.resolution, tol, label)
    logger.debug(f"Sweep {label or '(unnamed)'} on {m.name}: min={report.min_value:.6g} at {report.argmin}")
    return report


# ----------------------------------------------------------------------
# cycles
# ----------------------------------------------------------------------
@dataclass
class Cycle:
    """
    A parametrized 2-cycle: a map from the unit square into ambient space,
    one component field per ambient coordinate, in the square's coordinates.
    """

    name: str
    components: Tuple[ScalarField, ...]
    periodic: Tuple[bool, bool] = (True, True)
    resolution: int = CYCLE_RESOLUTION

    def __post_init__(self):
        self.components = tuple(wrap(c) for c in self.components)


def _square_grid(resolution: int) -> np.ndarray:
    mid = (np.arange(resolution) + 0.5) / resolution
    s, t = np.meshgrid(mid, mid, indexing="ij")
    return np.stack([s.ravel(), t.ravel()], axis=1)


def integrate_cycle(a: BaseForm, c: Cycle, resolution: Optional[int] = None) -> float:
    """Integral of a 2-form over a parametrized cycle by the midpoint rule."""
    if a.degree != 2:
        raise ArityMismatch(f"Cycles integrate 2-forms, got a {a.degree}-form")
    if len(c.components) != a.dim:
        raise ArityMismatch(f"Cycle {c.name} maps into R^{len(c.components)}, form lives on R^{a.dim}")
    res = resolution or c.resolution
    grid = _square_grid(res)

    jac = np.stack(
        [np.stack(evaluate_many([comp.partial(j) for comp in c.components], grid), axis=1) for j in range(2)],
        axis=2,
    )
    sv = np.linalg.svd(jac, compute_uv=False)
    if float(np.max(sv[:, -1])) < 1e-12:
        warnings.warn(f"Cycle {c.name} has a degenerate Jacobian everywhere", DegenerateCycleWarning)
        logger.warning(f"Degenerate Jacobian on cycle {c.name}")

    pulled = pullback(a, c.components, 2)
    density = pulled.component((0, 1)).evaluate(grid)
    value = float(np.sum(density)) / (res * res)
    logger.debug(f"Integral over {c.name} at resolution {res}: {value:.9g}")
    return value

