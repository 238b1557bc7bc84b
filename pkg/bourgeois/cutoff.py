import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.interpolate import BPoly

from forms.fields import ScalarField, coordinate, spline

from .config import BINDING_RADIUS, CUTOFF_EXACT_TOL, CUTOFF_GRID, CUTOFF_TRANSITION
from .errors import CutoffValidationError

logger = logging.getLogger(__name__)


@dataclass
class CutoffRho:
    """ρ as a function of the binding radius r, stored on a one-dimensional ambient space."""

    rho: ScalarField
    r0: float
    transition: Tuple[float, float]

    def of(self, r: ScalarField) -> ScalarField:
        return self.rho.compose((r,))


def validate_cutoff(rho: ScalarField, r0: float, transition: Tuple[float, float]) -> float:
    """Identity near 0, monotone, 1 from the end of the transition on; returns min ρ'."""
    r = np.linspace(0.0, 1.0, CUTOFF_GRID)[:, None]
    values = rho.evaluate(r)
    slope = rho.partial(0).evaluate(r)
    grid = r[:, 0]

    near = grid <= transition[0]
    bad = near & (np.abs(values - grid) > CUTOFF_EXACT_TOL)
    if np.any(bad):
        raise CutoffValidationError("rho(r) = r near 0", float(grid[np.argmax(bad)]), "rho departs from r")
    bad = slope < -CUTOFF_EXACT_TOL
    if np.any(bad):
        raise CutoffValidationError("rho' >= 0", float(grid[np.argmax(bad)]), f"slope {float(np.min(slope)):.3e}")
    far = grid >= transition[1]
    bad = far & (np.abs(values - 1.0) > CUTOFF_EXACT_TOL)
    if np.any(bad):
        raise CutoffValidationError("rho = 1 near r0", float(grid[np.argmax(bad)]), "rho departs from 1")
    return float(np.min(slope))


def make_cutoff(r0: float = BINDING_RADIUS, transition: Optional[Tuple[float, float]] = None) -> CutoffRho:
    """Quintic Hermite blend from ρ = r on [0, a] to ρ = 1 on [b, ∞)."""
    a, b = transition or CUTOFF_TRANSITION
    if not 0 < a < b < r0:
        raise CutoffValidationError("0 < a < b < r0", float(b), f"transition ({a:g}, {b:g}) must lie inside (0, {r0:g})")
    poly = BPoly.from_derivatives([0.0, a, b, 2.0], [[0.0, 1.0, 0.0], [a, 1.0, 0.0], [1.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    rho = spline(poly, coordinate(0))
    min_slope = validate_cutoff(rho, r0, (a, b))
    logger.debug(f"Cutoff on (0, {r0:g}) with transition ({a:g}, {b:g}): min rho' = {min_slope:.3e}")
    return CutoffRho(rho, r0, (a, b))
