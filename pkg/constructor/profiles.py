"""
Profile functions for the neck and the collar.

The neck profiles f, g are built from C² quintic Hermite steps so that
their derivatives are exact piecewise polynomials; every pair handed out is
run through the validator first.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, model_validator
from scipy.interpolate import BPoly, PPoly

from forms.fields import ScalarField, coordinate, exp, scale, spline, wrap

from .config import (
    COLLAR_MARGIN,
    COLLAR_SLOPE,
    F_FLOOR,
    LEFT_FLAT_ZONE,
    PLATEAU_CAP,
    PLATEAU_HEIGHT,
    PROFILE_EXACT_TOL,
    PROFILE_GRID,
    TRANSITION_WIDTH,
    WIDTH_FLOOR,
    WRONSKIAN_FLOOR,
)
from .errors import ProfileValidationError, TuningFailure

logger = logging.getLogger(__name__)

_SPAN = 10.0


def smooth_step(a: float, b: float, v0: float, v1: float, lo: float = -_SPAN, hi: float = _SPAN) -> BPoly:
    """Constant v0 up to a, constant v1 from b, quintic C² transition between."""
    return BPoly.from_derivatives([lo, a, b, hi], [[v0, 0, 0], [v0, 0, 0], [v1, 0, 0], [v1, 0, 0]])


def even_bump(inner: float, outer: float) -> BPoly:
    """1 on |t| <= inner, 0 on |t| >= outer."""
    knots = [-_SPAN, -outer, -inner, inner, outer, _SPAN]
    values = [[0, 0, 0], [0, 0, 0], [1, 0, 0], [1, 0, 0], [0, 0, 0], [0, 0, 0]]
    return BPoly.from_derivatives(knots, values)


def abs_poly() -> PPoly:
    return PPoly(np.array([[-1.0, 1.0], [_SPAN, 0.0]]), np.array([-_SPAN, 0.0, _SPAN]))


class ProfileParams(BaseModel):
    plateau: float = PLATEAU_HEIGHT
    width: float = TRANSITION_WIDTH
    eps: float = COLLAR_MARGIN
    delta: float = LEFT_FLAT_ZONE
    f_floor: float = F_FLOOR
    wronskian_floor: float = WRONSKIAN_FLOOR

    @model_validator(mode="after")
    def _ranges(self):
        if not 0 < self.delta < 0.5:
            raise ValueError("delta must lie in (0, 0.5)")
        if not 0 < self.width < 1 - self.delta:
            raise ValueError("width must lie in (0, 1 - delta)")
        if self.plateau <= 0 or self.eps <= 0:
            raise ValueError("plateau and eps must be positive")
        return self

    def escalated(self) -> "ProfileParams":
        """Next candidate: twice the plateau, half the transition width."""
        plateau, width = 2 * self.plateau, self.width / 2
        if plateau > PLATEAU_CAP or width < WIDTH_FLOOR:
            raise TuningFailure(f"Profile escalation exhausted at plateau={self.plateau:g}, width={self.width:g}")
        return self.model_copy(update={"plateau": plateau, "width": width})


@dataclass
class ProfilePair:
    f: ScalarField
    g: ScalarField
    eps: float
    params: ProfileParams
    f_min: float
    w_min: float

    def at(self, t: ScalarField) -> Tuple[ScalarField, ScalarField]:
        """f and g read through a coordinate field ``t`` of another ambient space."""
        comp = (wrap(t),)
        return self.f.compose(comp), self.g.compose(comp)


def profile_grid(eps: float) -> np.ndarray:
    return np.linspace(-1 - eps, 1 + eps, PROFILE_GRID + 2)[1:-1]


def _first(mask: np.ndarray, grid: np.ndarray) -> float:
    return float(grid[int(np.argmax(mask))])


def validate_profiles(f: ScalarField, g: ScalarField, params: ProfileParams) -> Tuple[float, float]:
    """Check the four defining conditions on a 10⁴-point grid; returns (F_min, W_min)."""
    t = profile_grid(params.eps)
    pts, mirror = t[:, None], -t[:, None]
    fv, gv = f.evaluate(pts), g.evaluate(pts)
    df, dg = f.partial(0).evaluate(pts), g.partial(0).evaluate(pts)

    bad = np.abs(fv - f.evaluate(mirror)) > PROFILE_EXACT_TOL * (1 + np.abs(fv))
    if np.any(bad):
        raise ProfileValidationError("f even", _first(bad, t), "f(t) != f(-t)")
    if np.any(fv == 0):
        raise ProfileValidationError("f nowhere zero", _first(fv == 0, t), "f vanishes")
    left = t <= -1 + params.delta
    bad = left & (np.abs(fv - np.exp(t + 1)) > PROFILE_EXACT_TOL * np.exp(t + 1))
    if np.any(bad):
        raise ProfileValidationError("f = exp(t+1) near the left end", _first(bad, t), "f departs from exp(t+1)")

    bad = np.abs(gv + g.evaluate(mirror)) > PROFILE_EXACT_TOL
    if np.any(bad):
        raise ProfileValidationError("g odd", _first(bad, t), "g(t) != -g(-t)")
    bad = left & (np.abs(gv - 1) > PROFILE_EXACT_TOL)
    if np.any(bad):
        raise ProfileValidationError("g = 1 near the left end", _first(bad, t), "g departs from 1")
    signs = np.sign(gv[np.abs(gv) > PROFILE_EXACT_TOL])
    changes = int(np.sum(signs[1:] != signs[:-1]))
    if changes != 1:
        raise ProfileValidationError("g has a single zero", 0.0, f"{changes} sign changes")

    wronskian = df * gv - fv * dg
    bad = wronskian <= 0
    if np.any(bad):
        raise ProfileValidationError("f'g - fg' > 0", _first(bad, t), f"value {float(np.min(wronskian)):.3e}")

    moving = np.abs(dg) > 1e-9
    f_min = float(np.min(fv[moving]))
    w_min = float(np.min(wronskian[moving]))
    if f_min < params.f_floor:
        raise ProfileValidationError("f large where g' != 0", _first(moving & (fv < params.f_floor), t), f"F_min={f_min:.4g}")
    if w_min < params.wronskian_floor:
        low = moving & (wronskian < params.wronskian_floor)
        raise ProfileValidationError("f'g - fg' large where g' != 0", _first(low, t), f"W_min={w_min:.4g}")
    return f_min, w_min


def make_profiles(params: Optional[ProfileParams] = None) -> ProfilePair:
    """
    f is exp(1 - |t|) blended into a plateau of height ``plateau`` around 0;
    g steps from 1 to -1 across [-width, width].
    """
    params = params or ProfileParams()
    t = coordinate(0)
    plateau = spline(even_bump(params.width / 2, 1 - params.delta), t)
    outer = exp(1.0 - spline(abs_poly(), t))
    f = outer * (1.0 - plateau) + scale(params.plateau, plateau)
    g = spline(smooth_step(-params.width, params.width, 1.0, -1.0), t)
    f_min, w_min = validate_profiles(f, g, params)
    logger.debug(f"Profiles plateau={params.plateau:g} width={params.width:g}: F_min={f_min:.4g} W_min={w_min:.4g}")
    return ProfilePair(f, g, params.eps, params, f_min, w_min)


# ----------------------------------------------------------------------
# collar profiles
# ----------------------------------------------------------------------
@dataclass
class CollarProfile:
    """b, c on [0, 1]: b rises from 0 after eps/4, c falls from 1 after eps."""

    b: ScalarField
    c: ScalarField
    eps: float
    slope: float
    b_prime_min: float


def make_collar_profile(
    eps: float = COLLAR_MARGIN, slope: float = COLLAR_SLOPE, normal_form: Optional[ScalarField] = None
) -> CollarProfile:
    """
    With ``normal_form`` = κ(t) the profile uses b = S·(κ - κ(0)), which
    reproduces inputs of the form ω^Γ + d(κβ) where S = 1.
    """
    if not 0 < eps < 0.5:
        raise ValueError("collar eps must lie in (0, 0.5)")
    t = coordinate(0)
    rise = smooth_step(eps / 4, eps / 2, 0.0, 1.0, lo=-1.0, hi=2.0)
    if normal_form is None:
        b = scale(slope, spline(rise.antiderivative(), t))
    else:
        kappa = wrap(normal_form)
        b = spline(rise, t) * (kappa - float(kappa.evaluate(np.zeros((1, 1)))[0]))
    c = spline(smooth_step(eps, 0.9, 1.0, 0.0, lo=-1.0, hi=2.0), t)

    grid = np.linspace(0.0, 1.0, PROFILE_GRID)[:, None]
    bv, db, cv = b.evaluate(grid), b.partial(0).evaluate(grid), c.evaluate(grid)
    tt = grid[:, 0]
    if np.any(db < -PROFILE_EXACT_TOL):
        raise ProfileValidationError("b monotone", _first(db < -PROFILE_EXACT_TOL, tt), "b decreases")
    near_zero = tt <= eps / 4
    if np.any(bv[near_zero] != 0):
        raise ProfileValidationError("b = 0 near 0", _first(near_zero & (bv != 0), tt), "b is nonzero")
    tol = PROFILE_EXACT_TOL
    if np.any(np.abs(cv[tt <= eps] - 1) > tol) or np.any(np.abs(cv[tt >= 0.9]) > tol) or np.any((cv < -tol) | (cv > 1 + tol)):
        raise ProfileValidationError("c profile", eps, "c must be 1 on [0, eps], 0 near 1, within [0, 1]")
    b_prime_min = float(np.min(db[tt > eps / 2]))
    return CollarProfile(b, c, eps, slope, b_prime_min)
