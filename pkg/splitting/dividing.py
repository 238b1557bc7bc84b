"""Zero sets of u = α(∂θ) located by bisection along a transverse grid axis."""

import logging
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from forms.fields import ScalarField, wrap
from forms.manifold import ModelManifold

from .config import BISECTION_MAX_ITER, TRANSVERSALITY_TOL, ZERO_TOL
from .errors import IrregularLevelError, SplitParameterError

logger = logging.getLogger(__name__)

Axis = Union[int, Tuple[int, int]]


@dataclass
class DividingSetMesh:
    """Sampled dividing set together with the sign of u at every grid sample."""

    manifold: ModelManifold
    u: ScalarField
    transverse_axis: int
    zero_params: np.ndarray
    zero_points: np.ndarray
    derivatives: np.ndarray
    sign_regions: np.ndarray

    @property
    def is_empty(self) -> bool:
        return self.zero_points.shape[0] == 0

    @property
    def plus_mask(self) -> np.ndarray:
        return self.sign_regions >= 0

    @property
    def minus_mask(self) -> np.ndarray:
        return self.sign_regions <= 0


def resolve_axis(m: ModelManifold, axis: Axis) -> int:
    """Global parameter index of ``axis`` given as an index or a (factor, parameter) pair."""
    if isinstance(axis, tuple):
        factor, param = axis
        if not 0 <= factor < len(m.factors) or not 0 <= param < m.factors[factor].intrinsic_dim:
            raise SplitParameterError(f"No parameter {param} on factor {factor} of {m.name}")
        return m.param_offset(factor) + param
    if not 0 <= axis < m.intrinsic_dim:
        raise SplitParameterError(f"Axis {axis} out of range for {m.name} ({m.intrinsic_dim} parameters)")
    return int(axis)


def _edges(shape: Tuple[int, ...], axis: int, periodic: bool) -> Tuple[np.ndarray, np.ndarray]:
    idx = np.arange(int(np.prod(shape))).reshape(shape)
    nxt = np.roll(idx, -1, axis=axis)
    if not periodic:
        keep = [slice(None)] * len(shape)
        keep[axis] = slice(0, shape[axis] - 1)
        idx, nxt = idx[tuple(keep)], nxt[tuple(keep)]
    return idx.ravel(), nxt.ravel()


def _bisect(u: ScalarField, m: ModelManifold, lo: np.ndarray, axis: int, step: float, lo_sign: np.ndarray, tol: float):
    lo = lo.copy()
    hi = lo.copy()
    hi[:, axis] += step
    best = lo.copy()
    best_val = np.full(lo.shape[0], np.inf)
    for _ in range(BISECTION_MAX_ITER):
        mid = 0.5 * (lo + hi)
        vals = u.evaluate(m.embed(mid))
        closer = np.abs(vals) < best_val
        best[closer] = mid[closer]
        best_val[closer] = np.abs(vals[closer])
        if np.all(best_val <= tol) or float(np.max(hi[:, axis] - lo[:, axis])) < 1e-15:
            break
        same = np.sign(vals) == lo_sign
        lo[same] = mid[same]
        hi[~same] = mid[~same]
    return best, best_val


def dividing_set(u, m: ModelManifold, axis: Axis, tol: float = ZERO_TOL) -> DividingSetMesh:
    """
    Locate {u = 0} on the grid of ``m``: samples with |u| <= tol count as
    zeros, and every grid edge along ``axis`` with a strict sign change is
    bisected to |u| <= tol. Zeros where u is tangential to the axis raise.
    """
    u = wrap(u)
    ax = resolve_axis(m, axis)
    params, points = m.sample()
    shape = m.grid_shape()
    period = m.periods()[ax]
    axis_values = m.parameter_axes()[ax]
    step = period / shape[ax] if period is not None else float(axis_values[1] - axis_values[0])

    values = u.evaluate(points)
    signs = np.where(np.abs(values) <= tol, 0, np.sign(values)).astype(int)

    here, there = _edges(shape, ax, period is not None)
    crossing = signs[here] * signs[there] < 0
    roots, residual = _bisect(u, m, params[here[crossing]], ax, step, signs[here[crossing]], tol)
    if roots.shape[0] and float(np.max(residual)) > tol:
        logger.warning(f"Bisection on {m.name} stalled at |u| = {float(np.max(residual)):.3e}")

    zero_params = np.concatenate([params[signs == 0], roots], axis=0)
    if period is not None and zero_params.shape[0]:
        zero_params[:, ax] = np.mod(zero_params[:, ax], period)
    zero_points = m.embed(zero_params) if zero_params.shape[0] else np.zeros((0, m.ambient_dim))

    derivatives = np.zeros(zero_params.shape[0])
    if zero_params.shape[0]:
        tangent = m.param_tangent(zero_params, ax)
        derivatives = np.sum(u.gradient(zero_points, m.ambient_dim) * tangent, axis=1)
        flat = np.abs(derivatives) < TRANSVERSALITY_TOL
        if np.any(flat):
            worst = zero_points[int(np.argmax(flat))]
            raise IrregularLevelError(
                f"u is tangential to axis {ax} at {worst.tolist()} (derivative {derivatives[int(np.argmax(flat))]:.3e})"
            )

    logger.debug(f"Dividing set on {m.name}: {zero_points.shape[0]} zeros, {int(np.sum(crossing))} bisected edges")
    return DividingSetMesh(m, u, ax, zero_params, zero_points, derivatives, signs)
