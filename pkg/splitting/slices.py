"""Sampled hypersurfaces Γ_s with their boundary-oriented tangent frames."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from forms.errors import EmptyRegionError
from forms.fields import ScalarField, coordinate, wrap
from forms.forms import BaseForm, covector_matrix, ext_d, function
from forms.manifold import FactorKind, ModelManifold, kernel_frame

from .config import ZERO_TOL
from .dividing import Axis, DividingSetMesh, dividing_set, resolve_axis
from .errors import SplitParameterError

logger = logging.getLogger(__name__)


@dataclass
class ContactSliceData:
    """
    Samples of a hypersurface Γ_s of the base with positive frames of TΓ_s.

    A frame F is positive when (N, F) is a positive base frame for the
    outward normal N of the region {u >= s}.
    """

    s: float
    points: np.ndarray
    frames: np.ndarray
    beta: Optional[BaseForm]
    manifold: ModelManifold
    label: str = ""
    details: dict = field(default_factory=dict)
    u: Optional[ScalarField] = None

    @property
    def resolution(self) -> List[int]:
        return self.manifold.resolution

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def with_beta(self, beta: BaseForm) -> "ContactSliceData":
        return ContactSliceData(self.s, self.points, self.frames, beta, self.manifold, self.label, dict(self.details), self.u)


def boundary_frames(u: ScalarField, m: ModelManifold, points: np.ndarray) -> np.ndarray:
    """Frames of ker du ordered after the direction in which u decreases."""
    du = ext_d(function(u, m.ambient_dim))
    frames = m.frames(points)
    cov = covector_matrix([du], points, frames)
    return kernel_frame(frames, cov, sign=-1.0)


def mesh_slice(mesh: DividingSetMesh, beta: Optional[BaseForm] = None, s: float = 0.0) -> ContactSliceData:
    if mesh.is_empty:
        raise EmptyRegionError(f"The level {s} of u is empty on {mesh.manifold.name}")
    frames = boundary_frames(mesh.u, mesh.manifold, mesh.zero_points)
    return ContactSliceData(s, mesh.zero_points, frames, beta, mesh.manifold, label=f"level {s:g}", u=mesh.u)


def level_slice(u, m: ModelManifold, axis: Axis, s: float = 0.0, beta: Optional[BaseForm] = None) -> ContactSliceData:
    """Γ_s = {u = s} located along ``axis``, with |u - s| <= 1e-10 at every sample."""
    u = wrap(u)
    mesh = dividing_set(u - s if s else u, m, axis, ZERO_TOL)
    data = mesh_slice(mesh, beta, s)
    logger.debug(f"Slice u={s:g} on {m.name}: {data.size} samples")
    return data


def coordinate_slice(
    m: ModelManifold, axis: Axis, value: float, beta: Optional[BaseForm] = None, normal_sign: float = 1.0
) -> ContactSliceData:
    """
    The hypersurface {x_axis = value} for a circle or interval coordinate,
    sampled on the remaining grid and oriented with ``normal_sign * ∂_axis``
    as outward normal.
    """
    ax = resolve_axis(m, axis)
    factor_index = next(i for i in range(len(m.factors)) if m.param_offset(i) <= ax < m.param_offset(i) + m.factors[i].intrinsic_dim)
    factor = m.factors[factor_index]
    if factor.kind not in (FactorKind.CIRCLE, FactorKind.INTERVAL):
        raise SplitParameterError(f"Coordinate slices need a circle or interval axis, got {factor.kind.value}")
    params, _ = m.sample()
    first = m.parameter_axes()[ax][0]
    sub = params[params[:, ax] == first].copy()
    sub[:, ax] = value
    points = m.embed(sub)
    frames = m.frames(points)
    column = m.columns(factor_index)[0]
    cov = frames[:, :, column][:, None, :]
    slice_frames = kernel_frame(frames, cov, sign=normal_sign)
    level = (coordinate(column) - value) * (-normal_sign)
    return ContactSliceData(value, points, slice_frames, beta, m, label=f"x{column}={value:g}", u=level)
