"""Model manifolds: ordered products of circles, intervals and unit spheres."""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import SPHERE_TOL
from .errors import ConstraintViolation, DegeneracyError, EmptyRegionError

logger = logging.getLogger(__name__)


class FactorKind(str, Enum):
    CIRCLE = "circle"
    INTERVAL = "interval"
    SPHERE2 = "sphere2"
    SPHERE3 = "sphere3"


_AMBIENT = {FactorKind.CIRCLE: 1, FactorKind.INTERVAL: 1, FactorKind.SPHERE2: 3, FactorKind.SPHERE3: 4}
_INTRINSIC = {FactorKind.CIRCLE: 1, FactorKind.INTERVAL: 1, FactorKind.SPHERE2: 2, FactorKind.SPHERE3: 3}


@dataclass(frozen=True)
class ModelFactor:
    """
    One factor of a model manifold.

    Circles use a periodic coordinate of period 1. Intervals are sampled at
    cell midpoints of [a, b]. Spheres are sampled on spherical (S²) or Hopf
    (S³) coordinate grids that exclude the coordinate degeneracies.
    """

    kind: FactorKind
    resolution: int = 16
    bounds: Tuple[float, float] = (0.0, 1.0)

    @property
    def ambient_dim(self) -> int:
        return _AMBIENT[self.kind]

    @property
    def intrinsic_dim(self) -> int:
        return _INTRINSIC[self.kind]

    def with_resolution(self, resolution: int) -> "ModelFactor":
        return ModelFactor(self.kind, max(2, int(resolution)), self.bounds)

    # ------------------------------------------------------------------
    # parametrization
    # ------------------------------------------------------------------
    def parameter_axes(self) -> List[np.ndarray]:
        res = self.resolution
        mid = (np.arange(res) + 0.5) / res
        full = np.arange(res) / res
        if self.kind == FactorKind.CIRCLE:
            return [full]
        if self.kind == FactorKind.INTERVAL:
            a, b = self.bounds
            return [a + (b - a) * mid]
        if self.kind == FactorKind.SPHERE2:
            return [np.pi * mid, 2.0 * np.pi * full]
        return [0.5 * np.pi * mid, 2.0 * np.pi * full, 2.0 * np.pi * full]

    def periods(self) -> List[Optional[float]]:
        if self.kind == FactorKind.CIRCLE:
            return [1.0]
        if self.kind == FactorKind.INTERVAL:
            return [None]
        if self.kind == FactorKind.SPHERE2:
            return [None, 2.0 * np.pi]
        return [None, 2.0 * np.pi, 2.0 * np.pi]

    def embed(self, params: np.ndarray) -> np.ndarray:
        """Map parameter rows (N, intrinsic_dim) to ambient points."""
        if self.kind in (FactorKind.CIRCLE, FactorKind.INTERVAL):
            return params[:, :1].copy()
        if self.kind == FactorKind.SPHERE2:
            th, ph = params[:, 0], params[:, 1]
            return np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=1)
        eta, x1, x2 = params[:, 0], params[:, 1], params[:, 2]
        c, s = np.cos(eta), np.sin(eta)
        return np.stack([c * np.cos(x1), c * np.sin(x1), s * np.cos(x2), s * np.sin(x2)], axis=1)

    def param_tangent(self, params: np.ndarray, j: int) -> np.ndarray:
        """Derivative of ``embed`` along parameter ``j``."""
        n = params.shape[0]
        if self.kind in (FactorKind.CIRCLE, FactorKind.INTERVAL):
            return np.ones((n, 1))
        if self.kind == FactorKind.SPHERE2:
            th, ph = params[:, 0], params[:, 1]
            if j == 0:
                return np.stack([np.cos(th) * np.cos(ph), np.cos(th) * np.sin(ph), -np.sin(th)], axis=1)
            return np.stack([-np.sin(th) * np.sin(ph), np.sin(th) * np.cos(ph), np.zeros(n)], axis=1)
        eta, x1, x2 = params[:, 0], params[:, 1], params[:, 2]
        c, s = np.cos(eta), np.sin(eta)
        z = np.zeros(n)
        if j == 0:
            return np.stack([-s * np.cos(x1), -s * np.sin(x1), c * np.cos(x2), c * np.sin(x2)], axis=1)
        if j == 1:
            return np.stack([-c * np.sin(x1), c * np.cos(x1), z, z], axis=1)
        return np.stack([z, z, -s * np.sin(x2), s * np.cos(x2)], axis=1)

    # ------------------------------------------------------------------
    # frames
    # ------------------------------------------------------------------
    def check_points(self, points: np.ndarray) -> None:
        if self.kind in (FactorKind.SPHERE2, FactorKind.SPHERE3):
            gap = np.abs(np.sum(points * points, axis=1) - 1.0)
            if gap.size and float(np.max(gap)) > SPHERE_TOL:
                worst = points[int(np.argmax(gap))]
                raise ConstraintViolation(f"Point {worst.tolist()} is off the unit sphere (|x|²-1 = {float(np.max(gap)):.3e})")

    def frames(self, points: np.ndarray) -> np.ndarray:
        """Positive orthonormal tangent frames, shape (N, intrinsic_dim, ambient_dim)."""
        n = points.shape[0]
        if self.kind in (FactorKind.CIRCLE, FactorKind.INTERVAL):
            return np.ones((n, 1, 1))
        p = points / np.linalg.norm(points, axis=1, keepdims=True)
        if self.kind == FactorKind.SPHERE2:
            axis = np.argmin(np.abs(p), axis=1)
            a = np.zeros_like(p)
            a[np.arange(n), axis] = 1.0
            e1 = a - np.sum(a * p, axis=1, keepdims=True) * p
            e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
            e2 = np.cross(p, e1)
            return np.stack([e1, e2], axis=1)
        x1, y1, x2, y2 = p[:, 0], p[:, 1], p[:, 2], p[:, 3]
        ip = np.stack([-y1, x1, -y2, x2], axis=1)
        jp = np.stack([-x2, y2, x1, -y1], axis=1)
        kp = np.stack([-y2, -x2, y1, x1], axis=1)
        return np.stack([ip, jp, kp], axis=1)


@dataclass(frozen=True)
class Frame:
    point: np.ndarray
    vectors: np.ndarray
    oriented: bool = True


@dataclass
class ModelManifold:
    """
    An ordered product of model factors embedded in Euclidean ambient space.

    A positive frame is the concatenation of positive factor frames in factor
    order; ``orientation = -1`` reverses the product orientation by negating
    the first frame vector.
    """

    factors: List[ModelFactor]
    orientation: int = 1
    name: str = ""
    _grid: Optional[Tuple[np.ndarray, np.ndarray]] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        if not self.factors:
            raise ValueError("a model manifold needs at least one factor")

    @property
    def ambient_dim(self) -> int:
        return sum(f.ambient_dim for f in self.factors)

    @property
    def intrinsic_dim(self) -> int:
        return sum(f.intrinsic_dim for f in self.factors)

    @property
    def resolution(self) -> List[int]:
        return [f.resolution for f in self.factors]

    def columns(self, index: int) -> Tuple[int, ...]:
        start = sum(f.ambient_dim for f in self.factors[:index])
        return tuple(range(start, start + self.factors[index].ambient_dim))

    def param_offset(self, index: int) -> int:
        return sum(f.intrinsic_dim for f in self.factors[:index])

    def reversed(self) -> "ModelManifold":
        return ModelManifold(list(self.factors), -self.orientation, self.name)

    def scaled(self, factor: float) -> "ModelManifold":
        """Same manifold with every resolution multiplied by ``factor``."""
        return ModelManifold(
            [f.with_resolution(round(f.resolution * factor)) for f in self.factors],
            self.orientation,
            self.name,
        )

    def product(self, other: "ModelManifold") -> "ModelManifold":
        return ModelManifold(list(self.factors) + list(other.factors), self.orientation * other.orientation)

    # ------------------------------------------------------------------
    # sampling
    # ------------------------------------------------------------------
    def parameter_axes(self) -> List[np.ndarray]:
        return [ax for f in self.factors for ax in f.parameter_axes()]

    def periods(self) -> List[Optional[float]]:
        return [p for f in self.factors for p in f.periods()]

    def grid_shape(self) -> Tuple[int, ...]:
        return tuple(len(ax) for ax in self.parameter_axes())

    def embed(self, params: np.ndarray) -> np.ndarray:
        parts = []
        for i, f in enumerate(self.factors):
            off = self.param_offset(i)
            parts.append(f.embed(params[:, off:off + f.intrinsic_dim]))
        return np.concatenate(parts, axis=1)

    def param_tangent(self, params: np.ndarray, axis: int) -> np.ndarray:
        """Ambient derivative of the embedding along global parameter ``axis``."""
        out = np.zeros((params.shape[0], self.ambient_dim))
        for i, f in enumerate(self.factors):
            off = self.param_offset(i)
            if off <= axis < off + f.intrinsic_dim:
                cols = list(self.columns(i))
                out[:, cols] = f.param_tangent(params[:, off:off + f.intrinsic_dim], axis - off)
        return out

    def sample(self) -> Tuple[np.ndarray, np.ndarray]:
        """Grid parameters (N, P) and ambient points (N, D), in C order of the grid."""
        if self._grid is None:
            axes = self.parameter_axes()
            mesh = np.meshgrid(*axes, indexing="ij")
            params = np.stack([m.ravel() for m in mesh], axis=1)
            points = self.embed(params)
            if points.shape[0] == 0:
                raise EmptyRegionError(f"Manifold {self.name or self.factors} has an empty grid")
            self._grid = (params, points)
        return self._grid

    def sample_points(self) -> np.ndarray:
        return self.sample()[1]

    # ------------------------------------------------------------------
    # frames
    # ------------------------------------------------------------------
    def check_points(self, points: np.ndarray) -> None:
        for i, f in enumerate(self.factors):
            f.check_points(points[:, list(self.columns(i))])

    def frames(self, points: np.ndarray) -> np.ndarray:
        """Positive orthonormal tangent frames at every point, shape (N, k, D)."""
        points = np.atleast_2d(points)
        n = points.shape[0]
        out = np.zeros((n, self.intrinsic_dim, self.ambient_dim))
        for i, f in enumerate(self.factors):
            cols = list(self.columns(i))
            off = self.param_offset(i)
            block = f.frames(points[:, cols])
            for r in range(f.intrinsic_dim):
                out[:, off + r, cols] = block[:, r, :]
        if self.orientation < 0:
            out[:, 0, :] *= -1.0
        return out


def frame_at(m: ModelManifold, p: Sequence[float]) -> Frame:
    """Oriented orthonormal tangent frame of ``m`` at the ambient point ``p``."""
    point = np.asarray(p, dtype=float).reshape(1, -1)
    if point.shape[1] != m.ambient_dim:
        raise ConstraintViolation(f"Point has {point.shape[1]} coordinates, manifold ambient dimension is {m.ambient_dim}")
    m.check_points(point)
    return Frame(point=point[0], vectors=m.frames(point)[0], oriented=True)


def circle(resolution: int = 16) -> ModelFactor:
    return ModelFactor(FactorKind.CIRCLE, resolution)


def interval(a: float, b: float, resolution: int = 16) -> ModelFactor:
    return ModelFactor(FactorKind.INTERVAL, resolution, (float(a), float(b)))


def sphere2(resolution: int = 20) -> ModelFactor:
    return ModelFactor(FactorKind.SPHERE2, resolution)


def sphere3(resolution: int = 12) -> ModelFactor:
    return ModelFactor(FactorKind.SPHERE3, resolution)


def torus(dim: int, resolution: int = 16, name: str = "") -> ModelManifold:
    return ModelManifold([circle(resolution) for _ in range(dim)], name=name or f"T{dim}")


def subsets(m: int, k: int):
    return itertools.combinations(range(m), k)


def kernel_frame(frames: np.ndarray, covectors: np.ndarray, sign: float = 1.0, tol: float = 1e-12) -> np.ndarray:
    """
    Oriented orthonormal frames of a common kernel inside the tangent spaces.

    ``frames`` (N, k, D) are positive tangent frames and ``covectors`` (N, r, k)
    the values of r one-forms on them. The result (N, k - r, D) spans the
    kernel and is oriented so that (R_1..R_r, kernel) is positive whenever
    ``sign * covectors`` is positive on R_i.
    """
    w = sign * np.swapaxes(covectors, 1, 2)
    n, k, r = w.shape
    q, rr = np.linalg.qr(w, mode="complete")
    pivots = np.abs(np.diagonal(rr, axis1=1, axis2=2))
    if pivots.size and float(np.min(pivots)) < tol:
        bad = int(np.argmin(np.min(pivots, axis=1)))
        raise DegeneracyError(f"Covectors are linearly dependent at sample {bad}")
    kernel = q[:, :, r:].copy()
    if k - r == 0:
        return np.zeros((n, 0, frames.shape[2]))
    det = np.linalg.det(np.concatenate([w, kernel], axis=2))
    kernel[det < 0, :, 0] *= -1.0
    return np.einsum("nkj,nkd->njd", kernel, frames)
