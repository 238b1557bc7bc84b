"""
Open books on N given by a complex coordinate (X, Y) on a neighbourhood of
the binding {X = Y = 0}, with page angle φ = arg(X + iY).
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from forms.config import POSITIVITY_TOL
from forms.fields import ScalarField, atan2, coordinate, sqrt, wrap
from forms.forms import BaseForm, covector_matrix, eval_on_frame, ext_d, function, one_form, power, wedge
from forms.manifold import ModelManifold, kernel_frame, sphere3
from forms.sweep import positivity_sweep, report_from_values

from .config import BINDING_RADIUS, PAGE_STANDOFF
from .errors import OpenBookError

logger = logging.getLogger(__name__)


@dataclass
class OpenBookSpec:
    N: ModelManifold
    alpha_N: BaseForm
    X: ScalarField
    Y: ScalarField
    r0: float = BINDING_RADIUS
    name: str = ""

    def __post_init__(self):
        if self.N.intrinsic_dim < 3 or self.N.intrinsic_dim % 2 == 0:
            raise OpenBookError(f"N must have odd dimension >= 3, got {self.N.intrinsic_dim}")
        if self.alpha_N.degree != 1 or self.alpha_N.dim != self.N.ambient_dim:
            raise OpenBookError("alpha_N must be a 1-form on the ambient space of N")
        self.X, self.Y = wrap(self.X), wrap(self.Y)

    @property
    def r(self) -> ScalarField:
        return sqrt(self.X * self.X + self.Y * self.Y)

    @property
    def phi(self) -> ScalarField:
        return atan2(self.Y, self.X)


def page_frames(ob: OpenBookSpec, points: np.ndarray) -> np.ndarray:
    dphi = ext_d(function(ob.phi, ob.N.ambient_dim))
    frames = ob.N.frames(points)
    return kernel_frame(frames, covector_matrix([dphi], points, frames), sign=1.0)


def binding_slice_frames(ob: OpenBookSpec, points: np.ndarray) -> np.ndarray:
    """Frames of B_N x {z} through each point, oriented after the disc coordinates."""
    dim = ob.N.ambient_dim
    dX, dY = ext_d(function(ob.X, dim)), ext_d(function(ob.Y, dim))
    frames = ob.N.frames(points)
    return kernel_frame(frames, covector_matrix([dX, dY], points, frames), sign=1.0)


def validate_open_book(ob: OpenBookSpec, tol: float = POSITIVITY_TOL, jobs: Optional[int] = None) -> dict:
    """
    Contactness of α_N, positivity of dα_N on pages away from the binding,
    and contactness of α_N on B_N x {z} for |z| <= r0.
    """
    n = (ob.N.intrinsic_dim + 1) // 2
    d_alpha = ext_d(ob.alpha_N)
    contact = positivity_sweep(wedge(ob.alpha_N, power(d_alpha, n - 1)), ob.N, tol, label="alpha_N contact", jobs=jobs)

    points = ob.N.sample_points()
    radius = ob.r.evaluate(points)
    away = points[radius > PAGE_STANDOFF]
    page_form = power(d_alpha, n - 1)
    pages = report_from_values(
        eval_on_frame(page_form, away, page_frames(ob, away)), away, ob.N.resolution, tol, label="d alpha_N on pages"
    )

    near = points[(radius <= ob.r0) & (radius > PAGE_STANDOFF)]
    binding_form = wedge(ob.alpha_N, power(d_alpha, n - 2))
    binding = report_from_values(
        eval_on_frame(binding_form, near, binding_slice_frames(ob, near)), near, ob.N.resolution, tol, label="binding slices"
    )

    reports = {"contact": contact, "pages": pages, "binding": binding}
    failed = [k for k, r in reports.items() if not r.passed]
    if failed:
        worst = reports[failed[0]]
        raise OpenBookError(f"Open book {ob.name} fails {failed}: {worst.label} min {worst.min_value:.3e} at {worst.argmin}")
    logger.info(f"Open book {ob.name} supports alpha_N: contact min {contact.min_value:.4g}")
    return reports


def standard_s3_open_book(resolution: int = 12, r0: float = BINDING_RADIUS) -> OpenBookSpec:
    """S³ ⊂ C² with α = x₁dy₁ - y₁dx₁ + x₂dy₂ - y₂dx₂, binding {z₁ = 0}, pages arg z₁ = const."""
    N = ModelManifold([sphere3(resolution)], name="S3")
    x1, y1, x2, y2 = (coordinate(i) for i in range(4))
    alpha = one_form([-y1, x1, -y2, x2], 4)
    return OpenBookSpec(N, alpha, x1, y1, r0, name="S3 standard")
