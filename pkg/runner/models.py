"""
Analytic models behind the gallery scenarios.

Every builder takes the scenario manifold so that resolutions (and the
--resolution-scale flag) flow through.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

from bundle.invariant import BundleSpec, InvariantForm, contact_pair, trivial_bundle
from constructor.glue import Piece
from constructor.neck import NeckAssembly
from forms.fields import ScalarField, constant, coordinate, cos, exp, sin, sqrt
from forms.forms import BaseForm, dx, ext_d, one_form, two_form, zero
from forms.manifold import FactorKind, ModelManifold, circle, interval
from forms.sweep import Cycle
from splitting.slices import ContactSliceData, coordinate_slice

from .errors import ScenarioError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


def _require(base: ModelManifold, kinds: Sequence[FactorKind], model: str) -> None:
    found = [f.kind for f in base.factors]
    if found != list(kinds):
        wanted = " x ".join(k.value for k in kinds)
        raise ScenarioError(f"Model {model} needs a {wanted} manifold, got {' x '.join(k.value for k in found)}", "/manifold/factors")


# ----------------------------------------------------------------------
# shared pieces
# ----------------------------------------------------------------------
def solid_angle(dim: int, columns: Sequence[int]) -> BaseForm:
    """(x dy∧dz + y dz∧dx + z dx∧dy)/|p|³ on the given ambient columns; closed away from 0, total 4π on S²."""
    cx, cy, cz = columns
    x, y, z = (coordinate(c) for c in columns)
    s = x * x + y * y + z * z
    inv = 1.0 / (s * sqrt(s))
    return two_form({(cy, cz): x * inv, (cx, cz): -(y * inv), (cx, cy): z * inv}, dim)


def sphere_cycle(name: str, dim: int, columns: Sequence[int], fixed: Optional[Dict[int, float]] = None) -> Cycle:
    """The unit square onto S² (polar angle πs, azimuth 2πt); other columns held at ``fixed``."""
    s, t = coordinate(0), coordinate(1)
    polar = {
        columns[0]: sin(s * math.pi) * cos(t * TWO_PI),
        columns[1]: sin(s * math.pi) * sin(t * TWO_PI),
        columns[2]: cos(s * math.pi),
    }
    fixed = fixed or {}
    comps = [polar[c] if c in polar else constant(fixed.get(c, 0.0)) for c in range(dim)]
    return Cycle(name, tuple(comps), periodic=(False, True))


def torus_cycle(name: str, dim: int, columns: Sequence[int], fixed: Optional[Dict[int, float]] = None) -> Cycle:
    s, t = coordinate(0), coordinate(1)
    square = {columns[0]: s, columns[1]: t}
    fixed = fixed or {}
    return Cycle(name, tuple(square[c] if c in square else constant(fixed.get(c, 0.0)) for c in range(dim)))


def rotating_beta(dim: int, theta1: int, theta2: int, phi: int) -> BaseForm:
    """β₀ = cos(2πφ) dθ₁ - sin(2πφ) dθ₂."""
    angle = coordinate(phi) * TWO_PI
    comps = [constant(0.0)] * dim
    comps[theta1] = cos(angle)
    comps[theta2] = -sin(angle)
    return one_form(comps, dim)


def solid_torus(res: int, name: str, orientation: int = 1) -> ModelManifold:
    """T² x D² with the disc in polar coordinates (θ₁, θ₂, r, φ)."""
    return ModelManifold([circle(res), circle(res), interval(0.0, 1.0, res), circle(res)], orientation, name)


# ----------------------------------------------------------------------
# lutz-t3
# ----------------------------------------------------------------------
@dataclass
class LutzModel:
    bundle: BundleSpec
    alpha: InvariantForm
    gauge: BaseForm
    axis: int = 1


def lutz_t3(base: ModelManifold) -> LutzModel:
    """T³ over T² with α = cos(2πx₁) dx₀ + sin(2πx₁) ψ; Ω = 2π everywhere, Γ = {x₁ = 0} ∪ {x₁ = 1/2}."""
    _require(base, [FactorKind.CIRCLE, FactorKind.CIRCLE], "lutz-t3")
    angle = coordinate(1) * TWO_PI
    bundle = trivial_bundle(base, {"[T2]": torus_cycle("[T2]", 2, (0, 1))}, name="T3")
    beta = one_form([cos(angle), 0.0])
    alpha = contact_pair(beta, sin(angle), bundle)
    return LutzModel(bundle, alpha, dx(0, 2))


# ----------------------------------------------------------------------
# hopf
# ----------------------------------------------------------------------
def hopf_bundle(base: ModelManifold) -> BundleSpec:
    """S³ → S² with curvature half the solid angle form, so ⟨e, [S²]⟩ = -1."""
    _require(base, [FactorKind.SPHERE2], "hopf")
    curvature = solid_angle(3, (0, 1, 2)).scaled(0.5)
    return BundleSpec(base, curvature, {"[S2]": sphere_cycle("[S2]", 3, (0, 1, 2))}, name="Hopf")


# ----------------------------------------------------------------------
# t2s2-k
# ----------------------------------------------------------------------
def t2s2_bundle(base: ModelManifold, k: int) -> BundleSpec:
    """The degree-k bundle over T² x S², curvature -(k/2) times the solid angle on S²."""
    _require(base, [FactorKind.CIRCLE, FactorKind.CIRCLE, FactorKind.SPHERE2], "t2s2")
    curvature = solid_angle(5, (2, 3, 4)).scaled(-0.5 * k)
    generators = {
        "[T2x*]": torus_cycle("[T2x*]", 5, (0, 1), fixed={4: 1.0}),
        "[*xS2]": sphere_cycle("[*xS2]", 5, (2, 3, 4)),
    }
    return BundleSpec(base, curvature, generators, name=f"T2xS2 k={k}")


@dataclass
class T2S2Pieces:
    """B± = T² x D² (B₋ reversed), the neck [-1, 1] x T³ and the B₊ boundary slice."""

    b_plus: Piece
    b_minus: Piece
    neck: NeckAssembly
    boundary: ContactSliceData
    omega_plus: BaseForm

    @property
    def neck_base(self) -> ModelManifold:
        return self.neck.base


def t2s2_pieces(base: ModelManifold, k: int, **neck_kwargs) -> T2S2Pieces:
    """
    Both discs carry rβ₀ with u = ±1; in neck coordinates (t, θ₁, θ₂, φ)
    B₊ sits at r = exp(t + 1) and B₋ at r = exp(1 - t), where the transition
    ψ₋ = ψ₊ - 2πk dφ is the gauge offset of B₋.
    """
    _require(base, [FactorKind.CIRCLE, FactorKind.CIRCLE, FactorKind.SPHERE2], "t2s2")
    res = base.factors[0].resolution

    disc = solid_torus(res, "B+")
    r = coordinate(2)
    disc_beta = rotating_beta(4, 0, 1, 3).times(r)
    plus = contact_pair(disc_beta, 1.0, trivial_bundle(disc, name="B+ x S1"))
    minus_base = solid_torus(res, "B-", orientation=-1)
    minus = contact_pair(disc_beta, -1.0, trivial_bundle(minus_base, name="B- x S1"))

    t, th1, th2, ph = (coordinate(i) for i in range(4))
    neck_base = ModelManifold([interval(-1.0, 1.0, res), circle(res), circle(res), circle(res)], name="neck")
    gamma_minus = dx(3, 4).scaled(-TWO_PI * k)
    neck = NeckAssembly(
        base=neck_base,
        beta=rotating_beta(4, 1, 2, 3),
        gamma_plus=zero(1, 4),
        gamma_minus=gamma_minus,
        omega_ref=zero(2, 4),
        name=f"t2s2 neck k={k}",
        **neck_kwargs,
    )
    b_plus = Piece("B+", plus, (th1, th2, exp(t + 1.0), ph), None, side=-1)
    b_minus = Piece("B-", minus, (th1, th2, exp(1.0 - t), ph), gamma_minus, side=1)

    omega_plus = ext_d(disc_beta)
    boundary = coordinate_slice(disc, 2, 1.0, disc_beta, normal_sign=1.0)
    return T2S2Pieces(b_plus, b_minus, neck, boundary, omega_plus)


@dataclass
class CollarModel:
    collar: ModelManifold
    omega_plus: BaseForm
    beta: BaseForm
    gamma: BaseForm


def t2s2_collar(res: int) -> CollarModel:
    """
    The annulus r in [1/2, 1] of B₊ as [0, 1] x T³ with r = (1 + t)/2:
    ω₊ = d(rβ₀), ω^Γ = dβ₀/2 and γ = tβ₀/2.
    """
    collar = ModelManifold([interval(0.0, 1.0, res), circle(res), circle(res), circle(res)], name="t2s2 collar")
    t = coordinate(0)
    beta = rotating_beta(4, 1, 2, 3)
    omega_plus = ext_d(beta.times(0.5 + t * 0.5))
    return CollarModel(collar, omega_plus, beta, beta.times(t * 0.5))


# ----------------------------------------------------------------------
# contactise-t2d2
# ----------------------------------------------------------------------
@dataclass
class LiouvilleModel:
    bundle: BundleSpec
    u: ScalarField
    lam: BaseForm
    extension: BaseForm
    boundary: Optional[ContactSliceData]


def t2d2_liouville(base: ModelManifold, twisted: bool = True) -> LiouvilleModel:
    """
    T² x D² with u = 1 - r² and λ = rβ₀/(1 - r²), so that uλ = rβ₀ extends
    over r = 1. ``twisted`` adds the curvature -2π dθ₁∧dθ₂ (pairing 1 on [T²]).
    """
    _require(base, [FactorKind.CIRCLE, FactorKind.CIRCLE, FactorKind.INTERVAL, FactorKind.CIRCLE], "t2d2")
    r = coordinate(2)
    u = 1.0 - r * r
    extension = rotating_beta(4, 0, 1, 3).times(r)
    curvature = two_form({(0, 1): -TWO_PI}, 4) if twisted else zero(2, 4)
    generators = {"[T2]": torus_cycle("[T2]", 4, (0, 1), fixed={2: 0.5})}
    bundle = BundleSpec(base, curvature, generators, name="T2xD2 x S1")
    boundary = coordinate_slice(base, 2, 1.0, extension, normal_sign=1.0)
    return LiouvilleModel(bundle, u, extension.times(1.0 / u), extension, boundary)


def hopf_liouville(base: ModelManifold) -> LiouvilleModel:
    """u ≡ 1 and λ = 0 over the Hopf base; contactisation then gives the Boothby-Wang pair."""
    bundle = hopf_bundle(base)
    lam = zero(1, 3)
    return LiouvilleModel(bundle, constant(1.0), lam, lam, None)
