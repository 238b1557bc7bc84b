"""
Differential forms on ambient Euclidean space.

A form of degree k on R^D is a sparse map from strictly increasing index
tuples of length k to scalar fields. Forms on a model manifold are ambient
forms restricted to tangent frames.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation

from .errors import ArityMismatch
from .fields import ONE, ScalarField, add, as_points, evaluate_many, mul, scale, wrap
from .manifold import Frame, ModelManifold

logger = logging.getLogger(__name__)

Index = Tuple[int, ...]


def _sort_sign(indices: Sequence[int]) -> Tuple[int, Index]:
    """Sign of the permutation sorting ``indices`` and the sorted tuple; 0 on repeats."""
    idx = tuple(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    if len(idx) < 2:
        return 1, idx
    order = sorted(range(len(idx)), key=idx.__getitem__)
    return Permutation(order, size=len(idx)).signature(), tuple(idx[i] for i in order)


@dataclass
class BaseForm:
    """A degree-``degree`` form on R^``dim`` with field coefficients."""

    degree: int
    dim: int
    coeffs: Dict[Index, ScalarField] = field(default_factory=dict)

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("form degree must be non-negative")
        for idx in self.coeffs:
            if len(idx) != self.degree or list(idx) != sorted(set(idx)) or (idx and idx[-1] >= self.dim):
                raise ValueError(f"Invalid index {idx} for a {self.degree}-form on R^{self.dim}")
        self.coeffs = {k: v for k, v in self.coeffs.items() if not v.is_zero}

    # ------------------------------------------------------------------
    # structure
    # ------------------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def component(self, idx: Iterable[int]) -> ScalarField:
        sign, key = _sort_sign(tuple(idx))
        if sign == 0:
            return wrap(0.0)
        return scale(sign, self.coeffs.get(key, wrap(0.0)))

    def same_as(self, other: "BaseForm") -> bool:
        """True when the coefficients agree as expressions."""
        if other.degree != self.degree or other.dim != self.dim or set(other.coeffs) != set(self.coeffs):
            return False
        return all(v.same_as(other.coeffs[k]) for k, v in self.coeffs.items())

    # ------------------------------------------------------------------
    # linear structure
    # ------------------------------------------------------------------
    def _check(self, other: "BaseForm") -> None:
        if other.degree != self.degree or other.dim != self.dim:
            raise ArityMismatch(
                f"Cannot combine a {self.degree}-form on R^{self.dim} with a {other.degree}-form on R^{other.dim}"
            )

    def __add__(self, other: "BaseForm") -> "BaseForm":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = add(out[k], v) if k in out else v
        return BaseForm(self.degree, self.dim, out)

    def __neg__(self) -> "BaseForm":
        return BaseForm(self.degree, self.dim, {k: scale(-1.0, v) for k, v in self.coeffs.items()})

    def __sub__(self, other: "BaseForm") -> "BaseForm":
        return self + (-other)

    def scaled(self, c: float) -> "BaseForm":
        return BaseForm(self.degree, self.dim, {k: scale(c, v) for k, v in self.coeffs.items()})

    def times(self, f) -> "BaseForm":
        """Multiply every coefficient by a scalar field."""
        f = wrap(f)
        return BaseForm(self.degree, self.dim, {k: mul(f, v) for k, v in self.coeffs.items()})

    def __mul__(self, other) -> "BaseForm":
        if isinstance(other, ScalarField):
            return self.times(other)
        return self.scaled(float(other))

    __rmul__ = __mul__

    def __xor__(self, other: "BaseForm") -> "BaseForm":
        return wedge(self, other)

    def __repr__(self):
        return f"BaseForm(degree={self.degree}, dim={self.dim}, terms={sorted(self.coeffs)})"


# ----------------------------------------------------------------------
# constructors
# ----------------------------------------------------------------------
def zero(degree: int, dim: int) -> BaseForm:
    return BaseForm(degree, dim, {})


def function(f, dim: int) -> BaseForm:
    return BaseForm(0, dim, {(): wrap(f)})


def dx(i: int, dim: int) -> BaseForm:
    return BaseForm(1, dim, {(i,): ONE})


def one_form(components: Sequence, dim: Optional[int] = None) -> BaseForm:
    """One-form ``sum_i components[i] dx_i``."""
    dim = len(components) if dim is None else dim
    return BaseForm(1, dim, {(i,): wrap(c) for i, c in enumerate(components)})


def two_form(entries: Dict[Tuple[int, int], object], dim: int) -> BaseForm:
    coeffs: Dict[Index, ScalarField] = {}
    for (i, j), c in entries.items():
        sign, key = _sort_sign((i, j))
        if sign == 0:
            raise ValueError(f"Repeated index in two-form entry {(i, j)}")
        term = scale(sign, wrap(c))
        coeffs[key] = add(coeffs[key], term) if key in coeffs else term
    return BaseForm(2, dim, coeffs)


# ----------------------------------------------------------------------
# algebra
# ----------------------------------------------------------------------
def wedge(a: BaseForm, b: BaseForm) -> BaseForm:
    if a.dim != b.dim:
        raise ArityMismatch(f"Wedge of forms on R^{a.dim} and R^{b.dim}")
    degree = a.degree + b.degree
    if degree > a.dim:
        return zero(degree, a.dim)
    out: Dict[Index, ScalarField] = {}
    for ia, fa in a.coeffs.items():
        for ib, fb in b.coeffs.items():
            sign, key = _sort_sign(ia + ib)
            if sign == 0:
                continue
            term = scale(sign, mul(fa, fb))
            out[key] = add(out[key], term) if key in out else term
    return BaseForm(degree, a.dim, out)


def power(a: BaseForm, k: int) -> BaseForm:
    """k-fold wedge power; the 0-th power is the constant function 1."""
    result = function(1.0, a.dim)
    for _ in range(k):
        result = wedge(result, a)
    return result


def ext_d(a: BaseForm) -> BaseForm:
    """Exterior derivative through the symbolic partials of the coefficients."""
    if a.degree >= a.dim:
        return zero(a.degree + 1, a.dim)
    out: Dict[Index, ScalarField] = {}
    for idx, f in a.coeffs.items():
        for j in range(a.dim):
            if j in idx:
                continue
            df = f.partial(j)
            if df.is_zero:
                continue
            sign, key = _sort_sign((j,) + idx)
            term = scale(sign, df)
            out[key] = add(out[key], term) if key in out else term
    return BaseForm(a.degree + 1, a.dim, out)


def lift(a: BaseForm, target, columns: Sequence[int]) -> BaseForm:
    """Pull back along the projection onto ``columns`` of a larger ambient space.

    ``target`` is the larger ModelManifold or its ambient dimension.
    """
    dim = target.ambient_dim if isinstance(target, ModelManifold) else int(target)
    columns = tuple(columns)
    if len(columns) != a.dim:
        raise ArityMismatch(f"Lift needs {a.dim} columns, got {len(columns)}")
    out: Dict[Index, ScalarField] = {}
    for idx, f in a.coeffs.items():
        sign, key = _sort_sign(tuple(columns[i] for i in idx))
        term = scale(sign, f.lift(columns))
        out[key] = add(out[key], term) if key in out else term
    return BaseForm(a.degree, dim, out)


def pullback(a: BaseForm, components: Tuple[ScalarField, ...], dim: int) -> BaseForm:
    """
    Pull back along the map R^dim -> R^a.dim whose i-th component is
    ``components[i]``.
    """
    components = tuple(wrap(c) for c in components)
    if len(components) != a.dim:
        raise ArityMismatch(f"Pullback needs {a.dim} components, got {len(components)}")
    differentials = [ext_d(function(c, dim)) for c in components]
    out = zero(a.degree, dim)
    for idx, f in a.coeffs.items():
        term = function(f.compose(components), dim)
        for i in idx:
            term = wedge(term, differentials[i])
        out = out + term
    return out


# ----------------------------------------------------------------------
# evaluation
# ----------------------------------------------------------------------
def coefficient_values(a: BaseForm, points) -> Dict[Index, np.ndarray]:
    """Samples of every coefficient of ``a`` from one compiled function."""
    keys = list(a.coeffs)
    return dict(zip(keys, evaluate_many([a.coeffs[k] for k in keys], points)))


def _contract(a: BaseForm, values: Dict[Index, np.ndarray], frames: np.ndarray) -> np.ndarray:
    total = np.zeros(frames.shape[0])
    for idx, v in values.items():
        if a.degree == 0:
            total += v
        elif a.degree == 1:
            total += v * frames[:, 0, idx[0]]
        else:
            total += v * np.linalg.det(frames[:, :, list(idx)])
    return total


def eval_on_frame(a: BaseForm, points, frames: Optional[np.ndarray] = None):
    """
    Value of ``a`` on k-tuples of ambient vectors.

    ``frames`` has shape (N, k, D) with k equal to the form degree. Passing a
    single Frame instead of points returns a float.
    """
    if isinstance(points, Frame):
        fr = points
        return float(eval_on_frame(a, fr.point[None, :], fr.vectors[None, :, :])[0])
    pts = as_points(points)
    if frames is None:
        frames = np.zeros((pts.shape[0], 0, pts.shape[1]))
    frames = np.asarray(frames, dtype=float)
    if frames.ndim == 2:
        frames = frames[None, :, :]
    if frames.shape[1] != a.degree:
        raise ArityMismatch(f"A {a.degree}-form needs {a.degree} vectors, got {frames.shape[1]}")
    if frames.shape[2] != a.dim or pts.shape[1] != a.dim:
        raise ArityMismatch(f"Form on R^{a.dim} evaluated on R^{pts.shape[1]} data")
    return _contract(a, coefficient_values(a, pts), frames)


def top_value(a: BaseForm, m: ModelManifold, points) -> np.ndarray:
    """Value of a top-degree form on the oriented frames of ``m``."""
    if a.degree != m.intrinsic_dim:
        raise ArityMismatch(f"A {a.degree}-form is not top degree on a {m.intrinsic_dim}-manifold")
    pts = as_points(points)
    return eval_on_frame(a, pts, m.frames(pts))


def tangential_max(a: BaseForm, m: ModelManifold, points=None) -> float:
    """Largest |a| over all k-subsets of the tangent frame vectors at the points."""
    pts = m.sample_points() if points is None else as_points(points)
    if a.is_zero or a.degree > m.intrinsic_dim or pts.shape[0] == 0:
        return 0.0
    frames = m.frames(pts)
    values = coefficient_values(a, pts)
    worst = 0.0
    for subset in itertools.combinations(range(m.intrinsic_dim), a.degree):
        contracted = _contract(a, values, frames[:, list(subset), :])
        worst = max(worst, float(np.max(np.abs(contracted))))
    return worst


def covector_matrix(one_forms: Sequence[BaseForm], points, frames: np.ndarray) -> np.ndarray:
    """Values of one-forms on each frame vector, shape (N, len(one_forms), k)."""
    pts = as_points(points)
    k = frames.shape[1]
    out = np.zeros((pts.shape[0], len(one_forms), k))
    for r, w in enumerate(one_forms):
        values = coefficient_values(w, pts)
        for j in range(k):
            out[:, r, j] = _contract(w, values, frames[:, j:j + 1, :])
    return out
