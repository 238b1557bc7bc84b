"""
Scalar fields on ambient coordinates.

A field wraps a sympy expression in the coordinate symbols x0, x1, ...
Partials come from ``sympy.diff`` and stay exact to every order. Sampling
goes through ``sympy.lambdify`` with common-subexpression elimination; the
compiled function is cached per expression and ambient dimension.

One-variable piecewise polynomials from scipy (PPoly/BPoly) enter as
``sympy.Piecewise`` expressions in the same local bases scipy evaluates in,
so their derivatives are the derivative polynomials.
"""

import logging
from functools import lru_cache
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp
from scipy.interpolate import BPoly, PPoly

from .config import FD_STEP
from .errors import ArityMismatch

logger = logging.getLogger(__name__)


def as_points(points) -> np.ndarray:
    """Coerce a point or a batch of points to a float array of shape (N, D)."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    return arr


@lru_cache(maxsize=None)
def symbol(index: int) -> sp.Symbol:
    return sp.Symbol(f"x{index}", real=True)


def symbols(dim: int) -> Tuple[sp.Symbol, ...]:
    return tuple(symbol(i) for i in range(dim))


def _index(sym: sp.Symbol) -> int:
    return int(sym.name[1:])


def _number(value: float) -> sp.Expr:
    value = float(value)
    if value.is_integer():
        return sp.Integer(int(value))
    return sp.Float(value)


class ScalarField:
    """A real-valued, deterministic function of ambient coordinates."""

    def __init__(self, expr, name: Optional[str] = None):
        self.expr: sp.Expr = sp.sympify(expr)
        self.name = name
        self._partials: Dict[int, "ScalarField"] = {}
        self._constant: Optional[Tuple[Optional[float]]] = None

    # ------------------------------------------------------------------
    # evaluation
    # ------------------------------------------------------------------
    def __call__(self, points) -> np.ndarray:
        return self.evaluate(points)

    def evaluate(self, points) -> np.ndarray:
        return evaluate_many([self], points)[0]

    def gradient(self, points, dim: Optional[int] = None) -> np.ndarray:
        """Gradient in ambient coordinates, shape (N, D)."""
        pts = as_points(points)
        dim = pts.shape[1] if dim is None else dim
        return np.stack(evaluate_many([self.partial(j) for j in range(dim)], pts), axis=1)

    # ------------------------------------------------------------------
    # differentiation
    # ------------------------------------------------------------------
    def partial(self, j: int) -> "ScalarField":
        hit = self._partials.get(j)
        if hit is None:
            hit = ScalarField(sp.diff(self.expr, symbol(j)))
            self._partials[j] = hit
        return hit

    # ------------------------------------------------------------------
    # structure
    # ------------------------------------------------------------------
    @property
    def coordinates(self) -> List[int]:
        """Ambient axes the field depends on."""
        return sorted(_index(s) for s in self.expr.free_symbols)

    @property
    def constant_value(self) -> Optional[float]:
        if self._constant is None:
            value = None
            if not self.expr.free_symbols:
                try:
                    value = float(self.expr)
                except TypeError:
                    value = None
            self._constant = (value,)
        return self._constant[0]

    @property
    def is_zero(self) -> bool:
        # Float(0.0) and Integer(0) compare unequal in sympy, so go through float
        return self.expr.is_Number and float(self.expr) == 0.0

    def compose(self, components: Sequence) -> "ScalarField":
        """Pull back along a map given by component fields (one per ambient axis)."""
        if not self.expr.free_symbols:
            return self
        return ScalarField(self.expr.xreplace({symbol(i): wrap(c).expr for i, c in enumerate(components)}))

    def lift(self, columns: Sequence[int]) -> "ScalarField":
        """Re-read this field on a larger ambient space through the given columns."""
        if not self.expr.free_symbols:
            return self
        return ScalarField(self.expr.xreplace({symbol(i): symbol(c) for i, c in enumerate(columns)}))

    def same_as(self, other) -> bool:
        """Structural equality of the underlying expressions."""
        return self.expr == wrap(other).expr

    def __repr__(self):
        return self.name if self.name is not None else str(self.expr)

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------
    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return add(self, scale(-1, other))

    def __rsub__(self, other):
        return add(other, scale(-1, self))

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __neg__(self):
        return scale(-1, self)


ZERO = ScalarField(sp.S.Zero)
ONE = ScalarField(sp.S.One)


# ----------------------------------------------------------------------
# constructors
# ----------------------------------------------------------------------
def wrap(x) -> ScalarField:
    if isinstance(x, ScalarField):
        return x
    if isinstance(x, sp.Basic):
        return ScalarField(x)
    return constant(x)


def constant(value: float) -> ScalarField:
    value = float(value)
    if value == 0.0:
        return ZERO
    if value == 1.0:
        return ONE
    return ScalarField(_number(value))


def coordinate(index: int) -> ScalarField:
    return ScalarField(symbol(int(index)))


def add(a, b) -> ScalarField:
    a, b = wrap(a), wrap(b)
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    return ScalarField(a.expr + b.expr)


def scale(c: float, f) -> ScalarField:
    f = wrap(f)
    c = float(c)
    if c == 0.0 or f.is_zero:
        return ZERO
    if c == 1.0:
        return f
    return ScalarField(_number(c) * f.expr)


def mul(a, b) -> ScalarField:
    a, b = wrap(a), wrap(b)
    if a.is_zero or b.is_zero:
        return ZERO
    return ScalarField(a.expr * b.expr)


def div(a, b) -> ScalarField:
    a, b = wrap(a), wrap(b)
    if a.is_zero:
        return ZERO
    return ScalarField(a.expr / b.expr)


def sin(f) -> ScalarField:
    return ScalarField(sp.sin(wrap(f).expr))


def cos(f) -> ScalarField:
    return ScalarField(sp.cos(wrap(f).expr))


def exp(f) -> ScalarField:
    return ScalarField(sp.exp(wrap(f).expr))


def log(f) -> ScalarField:
    return ScalarField(sp.log(wrap(f).expr))


def sqrt(f) -> ScalarField:
    return ScalarField(sp.sqrt(wrap(f).expr))


def atan2(y, x) -> ScalarField:
    return ScalarField(sp.atan2(wrap(y).expr, wrap(x).expr))


# ----------------------------------------------------------------------
# piecewise polynomials
# ----------------------------------------------------------------------
_SPLINE_ARG = sp.Dummy("t", real=True)


def _bernstein_piece(coeffs: np.ndarray, left: float, right: float) -> sp.Expr:
    k = len(coeffs) - 1
    s = (_SPLINE_ARG - _number(left)) / _number(right - left)
    terms = [
        _number(c * comb(k, a)) * s ** a * (1 - s) ** (k - a)
        for a, c in enumerate(coeffs) if c != 0.0
    ]
    return sp.Add(*terms)


def _power_piece(coeffs: np.ndarray, left: float) -> sp.Expr:
    k = len(coeffs) - 1
    shifted = _SPLINE_ARG - _number(left)
    return sp.Add(*[_number(c) * shifted ** (k - a) for a, c in enumerate(coeffs) if c != 0.0])


@lru_cache(maxsize=None)
def _piecewise(poly) -> sp.Expr:
    """The polynomial as a Piecewise in a placeholder variable, extrapolating at both ends."""
    if isinstance(poly, BPoly):
        pieces = [_bernstein_piece(poly.c[:, i], poly.x[i], poly.x[i + 1]) for i in range(poly.c.shape[1])]
    elif isinstance(poly, PPoly):
        pieces = [_power_piece(poly.c[:, i], poly.x[i]) for i in range(poly.c.shape[1])]
    else:
        raise TypeError(f"Expected a scipy PPoly or BPoly, got {type(poly).__name__}")
    args = [(piece, _SPLINE_ARG < _number(poly.x[i + 1])) for i, piece in enumerate(pieces[:-1])]
    args.append((pieces[-1], True))
    return sp.Piecewise(*args)


def spline(poly, arg) -> ScalarField:
    """A one-variable piecewise polynomial (scipy PPoly/BPoly) applied to a field."""
    return ScalarField(_piecewise(poly).xreplace({_SPLINE_ARG: wrap(arg).expr}))


# ----------------------------------------------------------------------
# sampling
# ----------------------------------------------------------------------
@lru_cache(maxsize=4096)
def _compiled(exprs: Tuple[sp.Expr, ...], dim: int):
    logger.debug(f"Compiling {len(exprs)} field(s) on R^{dim}")
    return sp.lambdify(symbols(dim), list(exprs), modules="numpy", cse=True)


def evaluate_many(fields: Sequence[ScalarField], points) -> List[np.ndarray]:
    """Evaluate several fields on one batch through a single compiled function."""
    pts = as_points(points)
    n, dim = pts.shape
    fields = [wrap(f) for f in fields]
    if not fields:
        return []
    for f in fields:
        coords = f.coordinates
        if coords and coords[-1] >= dim:
            raise ArityMismatch(f"Field {f!r} reads x{coords[-1]} but the points live in R^{dim}")
    fn = _compiled(tuple(f.expr for f in fields), dim)
    with np.errstate(all="ignore"):
        values = fn(*pts.T)
    return [np.broadcast_to(np.asarray(v, dtype=float), (n,)) for v in values]


def check_partials(field: ScalarField, points, dim: Optional[int] = None, h: float = FD_STEP) -> float:
    """Largest normalized gap between the symbolic partials and central differences of the samples."""
    pts = as_points(points)
    dim = pts.shape[1] if dim is None else dim
    exact = field.gradient(pts, dim)
    worst = 0.0
    for j in range(dim):
        plus, minus = pts.copy(), pts.copy()
        plus[:, j] += h
        minus[:, j] -= h
        numeric = (field.evaluate(plus) - field.evaluate(minus)) / (2.0 * h)
        gap = np.abs(exact[:, j] - numeric) / (1.0 + np.abs(exact[:, j]))
        worst = max(worst, float(np.max(gap)))
    return worst
