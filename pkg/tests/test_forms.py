"""
Exterior calculus on model manifolds
"""
import itertools
import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.interpolate import BPoly

from forms.errors import ArityMismatch, ConstraintViolation, EmptyRegionError
from forms.fields import ScalarField, check_partials, constant, coordinate, cos, exp, sin, spline
from forms.forms import BaseForm, dx, ext_d, function, lift, one_form, pullback, tangential_max, top_value, two_form, wedge
from forms.manifold import ModelManifold, circle, frame_at, interval, kernel_frame, sphere2, torus
from forms.pool import SweepManager
from forms.sweep import Cycle, integrate_cycle, positivity_sweep, worst_of
from runner.models import solid_angle, sphere_cycle

TWO_PI = 2.0 * math.pi


def random_points(dim, n=50, seed=0):
    return np.random.default_rng(seed).uniform(-1.0, 1.0, size=(n, dim))


# ----------------------------------------------------------------------
# algebra
# ----------------------------------------------------------------------
def test_wedge_of_one_forms_is_antisymmetric():
    x = coordinate(0)
    a = one_form([x, 1.0, 0.0])
    b = one_form([0.0, sin(x), 2.0])
    pts = random_points(3)
    ab = wedge(a, b)
    ba = wedge(b, a)
    for idx in ab.coeffs:
        assert np.allclose(ab.component(idx).evaluate(pts), -ba.component(idx).evaluate(pts))


def test_wedge_with_itself_vanishes_for_odd_degree():
    a = one_form([coordinate(1), coordinate(0), 1.0])
    assert wedge(a, a).is_zero


def test_component_sign_follows_permutation():
    w = two_form({(0, 1): 3.0}, 3)
    assert w.component((1, 0)).constant_value == -3.0
    assert w.component((0, 0)).is_zero


def test_mismatched_forms_raise():
    with pytest.raises(ArityMismatch):
        dx(0, 2) + dx(0, 3)
    with pytest.raises(ArityMismatch):
        wedge(dx(0, 2), dx(0, 3))


@settings(max_examples=25, deadline=None)
@given(
    a=st.floats(min_value=-3, max_value=3),
    b=st.floats(min_value=-3, max_value=3),
    c=st.floats(min_value=-3, max_value=3),
)
def test_d_squared_vanishes(a, b, c):
    x, y, z = (coordinate(i) for i in range(3))
    f = sin(x * a) * exp(y * b) + cos(z * c) * x
    dd = ext_d(ext_d(function(f, 3)))
    pts = random_points(3)
    for g in dd.coeffs.values():
        assert np.max(np.abs(g.evaluate(pts))) < 1e-9


def test_leibniz_rule():
    x, y = coordinate(0), coordinate(1)
    a = one_form([y * y, sin(x), 0.0])
    b = one_form([0.0, x, exp(y)])
    lhs = ext_d(wedge(a, b))
    rhs = wedge(ext_d(a), b) - wedge(a, ext_d(b))
    pts = random_points(3)
    for idx in set(lhs.coeffs) | set(rhs.coeffs):
        assert np.allclose(lhs.component(idx).evaluate(pts), rhs.component(idx).evaluate(pts))


# ----------------------------------------------------------------------
# randomized identities on T^4 and T^2 x S^2
# ----------------------------------------------------------------------
T4 = torus(4, 4)
T2S2 = ModelManifold([circle(4), circle(4), sphere2(6)], name="T2xS2")
SUITE_TOL = 1e-10


@st.composite
def smooth_forms(draw, dim, degree):
    """Sparse forms whose coefficients are trigonometric polynomials plus a cosine bump."""
    coeffs = {}
    for idx in itertools.combinations(range(dim), degree):
        if not draw(st.booleans()):
            continue
        amp = draw(st.floats(min_value=-2, max_value=2))
        phase = draw(st.floats(min_value=0, max_value=1))
        freqs = draw(st.lists(st.integers(min_value=-2, max_value=2), min_size=dim, max_size=dim))
        arg = sum((coordinate(i) * (TWO_PI * k) for i, k in enumerate(freqs) if k), constant(phase))
        bias = draw(st.floats(min_value=-1, max_value=1))
        j = draw(st.integers(min_value=0, max_value=dim - 1))
        coeffs[idx] = sin(arg) * amp + cos(coordinate(j) * TWO_PI) * bias
    return BaseForm(degree, dim, coeffs)


def forms_on(m, max_degree=2):
    dim = m.ambient_dim
    return st.integers(min_value=0, max_value=max_degree).flatmap(lambda p: smooth_forms(dim, p))


@pytest.mark.parametrize("m", [T4, T2S2], ids=["T4", "T2xS2"])
@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_randomized_algebraic_identities(m, data):
    a = data.draw(forms_on(m), label="a")
    b = data.draw(forms_on(m), label="b")
    p, q = a.degree, b.degree

    assert tangential_max(ext_d(ext_d(a)), m) <= SUITE_TOL

    leibniz = ext_d(wedge(a, b)) - (wedge(ext_d(a), b) + wedge(a, ext_d(b)).scaled((-1) ** p))
    assert tangential_max(leibniz, m) <= SUITE_TOL

    graded = wedge(a, b) - wedge(b, a).scaled((-1) ** (p * q))
    assert tangential_max(graded, m) <= SUITE_TOL


@settings(max_examples=25, deadline=None)
@given(eta=smooth_forms(2, 1))
def test_exact_forms_integrate_to_zero_over_the_torus(eta):
    s, t = coordinate(0), coordinate(1)
    assert abs(integrate_cycle(ext_d(eta), Cycle("T2", (s, t)))) < 1e-9


def test_graded_commutativity_beyond_one_forms():
    x, y = coordinate(0), coordinate(1)
    a = two_form({(0, 1): sin(x), (2, 3): y}, 4)
    b = two_form({(2, 3): exp(y), (0, 1): 1.0}, 4)
    c = one_form([x, 0.0, 0.0, cos(y)])
    e = one_form([0.0, y * y, 1.0, 0.0])
    three = wedge(a, c)
    pts = random_points(4)
    cases = [(wedge(a, b), wedge(b, a), 1.0), (three, wedge(c, a), 1.0), (wedge(three, e), wedge(e, three), -1.0)]
    for lhs, rhs, sign in cases:
        assert not lhs.is_zero
        for idx in set(lhs.coeffs) | set(rhs.coeffs):
            assert np.allclose(lhs.component(idx).evaluate(pts), sign * rhs.component(idx).evaluate(pts))


def test_partials_are_symbolic_and_match_central_differences():
    field = sin(coordinate(0)) * coordinate(1)
    pts = random_points(2)
    assert np.allclose(field.partial(0).evaluate(pts), np.cos(pts[:, 0]) * pts[:, 1], rtol=1e-14, atol=0)
    assert field.partial(2).is_zero
    assert check_partials(field, pts) < 1e-6


def test_float_zero_counts_as_zero():
    assert ScalarField(sp.Float(0.0)).is_zero
    assert (coordinate(0) - coordinate(0)).is_zero
    assert not coordinate(0).is_zero


def test_spline_matches_scipy_with_its_derivative():
    poly = BPoly.from_derivatives([0.0, 0.3, 1.0], [[0.0, 1.0, 0.0], [0.5, 0.0, 0.0], [1.0, 0.0, 0.0]])
    f = spline(poly, coordinate(0))
    x = np.linspace(-0.2, 1.2, 57)
    pts = x[:, None]
    assert np.allclose(f.evaluate(pts), poly(x), rtol=1e-12, atol=1e-14)
    assert np.allclose(f.partial(0).evaluate(pts), poly.derivative()(x), rtol=1e-12, atol=1e-12)
    assert np.allclose(f.partial(0).partial(0).evaluate(pts), poly.derivative(2)(x), rtol=1e-10, atol=1e-10)


def test_fields_reading_missing_axes_raise():
    with pytest.raises(ArityMismatch):
        coordinate(3).evaluate(random_points(2))


@pytest.mark.parametrize(
    "order, sign",
    [((0, 1, 2), 1), ((1, 0, 2), -1), ((2, 0, 1), 1), ((2, 1, 0), -1), ((1, 2, 0), 1)],
)
def test_wedge_of_differentials_carries_the_permutation_sign(order, sign):
    form = function(1.0, 3)
    for i in order:
        form = wedge(form, dx(i, 3))
    assert form.component((0, 1, 2)).constant_value == sign


def test_lift_and_pullback_agree_with_projection():
    a = one_form([coordinate(1), 0.0])
    lifted = lift(a, 4, (2, 3))
    assert lifted.component((2,)).evaluate(np.array([[0.0, 0.0, 0.0, 5.0]]))[0] == 5.0
    # pullback of x1 dx0 along (s, t) -> (t², s) is s d(t²) = 2st dt
    s, t = coordinate(0), coordinate(1)
    pulled = pullback(a, (t * t, s), 2)
    pts = random_points(2)
    assert np.allclose(pulled.component((1,)).evaluate(pts), 2 * pts[:, 0] * pts[:, 1])
    assert pulled.component((0,)).is_zero


# ----------------------------------------------------------------------
# manifolds
# ----------------------------------------------------------------------
def test_sphere_frames_are_outward_oriented(s2):
    pts = s2.sample_points()
    values = top_value(solid_angle(3, (0, 1, 2)), s2, pts)
    assert np.allclose(values, 1.0)


def test_reversed_orientation_flips_top_values(t2):
    area = wedge(dx(0, 2), dx(1, 2))
    pts = t2.sample_points()
    assert np.allclose(top_value(area, t2, pts), 1.0)
    assert np.allclose(top_value(area, t2.reversed(), pts), -1.0)


def test_frame_at_rejects_points_off_the_sphere(s2):
    with pytest.raises(ConstraintViolation):
        frame_at(s2, [0.0, 0.0, 2.0])
    assert frame_at(s2, [0.0, 0.0, 1.0]).vectors.shape == (2, 3)


def test_interval_samples_at_midpoints():
    m = ModelManifold([interval(-1.0, 1.0, 4)])
    assert np.allclose(m.sample_points()[:, 0], [-0.75, -0.25, 0.25, 0.75])


def test_scaled_resolution_has_a_floor():
    m = torus(2, 8).scaled(0.1)
    assert m.resolution == [2, 2]


def test_tangential_max_sees_only_tangent_directions(s2):
    # near the equator the tangent plane contains the z axis
    assert 0.7 < tangential_max(dx(2, 3), s2) <= 1.0 + 1e-12
    assert tangential_max(dx(0, 3).scaled(0.0), s2) == 0.0


def test_kernel_frame_completes_positively(t2):
    pts = t2.sample_points()
    frames = t2.frames(pts)
    covectors = np.ones((pts.shape[0], 1, 2))
    kernel = kernel_frame(frames, covectors)
    full = np.concatenate([frames[:, :1, :] * 0 + np.array([1.0, 1.0]) / math.sqrt(2), kernel], axis=1)
    assert np.all(np.linalg.det(full) > 0)


# ----------------------------------------------------------------------
# sweeps and cycles
# ----------------------------------------------------------------------
def test_positivity_sweep_reports_the_first_minimum(t2):
    f = cos(coordinate(0) * TWO_PI) + 2.0
    area = wedge(dx(0, 2), dx(1, 2)).times(f)
    report = positivity_sweep(area, t2, label="shifted cosine")
    assert report.passed
    assert report.min_value == pytest.approx(1.0)
    assert report.argmin[0] == pytest.approx(0.5)
    assert report.resolution == [16, 16]
    assert report.samples == 256


def test_positivity_sweep_fails_on_sign_change(t2):
    area = wedge(dx(0, 2), dx(1, 2)).times(cos(coordinate(0) * TWO_PI))
    report = positivity_sweep(area, t2)
    assert not report.passed
    assert report.min_value == pytest.approx(-1.0)


def test_sweep_is_independent_of_worker_count(t2):
    area = wedge(dx(0, 2), dx(1, 2)).times(sin(coordinate(0) * 3.0) + coordinate(1))
    single = positivity_sweep(area, t2, jobs=1)
    threaded = positivity_sweep(area, t2, jobs=4)
    assert single.min_value == threaded.min_value
    assert single.argmin == threaded.argmin


def test_manager_batches_in_order():
    manager = SweepManager(num_workers=3, batch_size=7)
    with manager:
        values = manager.map(lambda s: np.arange(s.start, s.stop, dtype=float), 30)
    assert np.array_equal(values, np.arange(30, dtype=float))


def test_empty_mask_raises(t2):
    area = wedge(dx(0, 2), dx(1, 2))
    with pytest.raises(EmptyRegionError):
        positivity_sweep(area, t2, mask=np.zeros(256, dtype=bool))


def test_worst_of_keeps_the_smallest(t2):
    area = wedge(dx(0, 2), dx(1, 2))
    a = positivity_sweep(area, t2, label="a")
    b = positivity_sweep(area.scaled(0.5), t2, label="b")
    combined = worst_of([a, b], label="both")
    assert combined.min_value == pytest.approx(0.5)
    assert combined.details["worst_label"] == "b"


def test_solid_angle_integrates_to_four_pi():
    omega = solid_angle(3, (0, 1, 2))
    assert integrate_cycle(omega, sphere_cycle("S2", 3, (0, 1, 2))) == pytest.approx(4 * math.pi, rel=1e-4)


def test_torus_cycle_area():
    s, t = coordinate(0), coordinate(1)
    area = wedge(dx(0, 2), dx(1, 2)).scaled(3.0)
    assert integrate_cycle(area, Cycle("T2", (s, t))) == pytest.approx(3.0)


def test_degenerate_cycle_warns():
    area = wedge(dx(0, 2), dx(1, 2))
    with pytest.warns(UserWarning):
        assert integrate_cycle(area, Cycle("point", (0.0, 0.0))) == 0.0


def test_cycle_must_match_form_dimension():
    with pytest.raises(ArityMismatch):
        integrate_cycle(two_form({(0, 1): 1.0}, 3), Cycle("T2", (coordinate(0), coordinate(1))))


def test_product_manifold_columns():
    m = ModelManifold([circle(4), interval(0, 1, 4)]).product(ModelManifold([circle(4)]))
    assert m.ambient_dim == 3
    assert m.columns(2) == (2,)
