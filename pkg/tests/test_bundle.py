"""
Invariant forms, the contact volume and Euler pairings
"""
import math

import numpy as np
import pytest

from bundle import (
    BundleMismatchError,
    UnknownCycleError,
    change_gauge,
    contact_check,
    contact_pair,
    decompose_alpha,
    euler_pairing,
    identity_check_lemma_volume,
    inv_d,
    inv_wedge,
    omega_volume,
    pairing_table,
    trivial_bundle,
)
from bundle.invariant import BundleSpec, pair_gap
from constructor.boothby import boothby_wang
from constructor.errors import PreconditionError
from forms.fields import coordinate
from forms.forms import dx, one_form, top_value, two_form, zero
from forms.manifold import ModelManifold, interval, torus
from forms.sweep import Cycle
from runner.models import hopf_bundle, t2s2_bundle

TWO_PI = 2.0 * math.pi


def test_lutz_form_is_contact_with_constant_volume(lutz):
    report = contact_check(lutz.alpha)
    assert report.passed
    assert report.min_value == pytest.approx(TWO_PI)
    assert report.details["horizontal_residual"] == 0.0


def test_engine_matches_closed_volume_formula(lutz):
    assert identity_check_lemma_volume(lutz.alpha) < 1e-10


def test_closed_formula_is_constant_on_lutz(lutz):
    beta, u = lutz.alpha.a, lutz.alpha.b.component(())
    omega = omega_volume(beta, u, lutz.bundle.curvature, 1)
    values = top_value(omega, lutz.bundle.base, lutz.bundle.base.sample_points())
    assert np.allclose(values, TWO_PI)


def test_dd_vanishes_on_invariant_forms(lutz):
    twice = inv_d(inv_d(lutz.alpha))
    pts = lutz.bundle.base.sample_points()
    for part in (twice.a, twice.b):
        for f in part.coeffs.values():
            assert np.max(np.abs(f.evaluate(pts))) < 1e-9


def test_gauge_change_round_trip_is_exact(lutz):
    moved = change_gauge(lutz.alpha, lutz.gauge)
    back = change_gauge(moved, -lutz.gauge)
    assert back is lutz.alpha
    assert pair_gap(back, lutz.alpha) == 0.0


def test_gauge_round_trip_compares_offsets_by_value(lutz):
    moved = change_gauge(lutz.alpha, lutz.gauge)
    rebuilt = one_form([-1.0, 0.0])
    assert rebuilt is not lutz.gauge
    assert change_gauge(moved, rebuilt) is lutz.alpha
    other = change_gauge(moved, one_form([0.0, -1.0]))
    assert other is not lutz.alpha
    assert other.gauge_parent is moved


def test_gauge_change_preserves_contact_volume(lutz):
    moved = change_gauge(lutz.alpha, lutz.gauge)
    assert contact_check(moved).min_value == pytest.approx(TWO_PI)
    # ψ' = ψ + dx0 keeps the curvature closed and exact
    assert moved.bundle.closedness_residual() == 0.0


def test_decompose_recovers_beta_and_u(lutz):
    parts = decompose_alpha(lutz.alpha)
    assert parts.regular
    pts = lutz.bundle.base.sample_points()
    assert np.allclose(parts.u.evaluate(pts), np.sin(TWO_PI * pts[:, 1]))
    assert np.allclose(parts.beta.component((0,)).evaluate(pts), np.cos(TWO_PI * pts[:, 1]))
    assert parts.beta.component((1,)).is_zero


def test_lutz_values_at_a_sample_point(lutz):
    parts = decompose_alpha(lutz.alpha)
    point = np.array([[0.3, 0.1]])
    assert parts.beta.component((0,)).evaluate(point)[0] == pytest.approx(0.8090, abs=1e-4)
    assert parts.u.evaluate(point)[0] == pytest.approx(0.5878, abs=1e-4)


def test_inv_d_of_lutz(lutz):
    d_alpha = inv_d(lutz.alpha)
    pts = lutz.bundle.base.sample_points()
    angle = TWO_PI * pts[:, 1]
    # a-part is dβ since the bundle is flat; b-part is -du
    assert np.allclose(d_alpha.a.component((0, 1)).evaluate(pts), TWO_PI * np.sin(angle))
    assert d_alpha.b.component((0,)).is_zero
    assert np.allclose(d_alpha.b.component((1,)).evaluate(pts), -TWO_PI * np.cos(angle))


def test_pure_connection_over_flat_torus_is_not_contact(t2):
    bundle = trivial_bundle(t2)
    report = contact_check(contact_pair(zero(1, 2), 1.0, bundle))
    assert not report.passed
    assert report.min_value == pytest.approx(0.0)


def test_forms_over_different_bundles_do_not_combine(t2):
    a = contact_pair(dx(0, 2), 1.0, trivial_bundle(t2))
    b = contact_pair(dx(0, 2), 1.0, trivial_bundle(t2))
    with pytest.raises(BundleMismatchError):
        inv_wedge(a, b)


def test_bundle_validation():
    odd = ModelManifold([interval(0, 1, 4)])
    with pytest.raises(ValueError):
        trivial_bundle(odd)
    with pytest.raises(ValueError):
        BundleSpec(torus(2, 4), one_form([1.0, 0.0]))


# ----------------------------------------------------------------------
# Euler pairings
# ----------------------------------------------------------------------
def test_hopf_pairing_is_minus_one(s2):
    bundle = hopf_bundle(s2)
    assert euler_pairing(bundle, "[S2]") == pytest.approx(-1.0, abs=1e-3)
    assert bundle.validate()["closed"]


def test_hopf_connection_is_boothby_wang(s2):
    bundle = hopf_bundle(s2)
    alpha = boothby_wang(bundle)
    assert alpha.b.component(()).constant_value == 1.0
    assert contact_check(alpha).min_value == pytest.approx(0.5)


@pytest.mark.parametrize("k", [0, 1, 2, 5])
def test_t2s2_pairings(t2s2_base, k):
    table = pairing_table(t2s2_bundle(t2s2_base, k))
    assert table["[T2x*]"]["nearest"] == 0
    assert table["[*xS2]"]["nearest"] == k
    assert all(entry["integral"] for entry in table.values())


def test_unknown_cycle(s2):
    with pytest.raises(UnknownCycleError):
        euler_pairing(hopf_bundle(s2), "[T2]")


def test_twisted_torus_pairing():
    base = torus(2, 8)

    cycle = Cycle("[T2]", (coordinate(0), coordinate(1)))
    bundle = BundleSpec(base, two_form({(0, 1): -3 * TWO_PI}, 2), {"[T2]": cycle})
    assert euler_pairing(bundle, "[T2]") == pytest.approx(3.0)


def test_boothby_wang_needs_a_nondegenerate_curvature(t2):
    with pytest.raises(PreconditionError):
        boothby_wang(trivial_bundle(t2))
