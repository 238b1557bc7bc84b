"""
Profiles, collars, necks, gluing, tuning and contactisation
"""
import math

import numpy as np
import pytest
from pydantic import ValidationError

from bundle import contact_check, contact_pair, trivial_bundle
from bundle.invariant import pair_gap
from constructor import (
    PostconditionError,
    PreconditionError,
    ProfileParams,
    ProfileValidationError,
    SeamMismatchError,
    TuningFailure,
    assemble_global,
    assemble_neck,
    boothby_wang,
    collar_normalize,
    connection_align,
    contactise,
    interpolation_check,
    make_collar_profile,
    make_profiles,
    scale_tune,
    validate_profiles,
)
from constructor.config import ORACLE_TOL, SEAM_TOL
from constructor.glue import Piece, check_dividing_near_zero, check_piece_sign
from forms.fields import constant, coordinate, sin
from forms.forms import dx, ext_d, function, one_form, two_form
from forms.manifold import ModelManifold, circle, interval, sphere2, torus
from runner.models import hopf_bundle, hopf_liouville, t2d2_liouville, t2s2_collar, t2s2_pieces
from splitting.dividing import dividing_set
from splitting.slices import coordinate_slice

TWO_PI = 2.0 * math.pi


# ----------------------------------------------------------------------
# profiles
# ----------------------------------------------------------------------
def test_default_profiles_satisfy_their_conditions():
    pair = make_profiles()
    t = np.linspace(-1.0, 1.0, 41)[:, None]
    assert np.allclose(pair.f.evaluate(t), pair.f.evaluate(-t))
    assert np.allclose(pair.g.evaluate(t), -pair.g.evaluate(-t))
    assert pair.f.evaluate(np.array([[-1.0]]))[0] == pytest.approx(1.0)
    assert pair.g.evaluate(np.array([[-0.95]]))[0] == pytest.approx(1.0)
    assert pair.f_min >= 10.0
    assert pair.w_min >= 1.0


def test_profile_params_are_range_checked():
    with pytest.raises(ValidationError):
        ProfileParams(delta=0.6)
    with pytest.raises(ValidationError):
        ProfileParams(width=0.95)


def test_low_plateau_is_rejected():
    with pytest.raises(ProfileValidationError):
        make_profiles(ProfileParams(plateau=1.0))


def test_profile_validator_names_the_condition():
    pair = make_profiles()
    with pytest.raises(ProfileValidationError) as info:
        validate_profiles(pair.f, constant(1.0), pair.params)
    assert info.value.condition == "g odd"


def test_escalation_doubles_and_halves_until_capped():
    params = ProfileParams(plateau=50.0, width=0.2)
    nxt = params.escalated()
    assert (nxt.plateau, nxt.width) == (100.0, 0.1)
    with pytest.raises(TuningFailure):
        while True:
            params = params.escalated()


def test_collar_profile():
    profile = make_collar_profile(eps=0.1, slope=4.0)
    assert profile.b.evaluate(np.array([[0.01]]))[0] == 0.0
    assert profile.c.evaluate(np.array([[0.05]]))[0] == pytest.approx(1.0)
    assert profile.c.evaluate(np.array([[0.95]]))[0] == pytest.approx(0.0, abs=1e-12)
    assert profile.b_prime_min == pytest.approx(4.0)
    with pytest.raises(ValueError):
        make_collar_profile(eps=0.6)


# ----------------------------------------------------------------------
# collars
# ----------------------------------------------------------------------
def test_collar_normal_form_is_symplectic():
    model = t2s2_collar(6)
    result = collar_normalize(model.omega_plus, model.beta, model.collar, make_collar_profile(), gamma=model.gamma)
    assert result.report.passed
    assert result.report.details["w2_min"] > 0


def test_collar_rejects_a_wrong_primitive():
    model = t2s2_collar(6)
    with pytest.raises(PreconditionError):
        collar_normalize(model.omega_plus, model.beta, model.collar, make_collar_profile(), gamma=model.gamma.scaled(2.0))


def test_connection_align_recovers_the_slice_gauge():
    model = t2s2_collar(6)
    t, th1 = coordinate(0), coordinate(1)
    gamma = dx(3, 4).scaled(-TWO_PI) + ext_d(function(t * t * sin(th1 * TWO_PI), 4))
    aligned = connection_align(gamma, make_collar_profile().c, model.collar)
    assert aligned.residual < 1e-5
    pts = model.collar.sample_points()
    assert np.allclose(aligned.h.evaluate(pts), pts[:, 0] ** 2 * np.sin(TWO_PI * pts[:, 1]), atol=1e-10)
    assert aligned.gamma_slice.component((0,)).is_zero


def test_connection_align_needs_a_closed_gamma():
    model = t2s2_collar(4)
    with pytest.raises(PreconditionError):
        connection_align(dx(1, 4).times(coordinate(0)), 1.0, model.collar)


def test_coarse_quadrature_leaves_a_residual():
    # the midpoint rule integrates 3t^2 to 3t^3/4, so dh misses gamma_t by 3t^2/4
    model = t2s2_collar(6)
    t = coordinate(0)
    gamma = dx(0, 4).times(t * t * 3.0)
    with pytest.raises(PostconditionError, match="alignment residual"):
        connection_align(gamma, 1.0, model.collar, order=1)
    assert connection_align(gamma, 1.0, model.collar).residual < 1e-10


def test_collar_normal_form_residual_is_enforced(monkeypatch):
    model = t2s2_collar(6)
    monkeypatch.setattr("constructor.collar.NORMAL_FORM_TOL", -1.0)
    with pytest.raises(PostconditionError, match="normal form residual"):
        collar_normalize(model.omega_plus, model.beta, model.collar, make_collar_profile(), gamma=model.gamma)


# ----------------------------------------------------------------------
# neck and gluing
# ----------------------------------------------------------------------
@pytest.fixture
def pieces(t2s2_base):
    return t2s2_pieces(t2s2_base, 1)


def test_neck_is_contact_and_matches_the_expansion(pieces):
    neck = assemble_neck(pieces.neck)
    assert neck.report.passed
    assert neck.oracle_gap <= ORACLE_TOL


def test_global_form_glues_with_exact_seams(pieces):
    neck = assemble_neck(pieces.neck)
    result = assemble_global(pieces.b_plus, neck, pieces.b_minus, neck_base=pieces.neck_base)
    assert result.passed
    assert set(result.pieces) == {"B+", "neck", "B-"}
    assert all(gap <= SEAM_TOL for gap in result.seams.values())
    assert not result.dividing.is_empty
    res = pieces.neck_base.factors[0].resolution
    assert np.all(np.abs(result.dividing.zero_points[:, 0]) <= 1.0 / res)


def test_missing_gauge_offset_breaks_the_seam(pieces):
    neck = assemble_neck(pieces.neck)
    wrong = Piece("B-", pieces.b_minus.form, pieces.b_minus.chart, None, side=1)
    with pytest.raises(SeamMismatchError):
        assemble_global(pieces.b_plus, neck, wrong, neck_base=pieces.neck_base)


def test_without_a_neck_b_plus_stands_alone(pieces):
    result = assemble_global(pieces.b_plus, None)
    assert list(result.pieces) == ["B+"]
    assert result.report.passed


# ----------------------------------------------------------------------
# scale tuning
# ----------------------------------------------------------------------
@pytest.mark.parametrize("M, expected", [(0.0, 1.0), (3.0, 4.0), (10.0, 16.0)])
def test_scale_tune_doubles_until_symplectic(M, expected):
    base = torus(2, 8)
    lam = one_form([0.0, coordinate(0)])
    sigma = two_form({(0, 1): -M}, 2)
    data = coordinate_slice(base, 1, 0.5, dx(0, 2))
    result = scale_tune(sigma, lam, data, 1, base=base)
    assert result.K == expected


def test_scale_tune_needs_a_symplectic_limit():
    base = torus(2, 8)
    data = coordinate_slice(base, 1, 0.5, dx(0, 2))
    with pytest.raises(PreconditionError):
        scale_tune(two_form({(0, 1): 1.0}, 2), one_form([coordinate(1), 0.0]), data, 1, base=base)


# ----------------------------------------------------------------------
# contactisation and interpolation
# ----------------------------------------------------------------------
@pytest.mark.parametrize("twisted", [False, True])
def test_contactise_t2d2(twisted):
    base = ModelManifold([circle(6), circle(6), interval(0.0, 1.0, 6), circle(6)], name="T2xD2")
    model = t2d2_liouville(base, twisted)
    alpha = contactise(model.u, model.lam, model.bundle, extension=model.extension, boundary=model.boundary)
    assert contact_check(alpha).passed


def test_contactise_rejects_negative_u(t2):
    bundle = trivial_bundle(t2)
    with pytest.raises(PreconditionError):
        contactise(coordinate(0) - 0.5, one_form([0.0, 0.0]), bundle)


def test_contactise_over_hopf_is_boothby_wang():
    base = ModelManifold([sphere2(16)])
    model = hopf_liouville(base)
    alpha = contactise(model.u, model.lam, model.bundle)
    assert pair_gap(alpha, boothby_wang(model.bundle)) == 0.0


def test_interpolation_along_an_exact_shift(lutz):
    beta0, u = lutz.alpha.a, lutz.alpha.b.component(())
    beta1 = beta0 + dx(0, 2).times(u).scaled(0.3)
    reports = interpolation_check(beta0, beta1, u, lutz.bundle, axis=1)
    assert all(r.passed for r in reports)
    assert all(r.min_value == pytest.approx(TWO_PI) for r in reports)


def test_interpolation_rejects_different_symplectic_pieces(lutz):
    beta0, u = lutz.alpha.a, lutz.alpha.b.component(())
    beta1 = beta0 + dx(1, 2).times(coordinate(0))
    with pytest.raises(PreconditionError):
        interpolation_check(beta0, beta1, u, lutz.bundle)


def test_hopf_bundle_contact_pair_with_zero_beta(s2):
    alpha = contact_pair(one_form([0.0, 0.0, 0.0]), 1.0, hopf_bundle(s2))
    assert contact_check(alpha).passed


# ----------------------------------------------------------------------
# postconditions
# ----------------------------------------------------------------------
def test_neck_oracle_gap_is_enforced(pieces, monkeypatch):
    monkeypatch.setattr("constructor.neck.ORACLE_TOL", -1.0)
    with pytest.raises(PostconditionError, match="expansion formula"):
        assemble_neck(pieces.neck)


def test_piece_sign_is_checked(pieces):
    check_piece_sign(pieces.b_plus, 1.0)
    check_piece_sign(pieces.b_minus, -1.0)
    with pytest.raises(PostconditionError, match="expected -"):
        check_piece_sign(pieces.b_plus, -1.0)


def test_dividing_set_away_from_the_middle_is_rejected():
    base = ModelManifold([interval(-1.0, 1.0, 8), circle(8)], name="neck")
    check_dividing_near_zero(dividing_set(coordinate(0), base, axis=0), 8)
    with pytest.raises(PostconditionError, match="away from t=0"):
        check_dividing_near_zero(dividing_set(coordinate(0) - 0.5, base, axis=0), 8)
