"""
Open books on S³ and the invariant form α_N - x dφ + y dθ
"""
import math

import numpy as np
import pytest

from bourgeois import (
    CutoffValidationError,
    OpenBookError,
    OpenBookSpec,
    bourgeois_form,
    bourgeois_splitting,
    make_cutoff,
    rotate_pages,
    standard_s3_open_book,
    validate_open_book,
    xy_fields,
    xy_identity_residual,
)
from bourgeois.config import IDENTITY_TOL
from bundle import identity_check_lemma_volume
from forms.fields import coordinate
from forms.forms import one_form


@pytest.fixture(scope="module")
def open_book():
    return standard_s3_open_book(resolution=8)


@pytest.fixture(scope="module")
def cutoff():
    return make_cutoff()


def test_standard_open_book_supports_alpha(open_book):
    reports = validate_open_book(open_book)
    assert set(reports) == {"contact", "pages", "binding"}
    assert all(r.passed for r in reports.values())


def test_zero_form_is_not_supported(open_book):
    flat = OpenBookSpec(open_book.N, one_form([0.0] * 4), open_book.X, open_book.Y, name="flat")
    with pytest.raises(OpenBookError):
        validate_open_book(flat)


def test_alpha_must_live_on_the_ambient_space_of_n(open_book):
    with pytest.raises(OpenBookError):
        OpenBookSpec(open_book.N, one_form([0.0] * 3), coordinate(0), coordinate(1))


def test_cutoff_is_the_identity_then_one(cutoff):
    r = np.array([[0.05], [0.15], [0.45], [0.9]])
    values = cutoff.rho.evaluate(r)
    assert values[:2] == pytest.approx([0.05, 0.15])
    assert values[2:] == pytest.approx([1.0, 1.0])


@pytest.mark.parametrize("transition", [(0.3, 0.2), (0.0, 0.2), (0.2, 0.6), (0.3, 0.6)])
def test_cutoff_transition_must_fit_inside_r0(transition):
    with pytest.raises(CutoffValidationError) as info:
        make_cutoff(0.5, transition)
    assert info.value.condition == "0 < a < b < r0"
    assert info.value.witness == transition[1]


def test_xy_identity(open_book, cutoff):
    x, y = xy_fields(open_book, cutoff)
    assert xy_identity_residual(open_book, x, y, cutoff) < IDENTITY_TOL


def test_bourgeois_form_is_contact(open_book, cutoff):
    x, y = xy_fields(open_book, cutoff)
    result = bourgeois_form(open_book, x, y, resolution=6)
    assert result.report.passed
    assert result.data.n == 2
    assert identity_check_lemma_volume(result.alpha) < 1e-6


def test_bourgeois_splitting(open_book, cutoff):
    x, y = xy_fields(open_book, cutoff)
    split = bourgeois_splitting(open_book, x, y, resolution=6)
    assert split.passed
    assert not split.mesh.is_empty


def test_rotating_the_pages_keeps_the_contact_volume(open_book, cutoff):
    x, y = xy_fields(open_book, cutoff)
    reference = bourgeois_form(open_book, x, y, resolution=6).report.min_value
    for j in range(1, 4):
        turned = rotate_pages(open_book, 2 * math.pi * j / 4)
        xr, yr = xy_fields(turned, cutoff)
        report = bourgeois_form(turned, xr, yr, resolution=6).report
        assert report.passed
        assert report.min_value == pytest.approx(reference, rel=1e-6)
