"""
Recipes: each one turns a validated scenario into checks on the recorder.

A recipe never raises for a geometric failure; every step runs inside
``checks.step`` so that the failure becomes a report entry.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

from bourgeois import (
    bourgeois_form,
    bourgeois_splitting,
    make_cutoff,
    rotate_pages,
    standard_s3_open_book,
    validate_open_book,
    xy_fields,
    xy_identity_residual,
)
from bourgeois.config import BINDING_RADIUS, IDENTITY_TOL
from bundle import (
    BundleSpec,
    InvariantForm,
    change_gauge,
    contact_check,
    contact_pair,
    identity_check_lemma_volume,
    pairing_table,
    trivial_bundle,
)
from bundle.config import CLOSEDNESS_TOL, INTEGRALITY_TOL
from bundle.invariant import pair_gap
from constructor import (
    ProfileParams,
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
)
from constructor.config import ALIGN_TOL, COLLAR_SLOPE, ORACLE_TOL, SEAM_TOL
from forms.fields import coordinate, sin
from forms.forms import BaseForm, dx, ext_d, function, one_form, two_form
from forms.manifold import FactorKind, ModelManifold
from forms.sweep import worst_of
from splitting import (
    coordinate_slice,
    dividing_set,
    gamma_contact_check,
    largest_passing_eps,
    slice_contact_family,
    symplectic_pieces,
    weak_filling_w1,
    weak_filling_w2,
)

from .config import BOURGEOIS_LEMMA_TOL, GAUGE_TOL, LEMMA_TOL, ROTATION_TOL, SCALE_TUNE_LIMIT
from .errors import ScenarioError
from .models import hopf_bundle, hopf_liouville, lutz_t3, t2d2_liouville, t2s2_bundle, t2s2_collar, t2s2_pieces
from .report import CheckRecorder
from .scenario import Scenario

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

CHECKS: Dict[str, Tuple[str, ...]] = {
    "verify-contact": ("contact", "lemma-volume", "gauge-invariance", "interpolation", "euler"),
    "split": ("dividing-set", "gamma-contact", "symplectic-pieces", "eps-scan", "slices"),
    "construct": (
        "profiles",
        "neck",
        "oracle",
        "global",
        "seams",
        "dividing-set",
        "weak-filling",
        "collar",
        "connection-align",
        "scale-tune",
        "euler",
    ),
    "bourgeois": ("open-book", "cutoff", "xy-identity", "contact", "lemma-volume", "splitting", "rotation"),
    "contactise": ("contactise", "boundary", "lemma-volume", "euler", "boothby"),
    "euler": ("closedness", "euler"),
}


@dataclass
class RunContext:
    scenario: Scenario
    base: ModelManifold
    tol: float
    jobs: Optional[int]
    checks: CheckRecorder

    @property
    def recipe(self):
        return self.scenario.recipe

    @property
    def dim(self) -> int:
        return self.base.ambient_dim

    def bundle(self) -> BundleSpec:
        if self.scenario.bundle is None:
            return trivial_bundle(self.base)
        return self.scenario.bundle.build(self.base)

    def wants(self, name: str) -> bool:
        return self.checks.wants(name)


def _record_pairings(ctx: RunContext, bundle: BundleSpec, expected: Optional[Dict[str, float]] = None) -> None:
    """One value check per generator, against ``expected`` or the nearest integer."""
    with ctx.checks.step("euler"):
        for name, row in pairing_table(bundle).items():
            target = row["nearest"] if expected is None else expected[name]
            ctx.checks.value(f"euler {name}", row["value"], target, INTEGRALITY_TOL, integral=row["integral"])


# ----------------------------------------------------------------------
# verify-contact
# ----------------------------------------------------------------------
def verify_contact(ctx: RunContext) -> None:
    r = ctx.recipe
    alpha: Optional[InvariantForm] = None
    gauge: Optional[BaseForm] = None
    axis = None
    with ctx.checks.step("contact"):
        if r.model == "lutz-t3":
            model = lutz_t3(ctx.base)
            alpha, gauge, axis = model.alpha, model.gauge, model.axis
        elif r.model == "hopf":
            alpha = boothby_wang(hopf_bundle(ctx.base))
        else:
            alpha = contact_pair(r.beta_form(ctx.dim), r.u.to_field(), ctx.bundle())
            if r.gauge is not None:
                gauge = one_form([c.to_field() for c in r.gauge], ctx.dim)
    if alpha is None:
        return

    reference = None
    if ctx.wants("contact"):
        with ctx.checks.step("contact"):
            reference = contact_check(alpha, ctx.tol, jobs=ctx.jobs)
            ctx.checks.positivity("contact", reference)
    if ctx.wants("lemma-volume"):
        with ctx.checks.step("lemma-volume"):
            ctx.checks.residual("lemma-volume", identity_check_lemma_volume(alpha), LEMMA_TOL)

    if gauge is not None and ctx.wants("gauge-invariance"):
        with ctx.checks.step("gauge-invariance"):
            moved = change_gauge(alpha, gauge)
            back = change_gauge(moved, -gauge)
            ctx.checks.residual("gauge round trip", pair_gap(back, alpha), 0.0, same_object=back is alpha)
            before = reference or contact_check(alpha, ctx.tol, jobs=ctx.jobs)
            after = contact_check(moved, ctx.tol, jobs=ctx.jobs)
            ctx.checks.residual("gauge-invariance", abs(after.min_value - before.min_value), GAUGE_TOL)

    if gauge is not None and ctx.wants("interpolation"):
        with ctx.checks.step("interpolation"):
            beta1 = change_gauge(alpha, gauge).a
            u = alpha.b.component(())
            reports = interpolation_check(alpha.a, beta1, u, alpha.bundle, axis=axis, tol=ctx.tol, jobs=ctx.jobs)
            ctx.checks.positivity("interpolation", worst_of(reports, label="interpolation"), samples=len(reports))

    if alpha.bundle.generators and ctx.wants("euler"):
        _record_pairings(ctx, alpha.bundle)


# ----------------------------------------------------------------------
# split
# ----------------------------------------------------------------------
def split(ctx: RunContext) -> None:
    r = ctx.recipe
    if r.model == "lutz-t3":
        model = lutz_t3(ctx.base)
        bundle, beta, u, axis = model.bundle, model.alpha.a, model.alpha.b.component(()), model.axis
    else:
        bundle, beta, u, axis = ctx.bundle(), r.beta_form(ctx.dim), r.u.to_field(), r.axis
    n = bundle.n

    mesh = None
    with ctx.checks.step("dividing-set"):
        mesh = dividing_set(u, ctx.base, axis)
        if ctx.wants("dividing-set"):
            ctx.checks.flag("dividing-set", not mesh.is_empty, zeros=int(mesh.zero_points.shape[0]))
    if mesh is not None and not mesh.is_empty and ctx.wants("gamma-contact"):
        with ctx.checks.step("gamma-contact"):
            ctx.checks.positivity("gamma-contact", gamma_contact_check(beta, mesh, n, ctx.tol, jobs=ctx.jobs))
    if ctx.wants("symplectic-pieces"):
        with ctx.checks.step("symplectic-pieces"):
            pieces = symplectic_pieces(beta, u, bundle.curvature, n, r.eps, base=ctx.base, tol=ctx.tol, jobs=ctx.jobs)
            ctx.checks.positivity("omega+", pieces.plus)
            ctx.checks.positivity("omega-", pieces.minus)
    if ctx.wants("eps-scan"):
        with ctx.checks.step("eps-scan"):
            eps = largest_passing_eps(beta, u, bundle.curvature, n, ctx.base)
            ctx.checks.flag("eps-scan", eps is not None, eps=eps)
    if r.slices and ctx.wants("slices"):
        with ctx.checks.step("slices"):
            outcomes = slice_contact_family(beta, u, r.slices, n, base=ctx.base, axis=axis)
            per_s = {f"{o.s:g}": (o.report.min_value if o.report else o.error) for o in outcomes}
            ctx.checks.flag("slices", all(o.passed for o in outcomes), per_s=per_s)


# ----------------------------------------------------------------------
# construct
# ----------------------------------------------------------------------
def construct(ctx: RunContext) -> None:
    r = ctx.recipe
    k = r.k
    profiles = None
    with ctx.checks.step("profiles"):
        overrides = {key: getattr(r, key) for key in ("plateau", "width") if getattr(r, key) is not None}
        profiles = make_profiles(ProfileParams(**overrides))
        if ctx.wants("profiles"):
            ctx.checks.flag("profiles", True, f_min=profiles.f_min, w_min=profiles.w_min)
    if profiles is None:
        return

    pieces = t2s2_pieces(ctx.base, k, profiles=profiles)
    ctx.checks.resolutions.update({"neck": pieces.neck_base.resolution, "B+": pieces.b_plus.form.bundle.base.resolution})

    assembled = None
    with ctx.checks.step("neck"):
        assembled = assemble_neck(pieces.neck, ctx.tol, escalate=r.escalate, jobs=ctx.jobs)
        if ctx.wants("neck"):
            ctx.checks.positivity("neck", assembled.report)
        if ctx.wants("oracle"):
            ctx.checks.residual("oracle", assembled.oracle_gap, ORACLE_TOL)

    if assembled is not None and (ctx.wants("global") or ctx.wants("seams") or ctx.wants("dividing-set")):
        with ctx.checks.step("global"):
            glob = assemble_global(
                pieces.b_plus, assembled, pieces.b_minus, neck_base=pieces.neck_base, tol=ctx.tol, jobs=ctx.jobs
            )
            if ctx.wants("global"):
                ctx.checks.positivity("global", glob.report)
            if ctx.wants("seams"):
                ctx.checks.residual("seams", max(glob.seams.values()), SEAM_TOL, per_piece=dict(glob.seams))
            if ctx.wants("dividing-set"):
                zeros = 0 if glob.dividing is None else int(glob.dividing.zero_points.shape[0])
                ctx.checks.flag("dividing-set", zeros > 0, zeros=zeros)

    if ctx.wants("weak-filling"):
        with ctx.checks.step("weak-filling"):
            ctx.checks.positivity("w1", weak_filling_w1(pieces.boundary, pieces.omega_plus, 2, ctx.tol, jobs=ctx.jobs))
            ctx.checks.positivity("w2", weak_filling_w2(pieces.boundary, pieces.omega_plus, 2, tol=ctx.tol, jobs=ctx.jobs))

    res = ctx.base.factors[0].resolution
    cm = t2s2_collar(res)
    collar_profile = None
    if ctx.wants("collar") or ctx.wants("connection-align"):
        with ctx.checks.step("collar"):
            collar_profile = make_collar_profile(slope=r.collar_slope or COLLAR_SLOPE)
    if collar_profile is not None and ctx.wants("collar"):
        with ctx.checks.step("collar"):
            normal = collar_normalize(cm.omega_plus, cm.beta, cm.collar, collar_profile, gamma=cm.gamma, tol=ctx.tol, jobs=ctx.jobs)
            ctx.checks.positivity("collar", normal.report)
            edge = coordinate_slice(cm.collar, 0, 0.95, cm.beta, normal_sign=1.0)
            ctx.checks.positivity("collar w1", weak_filling_w1(edge, normal.omega, 2, ctx.tol, jobs=ctx.jobs))
    if collar_profile is not None and ctx.wants("connection-align"):
        with ctx.checks.step("connection-align"):
            t, th1 = coordinate(0), coordinate(1)
            gamma = dx(3, 4).scaled(-TWO_PI * k) + ext_d(function(t * t * sin(th1 * TWO_PI), 4))
            aligned = connection_align(gamma, collar_profile.c, cm.collar)
            ctx.checks.residual("connection-align", aligned.residual, ALIGN_TOL)

    if ctx.wants("scale-tune"):
        with ctx.checks.step("scale-tune"):
            disc = pieces.b_plus.form.bundle.base
            sigma = two_form({(2, 3): coordinate(2) * (TWO_PI * k)}, 4)
            tuned = scale_tune(sigma, pieces.b_plus.form.a, pieces.boundary, 2, base=disc, tol=ctx.tol, jobs=ctx.jobs)
            ctx.checks.flag("scale-tune", tuned.K <= SCALE_TUNE_LIMIT, K=tuned.K)

    if ctx.wants("euler"):
        _record_pairings(ctx, t2s2_bundle(ctx.base, k), expected={"[T2x*]": 0.0, "[*xS2]": float(k)})


# ----------------------------------------------------------------------
# bourgeois
# ----------------------------------------------------------------------
def bourgeois(ctx: RunContext) -> None:
    r = ctx.recipe
    if [f.kind for f in ctx.base.factors] != [FactorKind.SPHERE3]:
        raise ScenarioError("The bourgeois recipe runs on S3", "/manifold/factors")
    res = ctx.base.factors[0].resolution
    ob = standard_s3_open_book(res, r0=r.r0 or BINDING_RADIUS)

    if ctx.wants("open-book"):
        with ctx.checks.step("open-book"):
            for key, rep in validate_open_book(ob, ctx.tol, jobs=ctx.jobs).items():
                ctx.checks.positivity(f"open-book {key}", rep)

    rho = None
    with ctx.checks.step("cutoff"):
        rho = make_cutoff(ob.r0, r.transition)
        if ctx.wants("cutoff"):
            ctx.checks.flag("cutoff", True, r0=rho.r0, transition=list(rho.transition))
    if rho is None:
        return
    x, y = xy_fields(ob, rho)

    if ctx.wants("xy-identity"):
        with ctx.checks.step("xy-identity"):
            ctx.checks.residual("xy-identity", xy_identity_residual(ob, x, y, rho), IDENTITY_TOL)

    form = None
    with ctx.checks.step("contact"):
        form = bourgeois_form(ob, x, y, tol=ctx.tol, jobs=ctx.jobs)
        ctx.checks.resolutions["N x S1"] = form.data.base.resolution
        if ctx.wants("contact"):
            ctx.checks.positivity("contact", form.report)
    if form is not None and ctx.wants("lemma-volume"):
        with ctx.checks.step("lemma-volume"):
            ctx.checks.residual("lemma-volume", identity_check_lemma_volume(form.alpha), BOURGEOIS_LEMMA_TOL)

    if ctx.wants("splitting"):
        with ctx.checks.step("splitting"):
            sp = bourgeois_splitting(ob, x, y, eps=r.eps, jobs=ctx.jobs)
            ctx.checks.flag("dividing-set", not sp.mesh.is_empty, zeros=int(sp.mesh.zero_points.shape[0]))
            ctx.checks.positivity("gamma-contact", sp.gamma)
            ctx.checks.positivity("omega+", sp.pieces.plus)
            ctx.checks.positivity("omega-", sp.pieces.minus)

    if form is not None and ctx.wants("rotation"):
        with ctx.checks.step("rotation"):
            gaps = {}
            for j in range(1, r.rotations + 1):
                turned = rotate_pages(ob, TWO_PI * j / res)
                tx, ty = xy_fields(turned, rho)
                rotated = bourgeois_form(turned, tx, ty, tol=ctx.tol, jobs=ctx.jobs)
                gaps[str(j)] = abs(rotated.report.min_value - form.report.min_value)
            scale = 1.0 + abs(form.report.min_value)
            ctx.checks.residual("rotation", max(gaps.values()) / scale, ROTATION_TOL, per_step=gaps)


# ----------------------------------------------------------------------
# contactise
# ----------------------------------------------------------------------
def contactise_recipe(ctx: RunContext) -> None:
    r = ctx.recipe
    model = hopf_liouville(ctx.base) if r.model == "hopf" else t2d2_liouville(ctx.base, r.twisted)

    alpha = None
    with ctx.checks.step("contactise"):
        alpha = contactise(
            model.u, model.lam, model.bundle, extension=model.extension, boundary=model.boundary, tol=ctx.tol, jobs=ctx.jobs
        )
        if ctx.wants("contactise"):
            ctx.checks.positivity("contactise", contact_check(alpha, ctx.tol, label="contactisation", jobs=ctx.jobs))
    if alpha is None:
        return

    if model.boundary is not None and ctx.wants("boundary"):
        with ctx.checks.step("boundary"):
            edge = gamma_contact_check(model.extension, model.boundary, model.bundle.n, ctx.tol, jobs=ctx.jobs)
            ctx.checks.positivity("boundary", edge)
    if ctx.wants("lemma-volume"):
        with ctx.checks.step("lemma-volume"):
            ctx.checks.residual("lemma-volume", identity_check_lemma_volume(alpha), LEMMA_TOL)
    if r.model == "hopf" and ctx.wants("boothby"):
        with ctx.checks.step("boothby"):
            ctx.checks.residual("boothby", pair_gap(alpha, boothby_wang(model.bundle)), 0.0)
    if model.bundle.generators and ctx.wants("euler"):
        _record_pairings(ctx, model.bundle)


# ----------------------------------------------------------------------
# euler
# ----------------------------------------------------------------------
def euler(ctx: RunContext) -> None:
    r = ctx.recipe
    if r.model == "t2s2":
        bundle, expected = t2s2_bundle(ctx.base, r.k), {"[T2x*]": 0.0, "[*xS2]": float(r.k)}
    elif r.model == "hopf":
        bundle, expected = hopf_bundle(ctx.base), {"[S2]": -1.0}
    else:
        if ctx.scenario.bundle is None:
            raise ScenarioError("the euler recipe needs a bundle or a model", "/bundle")
        bundle, expected = ctx.bundle(), None
    if not bundle.generators:
        raise ScenarioError("the bundle has no generator cycles", "/bundle/generators")

    if ctx.wants("closedness"):
        with ctx.checks.step("closedness"):
            ctx.checks.residual("closedness", bundle.closedness_residual(), CLOSEDNESS_TOL)
    if ctx.wants("euler"):
        _record_pairings(ctx, bundle, expected)


RECIPES: Dict[str, Callable[[RunContext], None]] = {
    "verify-contact": verify_contact,
    "split": split,
    "construct": construct,
    "bourgeois": bourgeois,
    "contactise": contactise_recipe,
    "euler": euler,
}
