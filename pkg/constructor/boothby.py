"""Connection forms as contact forms over (anti-)symplectic bases."""

import logging

from bundle.invariant import BundleSpec, InvariantForm
from bundle.volume import contact_check
from forms.forms import function, zero

from .errors import PreconditionError

logger = logging.getLogger(__name__)


def boothby_wang(bundle: BundleSpec) -> InvariantForm:
    """
    α = ψ when the curvature is symplectic on the base, α = -ψ when it is
    symplectic on the reversed base.
    """
    failures = []
    for sign in (1.0, -1.0):
        alpha = InvariantForm(zero(1, bundle.dim), function(sign, bundle.dim), bundle)
        report = contact_check(alpha, label=f"boothby-wang {'+' if sign > 0 else '-'}psi")
        if report.passed:
            logger.info(f"Boothby-Wang form {'+' if sign > 0 else '-'}psi is contact over {bundle.name}")
            return alpha
        failures.append(report)
    worst = failures[0] if failures[0].min_value >= failures[1].min_value else failures[1]
    raise PreconditionError(
        f"Curvature of {bundle.name} is not symplectic on the base or its reverse "
        f"(best min {worst.min_value:.3e} at {worst.argmin})"
    )
