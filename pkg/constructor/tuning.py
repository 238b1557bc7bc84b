"""
Scale tuning for symplectic fillings: double K until
σ + K dλ is symplectic on the sampled interior and w1 holds on the
boundary slice, up to K_CAP.
"""

import logging
from typing import List, NamedTuple, Optional

import numpy as np

from forms.config import POSITIVITY_TOL
from forms.forms import BaseForm, ext_d, power
from forms.manifold import ModelManifold
from forms.sweep import PositivityReport, positivity_sweep
from splitting.checks import weak_filling_w1
from splitting.slices import ContactSliceData

from .config import K_CAP
from .errors import PreconditionError, TuningFailure

logger = logging.getLogger(__name__)


class TuneResult(NamedTuple):
    K: float
    reports: List[PositivityReport]


def scale_tune(
    sigma: BaseForm,
    lam: BaseForm,
    data: ContactSliceData,
    n: int,
    *,
    base: ModelManifold,
    mask: Optional[np.ndarray] = None,
    tol: float = POSITIVITY_TOL,
    jobs: Optional[int] = None,
) -> TuneResult:
    """
    Smallest K in 1, 2, 4, ... with σ + K dλ symplectic on ``base`` and
    weakly filling the slice. The slice must carry its contact form.
    """
    d_lam = ext_d(lam)
    limit = positivity_sweep(power(d_lam, n), base, tol, mask=mask, label="d lambda^n", jobs=jobs)
    limit_w1 = weak_filling_w1(data, d_lam, n, tol, jobs=jobs)
    if not (limit.passed and limit_w1.passed):
        raise PreconditionError(
            f"d lambda is not a weak filling on {base.name}: sweep min {limit.min_value:.3e}, w1 min {limit_w1.min_value:.3e}"
        )

    reports: List[PositivityReport] = []
    K = 1.0
    while K <= K_CAP:
        omega = sigma + d_lam.scaled(K)
        sweep = positivity_sweep(power(omega, n), base, tol, mask=mask, label=f"omega^n K={K:g}", jobs=jobs)
        w1 = weak_filling_w1(data, omega, n, tol, jobs=jobs)
        reports.extend([sweep, w1])
        if sweep.passed and w1.passed:
            logger.info(f"K={K:g} makes sigma + K d lambda a weak filling on {base.name}")
            return TuneResult(K, reports)
        logger.debug(f"K={K:g} fails: sweep {sweep.min_value:.3e}, w1 {w1.min_value:.3e}")
        K *= 2.0
    raise TuningFailure(f"No K <= {K_CAP:g} makes sigma + K d lambda symplectic on {base.name}")
