"""Real Euler class pairings −(1/2π)∫ω over generator cycles."""

import logging
import math
from typing import Dict

from forms.sweep import integrate_cycle

from .config import INTEGRALITY_TOL
from .errors import UnknownCycleError
from .invariant import BundleSpec

logger = logging.getLogger(__name__)


def euler_pairing(bundle: BundleSpec, cycle_name: str) -> float:
    if cycle_name not in bundle.generators:
        raise UnknownCycleError(
            f"Bundle {bundle.name!r} has no cycle {cycle_name!r}; known cycles: {sorted(bundle.generators)}"
        )
    value = -integrate_cycle(bundle.curvature, bundle.generators[cycle_name]) / (2.0 * math.pi)
    nearest = round(value)
    if abs(value - nearest) > INTEGRALITY_TOL:
        logger.warning(f"Pairing of {bundle.name} with {cycle_name} is {value:.6f}, not integral")
    return value


def pairing_table(bundle: BundleSpec) -> Dict[str, dict]:
    """Every generator pairing with its nearest integer and integrality flag."""
    table = {}
    for name in bundle.generators:
        value = euler_pairing(bundle, name)
        nearest = int(round(value))
        table[name] = {
            "value": value,
            "nearest": nearest,
            "integral": abs(value - nearest) <= INTEGRALITY_TOL * (1 + abs(nearest)),
        }
    return table
