"""Run a scenario end to end and collect its report."""

import logging
import time
import warnings
from typing import Optional

from pydantic import ValidationError

from forms.config import DEFAULT_JOBS, POSITIVITY_TOL
from forms.errors import GeometryError

from .config import RESOLUTION_SCALE
from .errors import ScenarioError
from .recipes import CHECKS, RECIPES, RunContext
from .report import CheckRecorder, Provenance, Report
from .scenario import Scenario

logger = logging.getLogger(__name__)


def run(
    scenario: Scenario,
    resolution_scale: float = RESOLUTION_SCALE,
    tol: float = POSITIVITY_TOL,
    jobs: Optional[int] = None,
) -> Report:
    """
    Execute the scenario's recipe. Geometric failures end up as failed
    checks in the report; nothing below this call raises for them.
    """
    kind = scenario.recipe.kind
    start = time.perf_counter()
    recorder = CheckRecorder(scenario.checks)
    resolutions = {}

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            unknown = [c for c in scenario.checks if c not in CHECKS[kind]]
            if unknown:
                raise ScenarioError(f"unknown checks {unknown} for {kind}; available: {list(CHECKS[kind])}", "/checks")
            base = scenario.manifold.build(resolution_scale)
            resolutions["manifold"] = base.resolution
            logger.info(f"Running {kind} on {scenario.name} ({base.name or 'manifold'} at {base.resolution})")
            RECIPES[kind](RunContext(scenario, base, tol, jobs, recorder))
        except (GeometryError, ValidationError) as e:
            recorder.error("setup", e)

    resolutions.update(recorder.resolutions)
    provenance = Provenance(
        resolutions=resolutions,
        tolerances={"positivity": tol},
        parameters=scenario.recipe.model_dump(mode="json", exclude={"kind"}),
        resolution_scale=resolution_scale,
        jobs=int(jobs or DEFAULT_JOBS),
        wall_time=time.perf_counter() - start,
    )
    report = Report(
        scenario=scenario.name,
        recipe=kind,
        passed=recorder.passed,
        checks=recorder.entries,
        warnings=[f"{w.category.__name__}: {w.message}" for w in caught],
        provenance=provenance,
    )
    logger.info(f"{scenario.name}: {'passed' if report.passed else 'FAILED'} in {provenance.wall_time:.1f}s")
    return report
