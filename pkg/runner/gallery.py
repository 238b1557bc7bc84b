"""Built-in scenarios shipped as JSON files under runner/scenarios/."""

import logging
import os
from typing import Dict, List, Optional

from forms.config import POSITIVITY_TOL

from .config import GALLERY_DIR, RESOLUTION_SCALE
from .errors import UnknownGalleryEntry
from .report import Report
from .run import run
from .scenario import Scenario, load_scenario

logger = logging.getLogger(__name__)

# =============================================================================
# GALLERY ENTRIES
# =============================================================================
GALLERY: Dict[str, str] = {
    # verify-contact
    "lutz-t3": "lutz-t3.json",
    "hopf": "hopf.json",
    # construct: existence pipeline and Euler pairings
    "t2s2-k0": "t2s2-k0.json",
    "t2s2-k1": "t2s2-k1.json",
    "t2s2-k2": "t2s2-k2.json",
    # bourgeois
    "bourgeois-s3": "bourgeois-s3.json",
    # contactise
    "contactise-t2d2": "contactise-t2d2.json",
}


def gallery_names() -> List[str]:
    return list(GALLERY)


def gallery_path(name: str) -> str:
    if name not in GALLERY:
        raise UnknownGalleryEntry(name, gallery_names())
    return os.path.join(GALLERY_DIR, GALLERY[name])


def gallery_scenario(name: str) -> Scenario:
    return load_scenario(gallery_path(name))


def gallery(
    name: str,
    resolution_scale: float = RESOLUTION_SCALE,
    tol: float = POSITIVITY_TOL,
    jobs: Optional[int] = None,
) -> Report:
    scenario = gallery_scenario(name)
    logger.info(f"Gallery entry {name}")
    return run(scenario, resolution_scale, tol, jobs)
