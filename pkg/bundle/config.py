"""Tolerances for circle-bundle checks."""

import os
from dotenv import load_dotenv

load_dotenv()

# ============================================================================
# CURVATURE
# ============================================================================
CLOSEDNESS_TOL = float(os.getenv("CONTACT_CLOSEDNESS_TOL", "1e-5"))
INTEGRALITY_TOL = float(os.getenv("CONTACT_INTEGRALITY_TOL", "1e-3"))

# ============================================================================
# CONTACT CHECK
# ============================================================================
CONSISTENCY_TOL = 1e-10
REGULARITY_TOL = 1e-8

if CLOSEDNESS_TOL <= 0 or INTEGRALITY_TOL <= 0:
    raise ValueError("Bundle tolerances must be positive")
