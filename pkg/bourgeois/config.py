"""Defaults for the binding neighbourhood, the cutoff and open book checks."""

import os
from dotenv import load_dotenv

load_dotenv()

# ============================================================================
# BINDING NEIGHBOURHOOD
# ============================================================================
BINDING_RADIUS = float(os.getenv("CONTACT_BINDING_RADIUS", "0.5"))
CUTOFF_TRANSITION = (0.2, 0.4)
CUTOFF_GRID = 10_000
CUTOFF_EXACT_TOL = 1e-12

# ============================================================================
# CHECKS
# ============================================================================
IDENTITY_TOL = 1e-8
PAGE_STANDOFF = 1e-3

if not 0 < BINDING_RADIUS <= 1:
    raise ValueError("CONTACT_BINDING_RADIUS must lie in (0, 1]")
