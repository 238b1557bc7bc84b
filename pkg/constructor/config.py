"""Defaults for profiles, collars, necks and parameter searches."""

import os
from dotenv import load_dotenv

load_dotenv()

# ============================================================================
# PROFILE FUNCTIONS
# ============================================================================
PLATEAU_HEIGHT = float(os.getenv("CONTACT_PLATEAU_HEIGHT", "50"))
TRANSITION_WIDTH = float(os.getenv("CONTACT_TRANSITION_WIDTH", "0.2"))
COLLAR_MARGIN = 0.1
LEFT_FLAT_ZONE = 0.1
F_FLOOR = 10.0
WRONSKIAN_FLOOR = 1.0
PROFILE_GRID = 10_000
PROFILE_EXACT_TOL = 1e-12

# ============================================================================
# ESCALATION
# ============================================================================
PLATEAU_CAP = 2.0 ** 20
WIDTH_FLOOR = 1e-3
K_CAP = 2.0 ** 30

# ============================================================================
# COLLARS
# ============================================================================
COLLAR_SLOPE = float(os.getenv("CONTACT_COLLAR_SLOPE", "4"))
COLLAR_C_SAMPLES = (0.0, 0.5, 1.0)
COLLAR_T_SAMPLES = (0.25, 0.5, 0.75)
NORMAL_FORM_TOL = 1e-6
QUADRATURE_ORDER = 32
ALIGN_TOL = 1e-5

# ============================================================================
# NECK AND SEAMS
# ============================================================================
GAUGE_FREEZE = 0.5
SEAM_TOL = 1e-10
ORACLE_TOL = 1e-4
ORACLE_FLOOR = 1e-8
INTERPOLATION_SAMPLES = 11
INTERIOR_STANDOFF = 0.05

if PLATEAU_HEIGHT <= 0 or not 0 < TRANSITION_WIDTH < 1:
    raise ValueError("Profile defaults out of range")
if COLLAR_SLOPE < 0:
    raise ValueError("CONTACT_COLLAR_SLOPE must be non-negative")
