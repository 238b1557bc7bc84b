"""Defaults for dividing sets, slices and filling checks."""

import os
from dotenv import load_dotenv

load_dotenv()

# ============================================================================
# DIVIDING SET
# ============================================================================
ZERO_TOL = 1e-10
TRANSVERSALITY_TOL = 1e-6
BISECTION_MAX_ITER = 200

# ============================================================================
# SYMPLECTIC PIECES
# ============================================================================
EPS_FRACTION = float(os.getenv("CONTACT_EPS_FRACTION", "0.05"))
EPS_LADDER = (0.2, 0.1, 0.05, 0.025)
CLOSEDNESS_TOL = 1e-5
VOLUME_RESIDUAL_TOL = 1e-5

# ============================================================================
# WEAK FILLINGS
# ============================================================================
W2_B_SAMPLES = (0.0, 0.1, 1.0, 10.0, 100.0)

if not 0 < EPS_FRACTION < 1:
    raise ValueError("CONTACT_EPS_FRACTION must lie in (0, 1)")
