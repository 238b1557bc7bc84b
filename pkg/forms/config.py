"""Numerical defaults for exterior calculus on model manifolds."""

import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# ============================================================================
# DIFFERENTIATION
# ============================================================================
FD_STEP = float(os.getenv("CONTACT_FD_STEP", "1e-5"))

# ============================================================================
# TOLERANCES
# ============================================================================
POSITIVITY_TOL = float(os.getenv("CONTACT_POSITIVITY_TOL", "1e-9"))
ZERO_TOL = 1e-10
SPHERE_TOL = 1e-10
SPHERE_SAMPLE_TOL = 1e-12

# ============================================================================
# SWEEP SETTINGS
# ============================================================================
SWEEP_BATCH_SIZE = int(os.getenv("CONTACT_BATCH_SIZE", "2048"))
DEFAULT_JOBS = int(os.getenv("CONTACT_JOBS", "1"))

# ============================================================================
# CYCLE INTEGRATION
# ============================================================================
CYCLE_RESOLUTION = 128

if FD_STEP <= 0:
    raise ValueError("CONTACT_FD_STEP must be positive")
if SWEEP_BATCH_SIZE < 1:
    raise ValueError("CONTACT_BATCH_SIZE must be at least 1")
if DEFAULT_JOBS < 1:
    raise ValueError("CONTACT_JOBS must be at least 1")
