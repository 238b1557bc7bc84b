import os

from dotenv import load_dotenv

load_dotenv()

# =============================================================================
# REPORTS
# =============================================================================
SCHEMA_VERSION = 1
REPORTS_DIR = os.getenv("CONTACT_REPORTS_DIR", "reports")
LOG_LEVEL = os.getenv("CONTACT_LOG_LEVEL", "INFO").upper()

if LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
    raise ValueError(f"CONTACT_LOG_LEVEL must be a logging level name, got {LOG_LEVEL!r}")

# =============================================================================
# GALLERY
# =============================================================================
GALLERY_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "scenarios")
RESOLUTION_SCALE = float(os.getenv("CONTACT_RESOLUTION_SCALE", "1.0"))

if RESOLUTION_SCALE <= 0:
    raise ValueError(f"CONTACT_RESOLUTION_SCALE must be positive, got {RESOLUTION_SCALE}")

# =============================================================================
# EXPRESSIONS
# =============================================================================
DIVISION_FLOOR = 1e-300

# =============================================================================
# CHECK TOLERANCES
# =============================================================================
LEMMA_TOL = 1e-8
BOURGEOIS_LEMMA_TOL = 1e-5
GAUGE_TOL = 1e-9
ROTATION_TOL = 1e-9
SCALE_TUNE_LIMIT = 2.0 ** 10
