# Exterior calculus on model manifolds
from .errors import (
    ArityMismatch,
    ConstraintViolation,
    DegeneracyError,
    DegenerateCycleWarning,
    EmptyRegionError,
    GeometryError,
)
from .fields import ScalarField, constant, coordinate
from .forms import BaseForm, eval_on_frame, ext_d, lift, pullback, tangential_max, wedge
from .manifold import Frame, ModelFactor, ModelManifold, frame_at, kernel_frame
from .sweep import Cycle, PositivityReport, integrate_cycle, positivity_sweep
