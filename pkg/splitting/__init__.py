# Dividing sets, symplectic pieces and weak filling checks
from .checks import (
    SliceOutcome,
    SymplecticPieces,
    gamma_contact_check,
    largest_passing_eps,
    slice_contact_family,
    symplectic_pieces,
    weak_filling_w1,
    weak_filling_w2,
)
from .dividing import DividingSetMesh, dividing_set
from .errors import IrregularLevelError, NotSymplecticError, SplitParameterError
from .slices import ContactSliceData, coordinate_slice, level_slice
