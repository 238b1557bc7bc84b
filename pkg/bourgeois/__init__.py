# Bourgeois contact forms on N x T² from supported open books
from .construction import (
    BourgeoisForm,
    BourgeoisSplitting,
    bourgeois_form,
    bourgeois_splitting,
    rotate_pages,
    xy_fields,
    xy_identity_residual,
)
from .cutoff import CutoffRho, make_cutoff, validate_cutoff
from .errors import BourgeoisError, CutoffValidationError, OpenBookError
from .openbook import OpenBookSpec, standard_s3_open_book, validate_open_book
