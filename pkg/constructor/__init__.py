# Profiles, collars, necks and the gluing of invariant contact forms
from .boothby import boothby_wang
from .collar import AlignedConnection, CollarNormalForm, collar_normalize, connection_align, freeze_t
from .errors import PostconditionError, PreconditionError, ProfileValidationError, SeamMismatchError, TuningFailure
from .glue import GlobalInvariantForm, Piece, assemble_global, overlap_collar
from .liouville import contactise, interpolation_check
from .neck import AssembledNeck, NeckAssembly, assemble_neck, oracle_gap
from .profiles import CollarProfile, ProfilePair, ProfileParams, make_collar_profile, make_profiles, validate_profiles
from .tuning import TuneResult, scale_tune
