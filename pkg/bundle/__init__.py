# Invariant form calculus on principal circle bundles
from .errors import BundleMismatchError, ConsistencyError, UnknownCycleError
from .euler import euler_pairing, pairing_table
from .invariant import (
    BundleSpec,
    InvariantForm,
    change_gauge,
    contact_pair,
    decompose_alpha,
    inv_d,
    inv_wedge,
    trivial_bundle,
)
from .volume import contact_check, identity_check_lemma_volume, omega_volume
