"""Symplectic quotients of complex torus representations, computed from weight matrices."""

from .analysis import TorusModule, SignVector, validate_faithful, is_k_modular, modularity_index, is_stable, make_stable_utcls
from .errors import (
    DisconnectedStabilizerError,
    InputError,
    InvariantViolation,
    NotFaithfulError,
    NotMinimalError,
    NotOneModularError,
    NotStableError,
    TorusQuotError,
)
from .isoclass import canonical_form, decide_iso, verify_witness
from .lattice import IntMatrix, hermite_normal_form, smith_normal_form
from .oracle import reduced_data_series, shell_invariant_series
from .reduction import ReducedData, is_orbifold, reduce
from .strata import codim_N_sing, detect_type_O, enumerate_isotropy_classes, is_minimal

__version__ = "0.1.0"
