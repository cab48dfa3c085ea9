"""Energy-constrained quantum states: extremality, exact-energy decompositions
and energy-constrained optimization over pure states."""
from . import errors
from .config import TOL
from .states import *  # noqa: F401,F403
from .states import __all__ as _states_all
from .extremality import (
    ExtremalityReport,
    Method,
    SetKind,
    extreme_oracle,
    is_extreme_state,
    is_extreme_subnormalized,
)
from .decomposition import (
    DecompositionCertificate,
    TailReport,
    bounded_energy_decomposition,
    chord_to_energy,
    equal_energy_decomposition,
    finite_rank_approximation,
    split_rank2_at_energy,
    two_dim_energy_form,
    verify_certificate,
)
from .constrained_opt import *  # noqa: F401,F403
from .constrained_opt import __all__ as _opt_all

__version__ = "0.1.0"

__all__ = [
    "errors",
    "TOL",
    *_states_all,
    "ExtremalityReport",
    "Method",
    "SetKind",
    "extreme_oracle",
    "is_extreme_state",
    "is_extreme_subnormalized",
    "DecompositionCertificate",
    "TailReport",
    "bounded_energy_decomposition",
    "chord_to_energy",
    "equal_energy_decomposition",
    "finite_rank_approximation",
    "split_rank2_at_energy",
    "two_dim_energy_form",
    "verify_certificate",
    *_opt_all,
]
