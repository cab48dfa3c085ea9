"""Numerical tolerances shared by every module.

All comparisons in the package read from :data:`TOL`, so property tests have a
single place to look when a threshold needs to be understood.
"""
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    herm: float = 1e-10       # max |M - M^H| entry
    psd: float = 1e-10        # eigenvalues >= -psd count as positive
    trace: float = 1e-10      # |Tr rho - 1|, |norm - 1|
    rank: float = 1e-9        # eigenvalue > rank * trace counts toward the rank
    active: float = 1e-8      # |Tr H T - E| <= active means the energy bound binds
    nullspace: float = 1e-10  # singular-value cutoff for constraint rank
    gram: float = 1e-12       # Gram determinant below this means dependent vectors
    balanced: float = 1e-9    # component energy counts as on-target
    certificate: float = 1e-8  # per-component energy test in certificates
    reconstruction: float = 1e-9
    entropy_floor: float = 1e-12  # eigenvalues below are dropped from entropy sums


TOL = Tolerances()
