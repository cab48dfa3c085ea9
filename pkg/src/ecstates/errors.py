"""Exception hierarchy.

The CLI reports failures by class name, so names are part of the interface.
"""


class ECStatesError(ValueError):
    """Base class for every error raised by the package."""


class NotHermitian(ECStatesError):
    pass


class NotPositive(ECStatesError):
    pass


class TraceNotOne(ECStatesError):
    pass


class DimensionMismatch(ECStatesError):
    pass


class InvalidParameter(ECStatesError):
    pass


class NotMember(ECStatesError):
    """The operator is not in the energy-constrained set it was checked against."""


class DependentVectors(ECStatesError):
    pass


class NoChord(ECStatesError):
    """The fixed-energy plane misses the Bloch ball (internal consistency failure)."""


class InfeasibleBudget(ECStatesError):
    """No unit vector satisfies the energy constraint."""


class NotTracePreserving(ECStatesError):
    pass


class DocumentError(ECStatesError):
    """Malformed or mismatched document file."""
