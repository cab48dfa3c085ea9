"""Energy-constrained optimization problems that reduce to pure states."""
from .channels import (
    KrausChannel,
    apply_channel,
    complementary_channel,
    dephasing_channel,
    depolarizing_channel,
    entropy_bits,
    identity_channel,
    random_channel,
    von_neumann_entropy,
)
from .enorm import ENormResult, enorm, enorm_mixed_oracle, enorm_primal_oracle
from .minent import MinEntropyResult, min_output_entropy
from .transfer import Direction, TransferReport, convexity_transfer_check

__all__ = [
    "KrausChannel",
    "apply_channel",
    "complementary_channel",
    "von_neumann_entropy",
    "entropy_bits",
    "identity_channel",
    "dephasing_channel",
    "depolarizing_channel",
    "random_channel",
    "ENormResult",
    "enorm",
    "enorm_primal_oracle",
    "enorm_mixed_oracle",
    "MinEntropyResult",
    "min_output_entropy",
    "Direction",
    "TransferReport",
    "convexity_transfer_check",
]
