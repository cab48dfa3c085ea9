"""Kraus channels, complementary channels and von Neumann entropy."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ..config import TOL
from ..errors import DimensionMismatch, InvalidParameter, NotTracePreserving
from ..states import DensityMatrix, PureState, _rng, validate_density

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
]


class KrausChannel:
    """CPTP map ``rho -> sum_i K_i rho K_i^H`` given by a nonempty Kraus family."""

    __slots__ = ("stack",)

    def __init__(self, kraus: Sequence):
        ops = [np.asarray(K, dtype=np.complex128) for K in kraus]
        if not ops:
            raise InvalidParameter("a channel needs at least one Kraus operator")
        shapes = {K.shape for K in ops}
        if len(shapes) != 1 or ops[0].ndim != 2:
            raise DimensionMismatch(f"Kraus operators have shapes {sorted(shapes)}")
        stack = np.ascontiguousarray(np.stack(ops))
        din = stack.shape[2]
        S = np.einsum("kmi,kmj->ij", stack.conj(), stack)
        dev = np.max(np.abs(S - np.eye(din)))
        if dev > 1e-9:
            raise NotTracePreserving(f"sum K^H K deviates from identity by {dev:.3e}")
        stack.setflags(write=False)
        object.__setattr__(self, "stack", stack)

    def __setattr__(self, key, value):
        raise AttributeError("KrausChannel is immutable")

    @property
    def kraus(self) -> list[np.ndarray]:
        return list(self.stack)

    @property
    def n_kraus(self) -> int:
        return self.stack.shape[0]

    @property
    def dim_in(self) -> int:
        return self.stack.shape[2]

    @property
    def dim_out(self) -> int:
        return self.stack.shape[1]

    def output_matrix(self, rho) -> np.ndarray:
        R = rho.projector() if isinstance(rho, PureState) else np.asarray(rho, dtype=np.complex128)
        if R.shape != (self.dim_in, self.dim_in):
            raise DimensionMismatch(f"input shape {R.shape}, channel expects {self.dim_in}")
        return np.einsum("kmi,ij,knj->mn", self.stack, R, self.stack.conj())

    def __call__(self, rho) -> DensityMatrix:
        return apply_channel(self, rho)

    def __repr__(self):
        return f"KrausChannel(n_kraus={self.n_kraus}, dim_in={self.dim_in}, dim_out={self.dim_out})"


def apply_channel(Phi: KrausChannel, rho) -> DensityMatrix:
    if not isinstance(rho, PureState):
        rho = validate_density(rho)
    return DensityMatrix(Phi.output_matrix(rho))


def complementary_channel(Phi: KrausChannel) -> KrausChannel:
    """Channel to the environment: output entry ``(i, j)`` is ``Tr(K_i rho K_j^H)``.

    Its Kraus operators are ``L_m[i, :] = K_i[m, :]``, one per output basis
    vector of ``Phi``.  On pure inputs both channels have the same output
    spectrum.
    """
    L = np.transpose(Phi.stack, (1, 0, 2))
    return KrausChannel(list(L))


def von_neumann_entropy(rho) -> float:
    """``-sum lam log lam`` in nats, ignoring eigenvalues below ``TOL.entropy_floor``."""
    if isinstance(rho, DensityMatrix):
        lam = rho.eigenvalues
    else:
        lam = validate_density(rho).eigenvalues
    lam = lam[lam > TOL.entropy_floor]
    return float(-np.sum(lam * np.log(lam)))


def entropy_bits(nats: float) -> float:
    return nats / np.log(2.0)


# --- fixtures ---------------------------------------------------------------


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel([np.eye(d)])


def dephasing_channel() -> KrausChannel:
    """Qubit dephasing ``{sqrt(1/2) I, sqrt(1/2) Z}``."""
    s = np.sqrt(0.5)
    return KrausChannel([s * np.eye(2), s * np.diag([1.0, -1.0])])


def depolarizing_channel(d: int) -> KrausChannel:
    """Completely depolarizing channel with Kraus operators ``|i><j| / sqrt(d)``."""
    ops = []
    for i in range(d):
        for j in range(d):
            K = np.zeros((d, d))
            K[i, j] = 1 / np.sqrt(d)
            ops.append(K)
    return KrausChannel(ops)


def random_channel(d_in: int, d_out: int | None = None, n_kraus: int = 2, seed=None) -> KrausChannel:
    """Random channel from an isometry ``C^d_in -> C^d_out (x) C^n_kraus``."""
    d_out = d_in if d_out is None else d_out
    if d_out * n_kraus < d_in:
        raise InvalidParameter("need d_out * n_kraus >= d_in for an isometry")
    rng = _rng(seed)
    G = rng.standard_normal((d_out * n_kraus, d_in)) + 1j * rng.standard_normal((d_out * n_kraus, d_in))
    Q, _ = np.linalg.qr(G)
    return KrausChannel(list(Q.reshape(n_kraus, d_out, d_in)))
