"""Finite-dimensional states, energy observables and pure-state ensembles.

Every type validates on construction and is immutable afterwards: the
underlying arrays are marked read-only so cached eigensystems can never drift
out of sync with the matrix they describe.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .config import TOL
from .errors import (
    DimensionMismatch,
    InvalidParameter,
    NotHermitian,
    NotMember,
    NotPositive,
    TraceNotOne,
)

__all__ = [
    "Mode",
    "EnergyBudget",
    "DensityMatrix",
    "SubnormalizedOperator",
    "PureState",
    "EnergyObservable",
    "Ensemble",
    "as_hermitian",
    "as_observable",
    "validate_density",
    "validate_subnormalized",
    "energy",
    "member",
    "require_member",
    "spectral_ensemble",
    "barycenter",
    "trace_norm",
    "trace_distance",
    "operator_rank",
    "oscillator_observable",
    "gibbs_state",
    "random_density",
    "random_pure",
    "random_observable",
]


class Mode(enum.Enum):
    AT_MOST = "at-most"
    EXACT = "exact"


@dataclass(frozen=True)
class EnergyBudget:
    E: float
    mode: Mode = Mode.AT_MOST


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def as_hermitian(M, name: str = "matrix") -> np.ndarray:
    """Return ``M`` as a complex Hermitian array, symmetrized.

    Raises :class:`DimensionMismatch` for non-square input and
    :class:`NotHermitian` when any entry of ``M - M^H`` exceeds ``TOL.herm``.
    """
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {M.shape}")
    dev = np.max(np.abs(M - M.conj().T))
    if dev > TOL.herm:
        raise NotHermitian(f"{name} deviates from hermiticity by {dev:.3e}")
    return 0.5 * (M + M.conj().T)


def _eigh_descending(M: np.ndarray):
    w, v = np.linalg.eigh(M)
    return w[::-1].copy(), v[:, ::-1].copy()


class _PositiveOperator:
    """Positive semidefinite operator with eigen cache (descending order)."""

    __slots__ = ("mat", "eigenvalues", "eigenvectors")

    def __init__(self, M, *, name):
        M = as_hermitian(M, name)
        w, v = _eigh_descending(M)
        if w[-1] < -TOL.psd:
            raise NotPositive(f"{name} has eigenvalue {w[-1]:.3e} < 0")
        object.__setattr__(self, "mat", _frozen(M))
        object.__setattr__(self, "eigenvalues", _frozen(np.clip(w, 0.0, None)))
        object.__setattr__(self, "eigenvectors", _frozen(v))

    def __setattr__(self, key, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.mat)))

    def rank(self, tol: float = TOL.rank) -> int:
        return operator_rank(self.eigenvalues, self.trace, tol)

    def support(self, tol: float = TOL.rank) -> np.ndarray:
        """Orthonormal basis (columns) of the support."""
        return self.eigenvectors[:, : self.rank(tol)]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, trace={self.trace:.6g}, rank={self.rank()})"


class DensityMatrix(_PositiveOperator):
    """Validated state: positive semidefinite with unit trace."""

    __slots__ = ()

    def __init__(self, M):
        super().__init__(M, name="state")
        tr = self.trace
        if abs(tr - 1.0) > TOL.trace:
            raise TraceNotOne(f"state has trace {tr!r}")
        object.__setattr__(self, "eigenvalues", _frozen(np.clip(self.eigenvalues, 0.0, 1.0)))


class SubnormalizedOperator(_PositiveOperator):
    """Positive semidefinite operator with trace in ``[0, 1]``."""

    __slots__ = ()

    def __init__(self, M):
        super().__init__(M, name="operator")
        if self.trace > 1.0 + TOL.trace:
            raise TraceNotOne(f"subnormalized operator has trace {self.trace!r} > 1")


def validate_density(M) -> DensityMatrix:
    return M if isinstance(M, DensityMatrix) else DensityMatrix(M)


def validate_subnormalized(M) -> SubnormalizedOperator:
    if isinstance(M, SubnormalizedOperator):
        return M
    if isinstance(M, DensityMatrix):
        M = M.mat
    return SubnormalizedOperator(M)


def operator_rank(eigenvalues: np.ndarray, trace: float, tol: float = TOL.rank) -> int:
    """Count eigenvalues above ``tol`` relative to the trace.

    Operators with trace below ``TOL.trace`` use that floor as the scale, so
    round-off in a zero matrix never registers as support.
    """
    scale = max(trace, TOL.trace)
    return int(np.count_nonzero(np.asarray(eigenvalues) > tol * scale))


class PureState:
    """Unit vector with canonical global phase (first nonzero entry real positive)."""

    __slots__ = ("vec",)

    def __init__(self, vec):
        v = np.asarray(vec, dtype=np.complex128).ravel()
        if v.size == 0:
            raise DimensionMismatch("empty vector")
        nrm = np.linalg.norm(v)
        if abs(nrm - 1.0) > TOL.trace:
            raise InvalidParameter(f"pure state must have unit norm, got {nrm!r}")
        object.__setattr__(self, "vec", _frozen(_canonical_phase(v)))

    @classmethod
    def from_vector(cls, vec) -> "PureState":
        """Normalize ``vec`` and wrap it."""
        v = np.asarray(vec, dtype=np.complex128).ravel()
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise InvalidParameter("zero vector has no pure state")
        return cls(v / nrm)

    def __setattr__(self, key, value):
        raise AttributeError("PureState is immutable")

    @property
    def dim(self) -> int:
        return self.vec.size

    def projector(self) -> np.ndarray:
        return np.outer(self.vec, self.vec.conj())

    def density(self) -> DensityMatrix:
        return DensityMatrix(self.projector())

    def __eq__(self, other):
        if not isinstance(other, PureState):
            return NotImplemented
        return self.dim == other.dim and np.allclose(self.vec, other.vec, atol=1e-12, rtol=0)

    def __hash__(self):
        return hash((self.dim, tuple(np.round(self.vec, 10))))

    def __repr__(self):
        return f"PureState({np.array2string(self.vec, precision=4)})"


def _canonical_phase(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > 1e-12)
    if nz.size == 0:
        return v
    z = v[nz[0]]
    out = v * (abs(z) / z)
    out[nz[0]] = abs(z)  # exactly real, so re-canonicalizing is a no-op
    return out


class EnergyObservable:
    """Positive semidefinite energy operator with cached spectrum (ascending)."""

    __slots__ = ("mat", "eigenvalues", "eigenvectors")

    def __init__(self, M):
        M = as_hermitian(M, "observable")
        w, v = np.linalg.eigh(M)
        if w[0] < -TOL.psd:
            raise NotPositive(f"observable has eigenvalue {w[0]:.3e} < 0")
        object.__setattr__(self, "mat", _frozen(M))
        object.__setattr__(self, "eigenvalues", _frozen(w))
        object.__setattr__(self, "eigenvectors", _frozen(v))

    def __setattr__(self, key, value):
        raise AttributeError("EnergyObservable is immutable")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max_energy(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def norm(self) -> float:
        return float(max(abs(self.eigenvalues[0]), abs(self.eigenvalues[-1])))

    def eigenspace(self, which: str = "ground", tol: float = 1e-9) -> np.ndarray:
        """Orthonormal basis of the lowest or highest eigenspace."""
        w = self.eigenvalues
        scale = max(1.0, self.norm)
        if which == "ground":
            return self.eigenvectors[:, w <= w[0] + tol * scale]
        if which == "top":
            return self.eigenvectors[:, w >= w[-1] - tol * scale]
        raise InvalidParameter(f"unknown eigenspace {which!r}")

    def _lowest_index_vector(self, which: str) -> PureState:
        # Project e_0, e_1, ... onto the eigenspace, keep the first that survives.
        V = self.eigenspace(which)
        for i in range(self.dim):
            proj = V @ V[i].conj()
            if np.linalg.norm(proj) > 1e-6:
                return PureState.from_vector(proj)
        raise AssertionError("empty eigenspace")  # pragma: no cover

    def ground_state(self) -> PureState:
        """Ground eigenvector; degeneracy broken toward the lowest basis index."""
        return self._lowest_index_vector("ground")

    def top_state(self) -> PureState:
        return self._lowest_index_vector("top")

    def expectation(self, vec) -> float:
        v = vec.vec if isinstance(vec, PureState) else np.asarray(vec, dtype=np.complex128)
        return float(np.real(np.vdot(v, self.mat @ v)))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)

    def __repr__(self):
        return f"EnergyObservable(dim={self.dim}, ground={self.ground_energy:.6g}, max={self.max_energy:.6g})"


def as_observable(H) -> EnergyObservable:
    return H if isinstance(H, EnergyObservable) else EnergyObservable(H)


class Ensemble:
    """Finite probability distribution over pure states.

    ``check=False`` skips the weight validation; it exists so verifiers can be
    fed deliberately broken ensembles.
    """

    __slots__ = ("components",)

    def __init__(self, components: Iterable[tuple[float, PureState]], *, check: bool = True):
        comps = tuple((float(p), s if isinstance(s, PureState) else PureState(s)) for p, s in components)
        if check:
            if not comps:
                raise InvalidParameter("ensemble needs at least one component")
            if any(p <= 0 for p, _ in comps):
                raise InvalidParameter("ensemble weights must be positive")
            total = sum(p for p, _ in comps)
            if abs(total - 1.0) > TOL.trace:
                raise InvalidParameter(f"ensemble weights sum to {total!r}")
        dims = {s.dim for _, s in comps}
        if len(dims) > 1:
            raise DimensionMismatch(f"ensemble components have dimensions {sorted(dims)}")
        object.__setattr__(self, "components", comps)

    def __setattr__(self, key, value):
        raise AttributeError("Ensemble is immutable")

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    @property
    def dim(self) -> int:
        return self.components[0][1].dim

    @property
    def weights(self) -> np.ndarray:
        return np.array([p for p, _ in self.components])

    @property
    def vectors(self) -> np.ndarray:
        """Component vectors as columns."""
        return np.column_stack([s.vec for _, s in self.components])

    def energies(self, H) -> np.ndarray:
        H = as_observable(H)
        return np.array([H.expectation(s) for _, s in self.components])

    def __repr__(self):
        return f"Ensemble(n={len(self)}, dim={self.dim})"


def _matrix_of(rho) -> np.ndarray:
    if isinstance(rho, (_PositiveOperator, EnergyObservable)):
        return rho.mat
    if isinstance(rho, PureState):
        return rho.projector()
    return np.asarray(rho, dtype=np.complex128)


def energy(rho, H) -> float:
    """``Tr H rho`` for a state, subnormalized operator or pure state."""
    H = as_observable(H)
    R = _matrix_of(rho)
    if R.shape != H.mat.shape:
        raise DimensionMismatch(f"state shape {R.shape} vs observable shape {H.mat.shape}")
    return float(np.real(np.einsum("ij,ji->", H.mat, R)))


def member(rho, H, budget: EnergyBudget, tol: float = 1e-9) -> bool:
    """Whether ``rho`` satisfies the energy budget (``AT_MOST`` or ``EXACT``)."""
    e = energy(rho, H)
    if budget.mode is Mode.AT_MOST:
        return e <= budget.E + tol
    return abs(e - budget.E) <= tol


def require_member(rho, H, E: float, tol: float = TOL.active) -> float:
    """Return the energy of ``rho`` or raise :class:`NotMember` if it exceeds ``E``."""
    e = energy(rho, H)
    if e > E + tol:
        raise NotMember(f"energy {e:.12g} exceeds budget {E:.12g}")
    return e


def spectral_ensemble(rho) -> Ensemble:
    """Eigen-ensemble of ``rho``; eigenvalues at or below the rank threshold are dropped."""
    rho = validate_density(rho)
    r = rho.rank()
    w = rho.eigenvalues[:r]
    w = w / w.sum()
    return Ensemble((p, PureState(rho.eigenvectors[:, i])) for i, p in enumerate(w))


def barycenter(ens: Ensemble) -> DensityMatrix:
    V = ens.vectors
    M = (V * ens.weights) @ V.conj().T
    return DensityMatrix(M)


def trace_norm(X) -> float:
    X = as_hermitian(X, "difference")
    return float(np.sum(np.abs(np.linalg.eigvalsh(X))))


def trace_distance(a, b) -> float:
    """Full trace norm ``||a - b||_1`` (no factor one half)."""
    A, B = _matrix_of(a), _matrix_of(b)
    if A.shape != B.shape:
        raise DimensionMismatch(f"shapes {A.shape} and {B.shape}")
    return trace_norm(A - B)


# --- fixtures ---------------------------------------------------------------


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def oscillator_observable(d: int) -> EnergyObservable:
    """Truncated harmonic oscillator ``diag(0, 1, ..., d-1)`` in units of hbar*omega."""
    if d < 1:
        raise InvalidParameter("dimension must be >= 1")
    return EnergyObservable(np.diag(np.arange(d, dtype=float)))


def gibbs_state(H, beta: float) -> DensityMatrix:
    if not beta > 0:
        raise InvalidParameter(f"beta must be positive, got {beta!r}")
    H = as_observable(H)
    w = np.exp(-beta * (H.eigenvalues - H.ground_energy))
    w /= w.sum()
    V = H.eigenvectors
    return DensityMatrix((V * w) @ V.conj().T)


def random_pure(d: int, seed=None) -> PureState:
    """Haar-random pure state (normalized complex Gaussian vector)."""
    if d < 1:
        raise InvalidParameter("dimension must be >= 1")
    rng = _rng(seed)
    return PureState.from_vector(rng.standard_normal(d) + 1j * rng.standard_normal(d))


def random_density(d: int, rank: int | None = None, seed=None) -> DensityMatrix:
    """Random state of the given rank from a ``d x rank`` Ginibre matrix."""
    rank = d if rank is None else rank
    if d < 1 or not 1 <= rank <= d:
        raise InvalidParameter(f"need 1 <= rank <= d, got d={d}, rank={rank}")
    rng = _rng(seed)
    G = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    M = G @ G.conj().T
    return DensityMatrix(M / np.real(np.trace(M)))


def random_observable(d: int, seed=None, scale: float = 1.0) -> EnergyObservable:
    """Random positive semidefinite observable with spectrum spanning ``[0, 2*scale]``."""
    if d < 1:
        raise InvalidParameter("dimension must be >= 1")
    rng = _rng(seed)
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    X = 0.5 * (G + G.conj().T)
    w = np.linalg.eigvalsh(X)
    X = (X - w[0] * np.eye(d)) * (2.0 * scale / max(w[-1] - w[0], 1e-12))
    return EnergyObservable(X)
