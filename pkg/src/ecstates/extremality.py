"""Extremality tests for energy-constrained state sets.

Two independent routes decide whether a point is extreme:

* the rank test (``Method.THEOREM``): a point of the bounded-energy state set
  is extreme exactly when it is a pure state, and a point of the subnormalized
  set can only be extreme when its rank is at most one;
* the perturbation oracle (``Method.ORACLE``): ``T +/- eps*D`` stays positive
  for small ``eps`` iff ``supp D`` lies in ``supp T``, so the directions of
  segments through ``T`` form the linear space of Hermitian ``D = U X U^H``
  (``U`` an orthonormal support basis) obeying the active trace and energy
  constraints.  The point is extreme iff that space is zero.

When a point is not extreme the report carries a unit witness direction.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .config import TOL
from .decomposition import two_dim_energy_form
from .errors import InvalidParameter, NotMember
from .states import (
    as_observable,
    energy,
    validate_density,
    validate_subnormalized,
)

__all__ = [
    "Method",
    "SetKind",
    "ExtremalityReport",
    "hermitian_basis",
    "extreme_oracle",
    "is_extreme_state",
    "is_extreme_subnormalized",
]


class Method(enum.Enum):
    THEOREM = "theorem"
    ORACLE = "oracle"


class SetKind(enum.Enum):
    STATES = "states"
    SUBNORMALIZED = "subnormalized"


@dataclass(frozen=True)
class ExtremalityReport:
    is_extreme: bool
    method: Method
    perturbation_dim: int
    witness: np.ndarray | None
    rank: int
    energy_active: bool
    trace_active: bool


def hermitian_basis(r: int) -> list[np.ndarray]:
    """Frobenius-orthonormal basis of the ``r**2``-dimensional real space of ``r x r`` Hermitian matrices."""
    basis = []
    for j in range(r):
        B = np.zeros((r, r), dtype=np.complex128)
        B[j, j] = 1.0
        basis.append(B)
    s = 1 / np.sqrt(2)
    for j in range(r):
        for k in range(j + 1, r):
            B = np.zeros((r, r), dtype=np.complex128)
            B[j, k] = B[k, j] = s
            basis.append(B)
            B = np.zeros((r, r), dtype=np.complex128)
            B[j, k], B[k, j] = -1j * s, 1j * s
            basis.append(B)
    return basis


def _prepare(T, H, E, kind: SetKind):
    if kind is SetKind.STATES:
        T = validate_density(T)
    elif kind is SetKind.SUBNORMALIZED:
        T = validate_subnormalized(T)
    else:
        raise InvalidParameter(f"unknown set kind {kind!r}")
    H = as_observable(H)
    e = energy(T, H)
    if e > E + TOL.active:
        raise NotMember(f"energy {e:.12g} exceeds budget {E:.12g}")
    energy_active = abs(e - E) <= TOL.active
    if kind is SetKind.STATES:
        trace_active = True
    else:
        tr = T.trace
        trace_active = tr <= TOL.active or abs(tr - 1.0) <= TOL.active
    return T, H, energy_active, trace_active


def extreme_oracle(T, H, E: float, set_kind: SetKind = SetKind.STATES) -> ExtremalityReport:
    """Decide extremality from the dimension of the feasible perturbation space."""
    T, H, energy_active, trace_active = _prepare(T, H, E, set_kind)
    U = T.support()
    r = U.shape[1]
    if r == 0:
        return ExtremalityReport(True, Method.ORACLE, 0, None, 0, energy_active, trace_active)

    basis = hermitian_basis(r)
    rows = []
    if trace_active:
        rows.append(np.array([np.real(np.trace(B)) for B in basis]))
    if energy_active:
        Hr = U.conj().T @ H.mat @ U
        row = np.array([np.real(np.sum(Hr.T * B)) for B in basis])
        # A vanishing row (H zero on the support) imposes no constraint.
        if np.linalg.norm(row) > TOL.nullspace * max(1.0, H.norm):
            rows.append(row)

    n = r * r
    if rows:
        C = np.array([row / np.linalg.norm(row) for row in rows])
        _, sv, Vt = np.linalg.svd(C)
        k = int(np.count_nonzero(sv > TOL.nullspace))
        null = Vt[k:]
    else:
        null = np.eye(n)
    dim = null.shape[0]
    witness = None
    if dim > 0:
        X = sum(x * B for x, B in zip(null[0], basis))
        D = U @ X @ U.conj().T
        witness = 0.5 * (D + D.conj().T) / np.linalg.norm(D)
    return ExtremalityReport(dim == 0, Method.ORACLE, dim, witness, r, energy_active, trace_active)


def is_extreme_state(rho, H, E: float) -> ExtremalityReport:
    """Rank test for the bounded-energy state set.

    Mixed points get a witness inside the span of the two leading
    eigenvectors: a traceless direction on that Bloch ball, orthogonal to the
    energy gradient when the energy bound is active.
    """
    rho, H, energy_active, _ = _prepare(rho, H, E, SetKind.STATES)
    r = rho.rank()
    if r == 1:
        return ExtremalityReport(True, Method.THEOREM, 0, None, 1, energy_active, True)

    U = rho.support()
    dim = r * r - 1
    if energy_active:
        Hr = U.conj().T @ H.mat @ U
        off = Hr - (np.real(np.trace(Hr)) / r) * np.eye(r)
        if np.linalg.norm(off) > TOL.nullspace * max(1.0, H.norm):
            dim -= 1

    form = two_dim_energy_form(U[:, 0], U[:, 1], H)
    if energy_active and np.linalg.norm(form.c) > 1e-14:
        n = form.c / np.linalg.norm(form.c)
        axis = np.eye(3)[int(np.argmin(np.abs(n)))]
        a = axis - (axis @ n) * n
        a /= np.linalg.norm(a)
    else:
        a = np.array([0.0, 0.0, 1.0])
    pauli = np.array([[a[2], a[0] - 1j * a[1]], [a[0] + 1j * a[1], -a[2]]]) / np.sqrt(2)
    B = form.basis
    witness = B @ pauli @ B.conj().T
    return ExtremalityReport(False, Method.THEOREM, dim, witness, r, energy_active, True)


def is_extreme_subnormalized(T, H, E: float) -> ExtremalityReport:
    """Rank necessity test; rank-<=1 points are settled by the oracle."""
    T, H, _, _ = _prepare(T, H, E, SetKind.SUBNORMALIZED)
    report = extreme_oracle(T, H, E, SetKind.SUBNORMALIZED)
    if report.rank >= 2:
        assert not report.is_extreme
        return ExtremalityReport(
            False, Method.THEOREM, report.perturbation_dim, report.witness,
            report.rank, report.energy_active, report.trace_active,
        )
    return report
