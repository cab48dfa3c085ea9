"""Pure-state ensemble decompositions under energy constraints.

The workhorse is the geometry of a two-dimensional subspace: states supported
on ``span{psi_a, psi_b}`` form a Bloch ball on which the energy is an affine
function ``c0 + c . r``.  A fixed energy cuts the ball in a disk whose boundary
circle consists of pure states, so any rank-2 piece with mean energy ``E`` can
be split into two pure states of energy exactly ``E``.  Repeating that split on
pairs of eigencomponents from opposite sides of ``E`` yields an exact-energy
ensemble with at most ``2 * rank`` members.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import TOL
from .errors import DependentVectors, InvalidParameter, NoChord
from .states import (
    DensityMatrix,
    EnergyObservable,
    Ensemble,
    Mode,
    PureState,
    as_observable,
    energy,
    operator_rank,
    require_member,
    spectral_ensemble,
    trace_norm,
    validate_density,
)

__all__ = [
    "TwoDimEnergyForm",
    "two_dim_energy_form",
    "split_rank2_at_energy",
    "chord_to_energy",
    "DecompositionCertificate",
    "equal_energy_decomposition",
    "bounded_energy_decomposition",
    "TailReport",
    "finite_rank_approximation",
    "verify_certificate",
]


def _vec(psi) -> np.ndarray:
    return psi.vec if isinstance(psi, PureState) else np.asarray(psi, dtype=np.complex128).ravel()


def _bloch_coefficients(C: np.ndarray) -> tuple[float, np.ndarray]:
    """Affine coefficients of ``r -> Tr(C (I + r.sigma) / 2)`` for a 2x2 Hermitian ``C``."""
    c0 = 0.5 * float(np.real(C[0, 0] + C[1, 1]))
    c = np.array([np.real(C[0, 1]), -np.imag(C[0, 1]), 0.5 * np.real(C[0, 0] - C[1, 1])])
    return c0, c


@dataclass(frozen=True)
class TwoDimEnergyForm:
    """Energy of states on a 2D subspace as an affine function of the Bloch vector.

    ``basis`` holds two orthonormal columns ``(e1, e2)``; a state with Bloch
    vector ``r`` in that basis has energy ``c0 + c @ r``.
    """

    basis: np.ndarray
    c0: float
    c: np.ndarray
    compression: np.ndarray = field(repr=False)

    def energy(self, r) -> float:
        return self.c0 + float(self.c @ np.asarray(r, dtype=float))

    def coefficients(self, M) -> tuple[float, np.ndarray]:
        """``(c0, c)`` of another Hermitian operator in the same basis."""
        B = self.basis
        return _bloch_coefficients(B.conj().T @ np.asarray(M) @ B)

    def bloch(self, op) -> tuple[float, np.ndarray]:
        """Trace and normalized Bloch vector of the compression of ``op``."""
        B = self.basis
        T = B.conj().T @ np.asarray(op) @ B
        tr = float(np.real(T[0, 0] + T[1, 1]))
        r = np.array([2 * np.real(T[0, 1]), -2 * np.imag(T[0, 1]), np.real(T[0, 0] - T[1, 1])])
        return tr, r / tr

    def bloch_of_vector(self, psi) -> np.ndarray:
        v = _vec(psi)
        return self.bloch(np.outer(v, v.conj()))[1]

    def lift(self, u) -> np.ndarray:
        """Unit vector in the full space whose Bloch vector is the unit vector ``u``."""
        ux, uy, uz = np.asarray(u, dtype=float) / np.linalg.norm(u)
        if uz >= 0:
            a = math.sqrt((1 + uz) / 2)
            v = np.array([a, (ux + 1j * uy) / (2 * a)])
        else:
            b = math.sqrt((1 - uz) / 2)
            v = np.array([(ux - 1j * uy) / (2 * b), b])
        return self.basis @ v

    def state(self, u) -> PureState:
        return PureState.from_vector(self.lift(u))


def two_dim_energy_form(psi_a, psi_b, H) -> TwoDimEnergyForm:
    """Orthonormalize ``(psi_a, psi_b)`` and expand the compression of ``H`` in Pauli terms."""
    H = as_observable(H)
    a, b = _vec(psi_a), _vec(psi_b)
    gram = np.real(np.vdot(a, a) * np.vdot(b, b) - abs(np.vdot(a, b)) ** 2)
    if gram <= TOL.gram:
        raise DependentVectors(f"Gram determinant {gram:.3e}")
    e1 = a / np.linalg.norm(a)
    b = b - np.vdot(e1, b) * e1
    e2 = b / np.linalg.norm(b)
    B = np.column_stack([e1, e2])
    C = B.conj().T @ H.mat @ B
    c0, c = _bloch_coefficients(C)
    return TwoDimEnergyForm(B, c0, c, C)


def _unit_perp(n: np.ndarray) -> np.ndarray:
    """Deterministic unit vector orthogonal to ``n`` (any unit vector if ``n`` is zero)."""
    nn = np.linalg.norm(n)
    if nn < 1e-300:
        return np.array([1.0, 0.0, 0.0])
    n = n / nn
    axis = np.eye(3)[int(np.argmin(np.abs(n)))]
    p = axis - (axis @ n) * n
    return p / np.linalg.norm(p)


def split_rank2_at_energy(p_a: float, psi_a, p_b: float, psi_b, H) -> list[tuple[float, PureState]]:
    """Split ``p_a|a><a| + p_b|b><b|`` into pure states at the pair's mean energy.

    Returns one or two ``(weight, state)`` pairs whose weights sum to
    ``p_a + p_b``; a chord that degenerates to a single point is pruned to one
    component.
    """
    if not (p_a > 0 and p_b > 0):
        raise InvalidParameter("weights must be positive")
    H = as_observable(H)
    form = two_dim_energy_form(psi_a, psi_b, H)
    a, b = _vec(psi_a), _vec(psi_b)
    total = p_a + p_b
    tau = p_a * np.outer(a, a.conj()) + p_b * np.outer(b, b.conj())
    _, s = form.bloch(tau)
    mean = form.energy(s)
    cn = np.linalg.norm(form.c)
    if abs(mean - form.c0) > cn + 1e-12:
        raise NoChord(f"plane at energy {mean:.12g} misses the Bloch ball")

    if cn > 1e-14:
        n = form.c / cn
        d = s - (s @ n) * n
    else:
        n = np.zeros(3)
        d = s.copy()
    dn = np.linalg.norm(d)
    d = d / dn if dn > 1e-12 else _unit_perp(n)

    # s + t d on the unit sphere: t^2 + 2 (s.d) t + |s|^2 - 1 = 0
    sd = s @ d
    disc = math.sqrt(max(sd * sd - (s @ s) + 1.0, 0.0))
    t_plus, t_minus = -sd + disc, -sd - disc
    u, v = s + t_plus * d, s + t_minus * d
    span = t_plus - t_minus
    lam = -t_minus / span if span > 0 else 1.0
    q_u, q_v = total * lam, total * (1.0 - lam)

    out = []
    for q, w in ((q_u, u), (q_v, v)):
        if q > 1e-15 * total:
            out.append((q, form.state(w)))
    if len(out) == 1:
        out = [(total, out[0][1])]
    return out


def chord_to_energy(psi, anchor, H, target: float) -> PureState:
    """First pure state on the great-circle arc from ``psi`` to ``anchor`` with energy ``target``.

    ``target`` must lie between the energies of the two endpoints.  When the
    two vectors are parallel ``psi`` itself is returned if it already meets the
    target.
    """
    H = as_observable(H)
    p, q = _vec(psi), _vec(anchor)
    e_start = H.expectation(p)
    if abs(e_start - target) <= 1e-14 * max(1.0, abs(target)):
        return PureState.from_vector(p)
    try:
        form = two_dim_energy_form(p, q, H)
    except DependentVectors:
        return PureState.from_vector(p)
    ua = form.bloch_of_vector(q)
    north = np.array([0.0, 0.0, 1.0])
    w = ua - ua[2] * north
    wn = np.linalg.norm(w)
    w = w / wn if wn > 1e-12 else np.array([1.0, 0.0, 0.0])
    arc = math.atan2(wn, ua[2])

    # energy(theta) = c0 + A cos(theta) + B sin(theta) along the arc
    A, B = form.c[2], form.c @ w
    R = math.hypot(A, B)
    k = target - form.c0
    if R < 1e-300:
        return PureState.from_vector(p)
    phase = math.atan2(B, A)
    delta = math.acos(max(-1.0, min(1.0, k / R)))
    cands = [(phase + delta) % (2 * math.pi), (phase - delta) % (2 * math.pi)]
    cands = [t for t in cands if t <= arc + 1e-9]
    theta = min(cands) if cands else arc
    return form.state(math.cos(theta) * north + math.sin(theta) * w)


# --- certificates -------------------------------------------------------------


@dataclass(frozen=True)
class DecompositionCertificate:
    """Ensemble for ``target`` together with the data needed to re-check it."""

    target: DensityMatrix
    observable: EnergyObservable
    ensemble: Ensemble
    reconstruction_error: float
    energies: tuple[float, ...]
    mode: Mode
    budget: float
    merges: int = 0


def _reconstruct(ens: Ensemble) -> np.ndarray:
    V = ens.vectors
    return (V * ens.weights) @ V.conj().T


def _certify(rho: DensityMatrix, H: EnergyObservable, comps, mode: Mode, budget: float, merges: int):
    ens = Ensemble(comps)
    err = trace_norm(_reconstruct(ens) - rho.mat)
    return DecompositionCertificate(
        target=rho,
        observable=H,
        ensemble=ens,
        reconstruction_error=err,
        energies=tuple(float(e) for e in ens.energies(H)),
        mode=mode,
        budget=float(budget),
        merges=merges,
    )


def equal_energy_decomposition(rho, H) -> DecompositionCertificate:
    """Ensemble of pure states all carrying the energy ``Tr H rho``.

    Starts from the eigen-ensemble and repeatedly merges the lowest-energy with
    the highest-energy component, transferring just enough weight that the
    merged pair has mean energy ``E0``, then splits the pair on its fixed-energy
    chord.  Each merge retires at least one eigencomponent.
    """
    rho = validate_density(rho)
    H = as_observable(H)
    E0 = energy(rho, H)
    tol = TOL.balanced

    done: list[tuple[float, PureState]] = []
    pool: list[list] = []
    for p, s in spectral_ensemble(rho):
        e = H.expectation(s)
        if abs(e - E0) <= tol:
            done.append((p, s))
        else:
            pool.append([p, s, e])

    merges = 0
    while pool:
        ia = min(range(len(pool)), key=lambda i: pool[i][2])
        ib = max(range(len(pool)), key=lambda i: pool[i][2])
        p_a, s_a, e_a = pool[ia]
        p_b, s_b, e_b = pool[ib]
        if not (e_a < E0 < e_b):
            # Only round-off can leave a one-sided pool: near-balanced components
            # are accepted and negligible crumbs are dropped.
            stray = [c for c in pool if abs(c[2] - E0) > 0.5 * TOL.certificate]
            lost = sum(c[0] for c in stray)
            if lost > 1e-10:
                worst = max(abs(e - E0) for _, _, e in stray)
                raise RuntimeError(f"unbalanced pool with deviation {worst:.3e} and weight {lost:.3e}")
            done.extend((p, s) for p, s, e in pool if abs(e - E0) <= 0.5 * TOL.certificate)
            total = sum(p for p, _ in done)
            done = [(p / total, s) for p, s in done]
            break

        need_a = p_b * (e_b - E0) / (E0 - e_a)
        if abs(need_a - p_a) <= 1e-12 * max(p_a, p_b):
            w_a, w_b = p_a, p_b
            keep = []
        elif need_a < p_a:
            w_a, w_b = need_a, p_b
            keep = [[p_a - need_a, s_a, e_a]] if p_a - need_a > 1e-12 else []
        else:
            w_b = p_a * (E0 - e_a) / (e_b - E0)
            w_a = p_a
            keep = [[p_b - w_b, s_b, e_b]] if p_b - w_b > 1e-12 else []
        pool = [c for i, c in enumerate(pool) if i not in (ia, ib)] + keep
        done.extend(split_rank2_at_energy(w_a, s_a, w_b, s_b, H))
        merges += 1

    return _certify(rho, H, done, Mode.EXACT, E0, merges)


def bounded_energy_decomposition(rho, H, E: float) -> DecompositionCertificate:
    """Pure-state ensemble with every component at energy at most ``E``."""
    rho = validate_density(rho)
    H = as_observable(H)
    require_member(rho, H, E)
    cert = equal_energy_decomposition(rho, H)
    return DecompositionCertificate(
        target=cert.target,
        observable=H,
        ensemble=cert.ensemble,
        reconstruction_error=cert.reconstruction_error,
        energies=cert.energies,
        mode=Mode.AT_MOST,
        budget=float(E),
        merges=cert.merges,
    )


def verify_certificate(cert: DecompositionCertificate) -> bool:
    """Recompute everything the certificate claims; ``True`` only if all of it holds."""
    ens, H = cert.ensemble, cert.observable
    w = ens.weights
    if len(ens) == 0 or np.any(w <= 0) or abs(w.sum() - 1.0) > TOL.trace:
        return False
    err = trace_norm(_reconstruct(ens) - cert.target.mat)
    if err > TOL.reconstruction or abs(err - cert.reconstruction_error) > TOL.reconstruction:
        return False
    e = ens.energies(H)
    if len(cert.energies) != len(e) or np.any(np.abs(e - np.asarray(cert.energies)) > TOL.certificate):
        return False
    if cert.mode is Mode.EXACT:
        if abs(energy(cert.target, H) - cert.budget) > TOL.certificate:
            return False
        if np.any(np.abs(e - cert.budget) > TOL.certificate):
            return False
    elif np.any(e > cert.budget + TOL.certificate):
        return False
    return len(ens) <= 2 * cert.target.rank()


# --- finite-rank truncation ---------------------------------------------------


@dataclass(frozen=True)
class TailReport:
    n: int
    tail_mass: float
    tail_energy_bound: float | None  # mean energy of the discarded tail; None if the tail is empty
    tau_energy: float
    trace_distance: float  # ||rho_n - rho||_1
    energy: float
    original_energy: float


def finite_rank_approximation(eigenweights, H, n: int) -> tuple[DensityMatrix, TailReport]:
    """Keep the first ``n`` eigencomponents and move the tail mass onto the ground state.

    ``eigenweights`` is a sequence of ``(p_i, phi_i)`` with orthonormal
    ``phi_i``.  The ground eigenvector never raises the energy, so the
    truncated state stays inside every energy budget the original met.
    """
    H = as_observable(H)
    comps = [(float(p), _vec(v)) for p, v in eigenweights]
    if not 0 <= n < len(comps):
        raise InvalidParameter(f"need 0 <= n < {len(comps)}, got {n}")
    p = np.array([c[0] for c in comps])
    if np.any(p < -TOL.psd) or abs(p.sum() - 1.0) > TOL.trace:
        raise InvalidParameter("weights must be a probability vector")
    V = np.column_stack([c[1] for c in comps])
    if np.max(np.abs(V.conj().T @ V - np.eye(V.shape[1]))) > 1e-8:
        raise InvalidParameter("components must be orthonormal")
    if V.shape[0] != H.dim:
        raise InvalidParameter("component dimension does not match observable")

    rho = (V * p) @ V.conj().T
    q = float(p[n:].sum())
    tail_energies = np.array([H.expectation(V[:, i]) for i in range(n, len(comps))])
    bound = float(p[n:] @ tail_energies / q) if q > 0 else None
    g = H.ground_state().vec
    rho_n = (V[:, :n] * p[:n]) @ V[:, :n].conj().T + q * np.outer(g, g.conj())
    report = TailReport(
        n=n,
        tail_mass=q,
        tail_energy_bound=bound,
        tau_energy=H.expectation(g),
        trace_distance=trace_norm(rho_n - rho),
        energy=float(np.real(np.einsum("ij,ji->", H.mat, rho_n))),
        original_energy=float(np.real(np.einsum("ij,ji->", H.mat, rho))),
    )
    return DensityMatrix(rho_n), report
