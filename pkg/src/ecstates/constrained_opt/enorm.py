"""Energy-constrained operator norms.

``||A||_E = sup { ||A phi|| : ||phi|| = 1, <phi|H|phi> <= E }``.

With ``M = A^H A`` the squared norm is a quadratic maximization with one
quadratic constraint besides the sphere.  Its Lagrangian dual

    g(mu) = lambda_max(M - mu H) + mu E,   mu >= 0,

is convex and one-dimensional; :func:`enorm` minimizes it by golden-section
search and then recovers a feasible primal witness inside two-dimensional
spans of near-optimal eigenvectors, where the constrained problem has a
closed-form solution.  The reported gap between the dual bound and the
witness certifies the value.

:func:`enorm_primal_oracle` (ascent over pure states) and
:func:`enorm_mixed_oracle` (sampling mixed states) are independent checks.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..errors import DependentVectors, DimensionMismatch, InfeasibleBudget
from ..decomposition import chord_to_energy, two_dim_energy_form
from ..states import PureState, _rng, as_observable, random_density

__all__ = [
    "ENormResult",
    "enorm",
    "enorm_primal_oracle",
    "enorm_mixed_oracle",
    "golden_section",
    "best_in_span",
]

_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ENormResult:
    value: float        # the norm (not squared)
    mu_star: float      # optimal multiplier; inf when the budget sits at the ground energy
    witness: PureState
    dual_value: float   # squared units
    gap: float          # dual_value - <witness|M|witness>


def golden_section(f, lo: float, hi: float, tol: float = 1e-10, max_iter: int = 500):
    """Minimize a unimodal ``f`` on ``[lo, hi]``; returns ``(x_best, f_best)`` over all evaluations."""
    a, b = lo, hi
    x1 = b - _PHI * (b - a)
    x2 = a + _PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    best = min((f(lo), lo), (f(hi), hi), (f1, x1), (f2, x2))
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _PHI * (b - a)
            f1 = f(x1)
            best = min(best, (f1, x1))
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _PHI * (b - a)
            f2 = f(x2)
            best = min(best, (f2, x2))
    return best[1], best[0]


def _prepare(A, H, E):
    H = as_observable(H)
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2 or A.shape[1] != H.dim:
        raise DimensionMismatch(f"operator shape {A.shape} vs observable dim {H.dim}")
    if E < H.ground_energy - 1e-10 * max(1.0, H.norm):
        raise InfeasibleBudget(f"budget {E!r} below ground energy {H.ground_energy!r}")
    M = A.conj().T @ A
    return A, H, 0.5 * (M + M.conj().T)


def _rayleigh(M, v) -> float:
    return float(np.real(np.vdot(v, M @ v)))


def best_in_span(psi_a, psi_b, M, H, E: float):
    """Maximize ``<phi|M|phi>`` over unit ``phi`` in ``span{psi_a, psi_b}`` with energy at most ``E``.

    Exact: on the Bloch sphere of the span both forms are affine, so the
    optimum is the unconstrained maximizer if feasible, otherwise the best
    point of the fixed-energy circle.  Returns ``None`` when the span holds no
    feasible state or the vectors are dependent.
    """
    try:
        form = two_dim_energy_form(psi_a, psi_b, H)
    except DependentVectors:
        return None
    _, m = form.coefficients(M)
    c = form.c
    cn, mn = np.linalg.norm(c), np.linalg.norm(m)
    if mn > 1e-300:
        u = m / mn
        if form.energy(u) <= E:
            return form.lift(u)
    elif cn < 1e-300 or form.c0 - cn <= E:
        u = -c / cn if cn > 1e-300 else np.array([0.0, 0.0, 1.0])
        return form.lift(u) if form.energy(u) <= E + 1e-12 else None
    if cn < 1e-300:
        return None
    k = (E - form.c0) / cn
    if k < -1.0:
        return None
    k = min(k, 1.0)
    n = c / cn
    mp = m - (m @ n) * n
    mpn = np.linalg.norm(mp)
    if mpn > 1e-14 * max(1.0, mn):
        t = mp / mpn
    else:
        axis = np.eye(3)[int(np.argmin(np.abs(n)))]
        t = axis - (axis @ n) * n
        t /= np.linalg.norm(t)
    u = k * n + math.sqrt(max(0.0, 1.0 - k * k)) * t
    return form.lift(u)


def _top(X):
    w, v = np.linalg.eigh(X)
    return w, v


def enorm(A, H, E: float) -> ENormResult:
    """Energy-constrained operator norm by exact Lagrangian duality."""
    A, H, M = _prepare(A, H, E)
    wM, VM = np.linalg.eigh(M)
    lam_max, lam_min = float(wM[-1]), float(wM[0])
    scale = max(1.0, abs(lam_max))
    e_gap = E - H.ground_energy

    # (a) the top eigenspace of M already contains a feasible vector
    top = VM[:, wM >= lam_max - 1e-10 * scale]
    hw, hv = np.linalg.eigh(top.conj().T @ H.mat @ top)
    if hw[0] <= E + 1e-12 * max(1.0, H.norm):
        phi = top @ hv[:, 0]
        primal = _rayleigh(M, phi)
        return ENormResult(math.sqrt(max(primal, 0.0)), 0.0, PureState.from_vector(phi), lam_max, lam_max - primal)

    # budget at the ground energy: only the ground eigenspace is feasible
    if e_gap <= 1e-12 * max(1.0, H.norm):
        G = H.eigenspace("ground")
        gw, gv = np.linalg.eigh(G.conj().T @ M @ G)
        phi = G @ gv[:, -1]
        primal = _rayleigh(M, phi)
        return ENormResult(math.sqrt(max(primal, 0.0)), math.inf, PureState.from_vector(phi),
                           float(gw[-1]), float(gw[-1]) - primal)

    # (b) dual: beyond mu_max the dual objective exceeds g(0) = lam_max
    mu_max = (lam_max - lam_min) / e_gap
    Hm = H.mat

    def g(mu):
        return float(np.linalg.eigvalsh(M - mu * Hm)[-1]) + mu * E

    mu_star, dual = golden_section(g, 0.0, mu_max, tol=1e-10)

    # (c) witness: best feasible point in 2D spans of eigenvectors near mu_star
    cands = []
    probes = {mu_star}
    for delta in (1e-9, 1e-7, 1e-5, 1e-3):
        step = delta * max(1.0, mu_star)
        probes.update((mu_star + step, max(0.0, mu_star - step)))
    for mu in sorted(probes):
        w, v = np.linalg.eigh(M - mu * Hm)
        cands.append(v[:, -1])
        if mu == mu_star and v.shape[1] > 1:
            cands.append(v[:, -2])
    cands.append(H.ground_state().vec)

    best_phi, best_val = None, -math.inf
    feas_tol = 1e-12 * max(1.0, H.norm)
    for v in cands:
        if H.expectation(v) <= E + feas_tol and _rayleigh(M, v) > best_val:
            best_phi, best_val = v, _rayleigh(M, v)
    for a, b in itertools.combinations(cands, 2):
        phi = best_in_span(a, b, M, H, E)
        if phi is None or H.expectation(phi) > E + feas_tol:
            continue
        val = _rayleigh(M, phi)
        if val > best_val:
            best_phi, best_val = phi, val

    return ENormResult(
        value=math.sqrt(max(best_val, 0.0)),
        mu_star=float(mu_star),
        witness=PureState.from_vector(best_phi),
        dual_value=float(dual),
        gap=float(dual - best_val),
    )


def _restore(phi, g, H, E):
    """Pull ``phi`` back to energy ``E`` along the arc toward the ground state ``g``."""
    if H.expectation(phi) <= E:
        return phi
    psi = chord_to_energy(phi, g, H, E).vec
    return psi if H.expectation(psi) <= E + 1e-12 * max(1.0, H.norm) else g


def _tangent(phi, v, H, E):
    """Project ``v`` onto the tangent space at ``phi``, and off the energy gradient when the bound binds."""
    v = v - np.vdot(phi, v) * phi
    if E - H.expectation(phi) <= 1e-9 * max(1.0, H.norm):
        Hphi = H.mat @ phi
        h = Hphi - np.vdot(phi, Hphi) * phi
        hh = float(np.real(np.vdot(h, h)))
        c = float(np.real(np.vdot(h, v)))
        if c > 0 and hh > 1e-300:
            v = v - (c / hh) * h
    return v


def enorm_primal_oracle(A, H, E: float, n_starts: int = 32, seed=0, max_iter: int = 3000):
    """Multi-start projected-gradient ascent of ``<phi|M|phi>`` over feasible unit vectors.

    Each step follows the Riemannian gradient (with the energy gradient
    projected out while the bound binds), combined Polak-Ribiere style with
    the previous direction, renormalizes, and pulls the point back onto the
    budget along the arc toward the ground state when it overshoots.  The
    step length doubles while that helps and halves until it does.
    Returns ``(value, witness)``; the ground state is the baseline.
    """
    A, H, M = _prepare(A, H, E)
    rng = _rng(seed)
    d = H.dim
    g = H.ground_state().vec
    best_val, best_phi = _rayleigh(M, g), g
    scale = max(1.0, float(np.linalg.norm(M, 2)))
    t0 = 1.0 / scale

    def trial(phi, direction, t):
        new = phi + t * direction
        new = _restore(new / np.linalg.norm(new), g, H, E)
        return new, _rayleigh(M, new)

    for _ in range(n_starts):
        phi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        phi = _restore(phi / np.linalg.norm(phi), g, H, E)
        val = _rayleigh(M, phi)
        t = t0
        prev_dir = prev_grad = None
        for _ in range(max_iter):
            grad = _tangent(phi, M @ phi, H, E)
            if np.linalg.norm(grad) < 1e-12 * scale:
                break
            direction = grad
            if prev_dir is not None:
                beta = max(0.0, float(np.real(np.vdot(grad, grad - prev_grad)) / np.real(np.vdot(prev_grad, prev_grad))))
                direction = grad + beta * _tangent(phi, prev_dir, H, E)
                if np.real(np.vdot(direction, grad)) <= 0:
                    direction = grad
            new, new_val = trial(phi, direction, t)
            if new_val > val:
                while True:
                    cand, cand_val = trial(phi, direction, 2 * t)
                    if cand_val <= new_val:
                        break
                    t, new, new_val = 2 * t, cand, cand_val
            else:
                while new_val <= val and t > 1e-16 * t0:
                    t *= 0.5
                    new, new_val = trial(phi, direction, t)
            if new_val <= val:
                if prev_dir is None:
                    break
                # restart from the plain gradient with a fresh step
                prev_dir, t = None, t0
                continue
            gain = new_val - val
            prev_dir, prev_grad = direction, grad
            phi, val = new, new_val
            if gain < 1e-15 * scale:
                break
        if val > best_val:
            best_val, best_phi = val, phi

    return math.sqrt(max(best_val, 0.0)), PureState.from_vector(best_phi)


def enorm_mixed_oracle(A, H, E: float, n_samples: int = 200, seed=0) -> float:
    """Best ``sqrt(Tr A rho A^H)`` over random feasible mixed states.

    Samples are pulled into the budget by mixing with the ground-state
    projector.  The ground state itself is the baseline.
    """
    A, H, M = _prepare(A, H, E)
    rng = _rng(seed)
    d = H.dim
    g = H.ground_state().vec
    G = np.outer(g, g.conj())
    e_g = H.expectation(g)
    best = _rayleigh(M, g)
    for _ in range(n_samples):
        rho = random_density(d, int(rng.integers(1, d + 1)), rng).mat
        e = float(np.real(np.einsum("ij,ji->", H.mat, rho)))
        if e > E:
            t = (e - E) / (e - e_g)
            rho = (1 - t) * rho + t * G
        best = max(best, float(np.real(np.einsum("ij,ji->", M, rho))))
    return math.sqrt(max(best, 0.0))
