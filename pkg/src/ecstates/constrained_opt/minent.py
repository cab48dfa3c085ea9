"""Energy-constrained minimal output entropy of a channel.

The minimum of the concave functional ``rho -> S(Phi(rho))`` over a
bounded-energy state set is attained on pure inputs, so the search runs over
unit vectors only.  It is a multi-start local descent and therefore a
feasible upper bound, not a certified global optimum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..decomposition import chord_to_energy
from ..errors import DimensionMismatch, InfeasibleBudget, InvalidParameter
from ..states import Mode, PureState, _rng, as_observable
from .channels import KrausChannel

__all__ = ["MinEntropyResult", "min_output_entropy", "restore_energy"]


@dataclass(frozen=True)
class MinEntropyResult:
    value: float          # nats
    argmin: PureState
    mode: Mode
    restarts_used: int


def _check_budget(H, E: float, mode: Mode) -> None:
    tol = 1e-10 * max(1.0, H.norm)
    if E < H.ground_energy - tol:
        raise InfeasibleBudget(f"budget {E!r} below ground energy {H.ground_energy!r}")
    if mode is Mode.EXACT and E > H.max_energy + tol:
        raise InfeasibleBudget(f"no unit vector has energy {E!r} above {H.max_energy!r}")


def restore_energy(phi, H, E: float, mode: Mode, ground=None, top=None) -> np.ndarray:
    """Move ``phi`` onto the constraint set along the arc toward the ground (or top) state.

    AT_MOST only acts when the energy exceeds ``E``.  EXACT lands on
    ``<phi|H|phi> = E``, moving toward the top state from below.
    """
    H = as_observable(H)
    e = H.expectation(phi)
    tol = 1e-12 * max(1.0, H.norm)
    if e > E:
        if mode is Mode.AT_MOST and e <= E + tol:
            return phi
        anchor = H.ground_state().vec if ground is None else ground
    elif mode is Mode.EXACT and e < E - tol:
        anchor = H.top_state().vec if top is None else top
    else:
        return phi
    return chord_to_energy(phi, anchor, H, E).vec


def _feasible(e: float, E: float, mode: Mode, tol: float) -> bool:
    if mode is Mode.EXACT:
        return abs(e - E) <= tol
    return e <= E + tol


def min_output_entropy(
    Phi: KrausChannel,
    H,
    E: float,
    mode: Mode = Mode.AT_MOST,
    n_starts: int = 64,
    seed=0,
    max_iter: int = 300,
    fd_step: float = 1e-6,
) -> MinEntropyResult:
    """Minimize the output entropy over pure inputs of bounded or exact energy.

    Each start is a random unit vector moved onto the constraint set.  A step
    follows the negative finite-difference gradient (energy component
    removed when the constraint binds), renormalizes and restores
    feasibility; the step length doubles while it helps and halves until it
    does.  The best final value wins, ties going to the earliest start.
    """
    if not isinstance(Phi, KrausChannel):
        Phi = KrausChannel(Phi)
    H = as_observable(H)
    mode = Mode(mode)
    if Phi.dim_in != H.dim:
        raise DimensionMismatch(f"channel input dim {Phi.dim_in} vs observable dim {H.dim}")
    if n_starts < 0:
        raise InvalidParameter("n_starts must be nonnegative")
    _check_budget(H, E, mode)

    K = Phi.stack
    d = H.dim
    g, top = H.ground_state().vec, H.top_state().vec
    Hm = H.mat
    rng = _rng(seed)
    feas_tol = 1e-8 * max(1.0, H.norm)
    bind_tol = 1e-9 * max(1.0, H.norm)

    def restore(v):
        v = v / np.linalg.norm(v)
        return restore_energy(v, H, E, mode, g, top)

    def value(v):
        return kernels.pure_output_entropy(K, v)

    # the baseline keeps n_starts = 0 meaningful: ground state, or the arc ground -> top at E
    best_phi = restore(g.copy()) if mode is Mode.EXACT else g.copy()
    best_val = value(best_phi)

    for _ in range(n_starts):
        phi = restore(rng.standard_normal(d) + 1j * rng.standard_normal(d))
        x = np.concatenate([phi.real, phi.imag])
        val, gr = kernels.output_entropy_grad(K, x, fd_step)
        t = 1.0
        for _ in range(max_iter):
            direction = -(gr[:d] + 1j * gr[d:])
            direction = direction - np.vdot(phi, direction) * phi
            Hphi = Hm @ phi
            h = Hphi - np.vdot(phi, Hphi) * phi
            hh = float(np.real(np.vdot(h, h)))
            if hh > 1e-300:
                c = float(np.real(np.vdot(h, direction)))
                if mode is Mode.EXACT or (c > 0 and E - H.expectation(phi) <= bind_tol):
                    direction = direction - (c / hh) * h
            dn = np.linalg.norm(direction)
            if dn < 1e-12:
                break
            direction = direction / dn

            new = restore(phi + t * direction)
            new_val = value(new)
            if new_val < val:
                while t < 1.0:
                    cand = restore(phi + 2 * t * direction)
                    cand_val = value(cand)
                    if cand_val >= new_val:
                        break
                    t, new, new_val = 2 * t, cand, cand_val
            else:
                while new_val >= val and t > 1e-12:
                    t *= 0.5
                    new = restore(phi + t * direction)
                    new_val = value(new)
                if new_val >= val:
                    break
            phi = new
            x = np.concatenate([phi.real, phi.imag])
            prev = val
            val, gr = kernels.output_entropy_grad(K, x, fd_step)
            if prev - val < 1e-14:
                break
        if val < best_val and _feasible(H.expectation(phi), E, mode, feas_tol):
            best_val, best_phi = val, phi

    return MinEntropyResult(float(max(best_val, 0.0)), PureState.from_vector(best_phi), mode, int(n_starts))
