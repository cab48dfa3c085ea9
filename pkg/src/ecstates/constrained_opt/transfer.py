"""Sampling check that extrema of convex/concave functionals sit on pure states.

For a convex ``f`` the supremum over a bounded-energy state set equals the
supremum over its pure states; for a concave ``f`` the same holds for the
infimum.  The check samples mixed members of the set and compares their
extremum with the extremum over feasible pure states.  The pure pool holds
random feasible vectors together with the components of an exact-energy
decomposition of every mixed sample, which is where Jensen's inequality puts
a dominating pure state.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..decomposition import equal_energy_decomposition
from ..errors import InfeasibleBudget, InvalidParameter
from ..states import DensityMatrix, Mode, _rng, as_observable, energy, random_density
from .minent import restore_energy

__all__ = ["Direction", "TransferReport", "convexity_transfer_check", "sample_bounded_state"]


class Direction(enum.Enum):
    SUP_CONVEX = "sup-convex"
    INF_CONCAVE = "inf-concave"


@dataclass(frozen=True)
class TransferReport:
    direction: Direction
    mixed_max: float
    mixed_min: float
    pure_max: float
    pure_min: float
    n_mixed: int
    n_pure: int
    passed: bool

    @property
    def margin(self) -> float:
        """Slack of the asserted inequality; nonnegative (up to tolerance) on a pass."""
        if self.direction is Direction.SUP_CONVEX:
            return self.pure_max - self.mixed_max
        return self.mixed_min - self.pure_min


def sample_bounded_state(H, E: float, rng) -> DensityMatrix:
    """Random state of random rank, mixed with the ground projector until ``Tr H rho <= E``."""
    H = as_observable(H)
    rho = random_density(H.dim, int(rng.integers(1, H.dim + 1)), rng).mat
    e = energy(rho, H)
    if e > E:
        g = H.ground_state().projector()
        s = (e - E) / (e - H.ground_energy)
        rho = (1 - s) * rho + s * g
    return DensityMatrix(rho)


def convexity_transfer_check(
    f: Callable[[DensityMatrix], float],
    direction: Direction,
    H,
    E: float,
    n_mixed: int = 100,
    n_pure: int = 100,
    seed=0,
    tol: float = 1e-6,
) -> TransferReport:
    """Compare the extremum of ``f`` over sampled mixed and pure members of the bounded-energy set."""
    H = as_observable(H)
    direction = Direction(direction)
    if E < H.ground_energy - 1e-10 * max(1.0, H.norm):
        raise InfeasibleBudget(f"budget {E!r} below ground energy {H.ground_energy!r}")
    if n_mixed < 1 or n_pure < 0:
        raise InvalidParameter("need at least one mixed sample and n_pure >= 0")
    rng = _rng(seed)
    d = H.dim
    E_eff = max(E, H.ground_energy)

    mixed, pure = [], []
    for _ in range(n_mixed):
        rho = sample_bounded_state(H, E_eff, rng)
        mixed.append(float(f(rho)))
        cert = equal_energy_decomposition(rho, H)
        pure.extend(float(f(psi.density())) for _, psi in cert.ensemble)
    for _ in range(n_pure):
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        v = restore_energy(v / np.linalg.norm(v), H, E_eff, Mode.AT_MOST)
        pure.append(float(f(DensityMatrix(np.outer(v, v.conj())))))

    mixed, pure = np.array(mixed), np.array(pure)
    if direction is Direction.SUP_CONVEX:
        passed = bool(pure.max() >= mixed.max() - tol)
    else:
        passed = bool(pure.min() <= mixed.min() + tol)
    return TransferReport(direction, float(mixed.max()), float(mixed.min()), float(pure.max()),
                          float(pure.min()), n_mixed, int(pure.size), passed)
