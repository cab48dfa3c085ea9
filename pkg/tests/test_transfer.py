import numpy as np
import pytest

from ecstates import (
    Direction,
    convexity_transfer_check,
    energy,
    random_channel,
    random_observable,
    von_neumann_entropy,
)
from ecstates.constrained_opt.transfer import sample_bounded_state
from ecstates.errors import InfeasibleBudget, InvalidParameter


def _setup(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 6))
    H = random_observable(d, rng)
    E = float(rng.uniform(H.ground_energy, H.max_energy))
    return rng, d, H, E


@pytest.mark.parametrize("seed", range(5))
def test_linear_functional(seed):
    rng, d, H, E = _setup(seed)
    M = rng.standard_normal((d, d))
    M = M + M.T
    f = lambda rho: float(np.real(np.trace(M @ rho.mat)))  # noqa: E731
    for direction in Direction:
        rep = convexity_transfer_check(f, direction, H, E, 40, 40, seed)
        assert rep.passed and rep.margin >= -1e-6


@pytest.mark.parametrize("seed", range(5))
def test_concave_entropy(seed):
    rng, d, H, E = _setup(seed)
    Phi = random_channel(d, d, 2, rng)
    rep = convexity_transfer_check(lambda r: von_neumann_entropy(Phi(r)), Direction.INF_CONCAVE, H, E, 40, 40, seed)
    assert rep.passed
    assert rep.pure_min <= rep.mixed_min + 1e-6


def test_constant_functional_equality():
    _, _, H, E = _setup(7)
    rep = convexity_transfer_check(lambda r: 0.25, Direction.SUP_CONVEX, H, E, 10, 10, 0)
    assert rep.passed
    assert abs(rep.pure_max - rep.mixed_max) <= 1e-12 and abs(rep.pure_min - rep.mixed_min) <= 1e-12


def test_sampled_states_are_members():
    rng, _, H, E = _setup(3)
    for _ in range(50):
        assert energy(sample_bounded_state(H, E, rng), H) <= E + 1e-12


def test_counts_and_errors():
    _, _, H, E = _setup(1)
    rep = convexity_transfer_check(lambda r: 1.0, "sup-convex", H, E, 5, 7, 0)
    assert rep.n_mixed == 5 and rep.n_pure >= 12
    with pytest.raises(InfeasibleBudget):
        convexity_transfer_check(lambda r: 1.0, Direction.SUP_CONVEX, H, H.ground_energy - 1.0)
    with pytest.raises(InvalidParameter):
        convexity_transfer_check(lambda r: 1.0, Direction.SUP_CONVEX, H, E, 0, 5)
