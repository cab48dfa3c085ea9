import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ecstates import (
    Mode,
    complementary_channel,
    dephasing_channel,
    depolarizing_channel,
    identity_channel,
    min_output_entropy,
    random_channel,
    random_observable,
    von_neumann_entropy,
)
from ecstates.constrained_opt.minent import restore_energy
from ecstates.constrained_opt.transfer import sample_bounded_state
from ecstates.errors import DimensionMismatch, InfeasibleBudget

seeds = st.integers(0, 2**32 - 1)
H2 = np.diag([0.0, 1.0])


def _binary_entropy(p):
    return -p * math.log(p) - (1 - p) * math.log(1 - p)


def test_identity_channel_zero():
    res = min_output_entropy(identity_channel(2), H2, 0.3, Mode.AT_MOST, n_starts=8)
    assert abs(res.value) <= 1e-9
    assert H2[1, 1] * abs(res.argmin.vec[1]) ** 2 <= 0.3 + 1e-8


@pytest.mark.parametrize("d", [2, 3, 4])
def test_depolarizing_log_d(d):
    H = np.diag(np.arange(d, dtype=float))
    for mode, E in ((Mode.AT_MOST, 0.2), (Mode.EXACT, 0.7)):
        res = min_output_entropy(depolarizing_channel(d), H, E, mode, n_starts=4)
        assert abs(res.value - math.log(d)) <= 1e-9


def test_dephasing_exact():
    res = min_output_entropy(dephasing_channel(), H2, 0.2, Mode.EXACT)
    assert abs(res.value - _binary_entropy(0.2)) <= 1e-6
    assert res.value == pytest.approx(0.500402, abs=1e-6)
    assert abs(res.argmin.vec[1]) ** 2 == pytest.approx(0.2, abs=1e-8)
    assert res.restarts_used == 64
    # the bounded version reaches a basis state and a pure output
    assert min_output_entropy(dephasing_channel(), H2, 0.2, Mode.AT_MOST, n_starts=8).value <= 1e-9


def test_budget_checks():
    with pytest.raises(InfeasibleBudget):
        min_output_entropy(identity_channel(2), H2, -0.5)
    with pytest.raises(InfeasibleBudget):
        min_output_entropy(identity_channel(2), H2, 1.5, Mode.EXACT)
    with pytest.raises(DimensionMismatch):
        min_output_entropy(identity_channel(3), H2, 0.5)


def test_reproducible_and_zero_starts():
    Phi = random_channel(3, 3, 2, seed=1)
    H = random_observable(3, 2)
    E = 0.5 * (H.ground_energy + H.max_energy)
    a = min_output_entropy(Phi, H, E, n_starts=6, seed=11)
    b = min_output_entropy(Phi, H, E, n_starts=6, seed=11)
    assert a.value == b.value and a.argmin == b.argmin
    base = min_output_entropy(Phi, H, E, Mode.EXACT, n_starts=0)
    assert H.expectation(base.argmin) == pytest.approx(E, abs=1e-8)


def test_restore_energy():
    H = random_observable(4, 3)
    rng = np.random.default_rng(0)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    v /= np.linalg.norm(v)
    E = H.ground_energy + 0.1 * (H.max_energy - H.ground_energy)
    w = restore_energy(v, H, E, Mode.AT_MOST)
    assert H.expectation(w) <= E + 1e-12
    for target in (H.ground_energy + 0.01, H.max_energy - 0.01):
        assert H.expectation(restore_energy(v, H, target, Mode.EXACT)) == pytest.approx(target, abs=1e-10)


@settings(max_examples=12, deadline=None)
@given(d=st.integers(2, 4), seed=seeds)
def test_solver_contract(d, seed):
    rng = np.random.default_rng(seed)
    Phi = random_channel(d, d, 2, rng)
    H = random_observable(d, rng)
    E = float(rng.uniform(H.ground_energy, H.max_energy))
    at_most = min_output_entropy(Phi, H, E, Mode.AT_MOST, n_starts=16, seed=seed)
    exact = min_output_entropy(Phi, H, E, Mode.EXACT, n_starts=16, seed=seed)
    assert H.expectation(at_most.argmin) <= E + 1e-8
    assert abs(H.expectation(exact.argmin) - E) <= 1e-8
    for res in (at_most, exact):
        assert res.value == pytest.approx(von_neumann_entropy(Phi(res.argmin)), abs=1e-9)
    assert at_most.value <= exact.value + 1e-8
    # concavity: mixed feasible inputs never beat the pure optimum
    for _ in range(30):
        rho = sample_bounded_state(H, E, rng)
        assert at_most.value <= von_neumann_entropy(Phi(rho)) + 1e-6
    # complementary channel has the same output entropy at the optimizer
    Phi_c = complementary_channel(Phi)
    assert von_neumann_entropy(Phi_c(at_most.argmin)) == pytest.approx(at_most.value, abs=1e-9)
