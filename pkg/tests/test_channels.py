import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ecstates import (
    KrausChannel,
    apply_channel,
    complementary_channel,
    dephasing_channel,
    depolarizing_channel,
    entropy_bits,
    identity_channel,
    random_channel,
    random_density,
    random_pure,
    von_neumann_entropy,
)
from ecstates.errors import DimensionMismatch, InvalidParameter, NotTracePreserving

seeds = st.integers(0, 2**32 - 1)
PLUS = np.full((2, 2), 0.5)


def test_channel_validation():
    with pytest.raises(NotTracePreserving):
        KrausChannel([np.eye(2) * 0.9])
    with pytest.raises(InvalidParameter):
        KrausChannel([])
    with pytest.raises(DimensionMismatch):
        KrausChannel([np.eye(2), np.eye(3)])
    Phi = dephasing_channel()
    assert (Phi.n_kraus, Phi.dim_in, Phi.dim_out) == (2, 2, 2)
    with pytest.raises(DimensionMismatch):
        apply_channel(Phi, np.eye(3) / 3)


def test_apply_examples():
    rho = random_density(3, 2, 1)
    assert np.allclose(apply_channel(identity_channel(3), rho).mat, rho.mat)
    assert np.allclose(apply_channel(dephasing_channel(), PLUS).mat, np.eye(2) / 2, atol=1e-15)
    assert np.allclose(apply_channel(depolarizing_channel(3), rho).mat, np.eye(3) / 3, atol=1e-15)
    assert np.allclose(dephasing_channel()(random_pure(2, 3)).mat.diagonal().sum(), 1.0)


def test_complementary_examples():
    Phi_c = complementary_channel(identity_channel(3))
    assert Phi_c.dim_out == 1
    assert von_neumann_entropy(apply_channel(Phi_c, random_pure(3, 0).projector())) == 0.0

    Dc = complementary_channel(dephasing_channel())
    out0 = apply_channel(Dc, np.diag([1.0, 0.0])).mat
    assert np.allclose(out0, np.full((2, 2), 0.5))
    assert von_neumann_entropy(out0) == pytest.approx(0.0, abs=1e-12)
    out_plus = apply_channel(Dc, PLUS).mat
    assert np.allclose(out_plus, np.eye(2) / 2, atol=1e-15)
    assert von_neumann_entropy(out_plus) == pytest.approx(math.log(2), abs=1e-12)


def test_complementary_entries():
    # output (i, j) is Tr(K_i rho K_j^H)
    Phi = random_channel(3, 2, 3, seed=5)
    rho = random_density(3, None, 6).mat
    out = complementary_channel(Phi).output_matrix(rho)
    K = Phi.kraus
    expected = np.array([[np.trace(K[i] @ rho @ K[j].conj().T) for j in range(3)] for i in range(3)])
    assert np.allclose(out, expected, atol=1e-14)


def test_entropy_examples():
    assert von_neumann_entropy(random_pure(4, 2).projector()) == pytest.approx(0.0, abs=1e-12)
    assert von_neumann_entropy(np.eye(2) / 2) == pytest.approx(math.log(2), abs=1e-15)
    h = -0.75 * math.log(0.75) - 0.25 * math.log(0.25)
    assert von_neumann_entropy(np.diag([0.75, 0.25])) == pytest.approx(h, abs=1e-15)
    assert h == pytest.approx(0.562335, abs=1e-6)
    assert entropy_bits(math.log(2)) == pytest.approx(1.0)


@settings(max_examples=60, deadline=None)
@given(d=st.integers(1, 6), seed=seeds)
def test_entropy_bounds(d, seed):
    rho = random_density(d, None, seed)
    s = von_neumann_entropy(rho)
    assert -1e-12 <= s <= math.log(d) + 1e-12


@settings(max_examples=60, deadline=None)
@given(d_in=st.integers(1, 4), d_out=st.integers(1, 4), k=st.integers(1, 4), seed=seeds)
def test_random_channel_and_complementary(d_in, d_out, k, seed):
    if d_out * k < d_in:
        with pytest.raises(InvalidParameter):
            random_channel(d_in, d_out, k, seed)
        return
    rng = np.random.default_rng(seed)
    Phi = random_channel(d_in, d_out, k, rng)
    Phi_c = complementary_channel(Phi)
    assert Phi_c.dim_out == k and Phi_c.dim_in == d_in
    psi = random_pure(d_in, rng).projector()
    s, s_c = von_neumann_entropy(Phi(psi)), von_neumann_entropy(Phi_c(psi))
    assert abs(s - s_c) <= 1e-9
    rho = random_density(d_in, None, rng)
    assert np.real(np.trace(Phi(rho).mat)) == pytest.approx(1.0, abs=1e-12)
