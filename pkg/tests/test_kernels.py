import os
import subprocess
import sys

import numpy as np
import pytest

from ecstates import kernels, random_channel, random_pure, von_neumann_entropy
from ecstates.kernels import compiled_backend, python_backend

BACKENDS = [python_backend] + ([compiled_backend] if compiled_backend is not None else [])


def _cases():
    rng = np.random.default_rng(0)
    for d, dout, k in [(1, 1, 1), (2, 2, 2), (3, 2, 4), (4, 5, 2), (6, 3, 3)]:
        if dout * k < d:
            continue
        yield random_channel(d, dout, k, rng).stack, rng.standard_normal(d) + 1j * rng.standard_normal(d)


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.BACKEND)
def test_entropy_matches_reference(backend):
    for K, phi in _cases():
        v = phi / np.linalg.norm(phi)
        out = np.einsum("kmi,i,knj,j->mn", K, v, K.conj(), v.conj())
        ref = von_neumann_entropy(out)
        assert backend.pure_output_entropy(K, phi) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.BACKEND)
def test_gradient_matches_central_difference(backend):
    ref = python_backend
    for K, phi in _cases():
        x = np.concatenate([phi.real, phi.imag])
        f, g = backend.output_entropy_grad(K, x, 1e-6)
        assert f == pytest.approx(backend.pure_output_entropy(K, phi), abs=1e-13)
        # a coarse independent finite difference
        h = 1e-5
        for j in range(x.size):
            e = np.zeros_like(x)
            e[j] = h
            xp, xm = x + e, x - e
            fd = (ref.pure_output_entropy(K, xp[: x.size // 2] + 1j * xp[x.size // 2:])
                  - ref.pure_output_entropy(K, xm[: x.size // 2] + 1j * xm[x.size // 2:])) / (2 * h)
            assert g[j] == pytest.approx(fd, abs=1e-5)


@pytest.mark.skipif(compiled_backend is None, reason="compiled kernels not built")
def test_backends_agree():
    rng = np.random.default_rng(3)
    for _ in range(50):
        d = int(rng.integers(1, 7))
        K = random_channel(d, int(rng.integers(1, 5)) if d == 1 else d, int(rng.integers(1, 4)), rng).stack
        x = rng.standard_normal(2 * d)
        fp, gp = python_backend.output_entropy_grad(K, x)
        fc, gc = compiled_backend.output_entropy_grad(K, x)
        assert fc == pytest.approx(fp, abs=1e-12)
        assert np.allclose(gc, gp, atol=1e-6)


def test_active_backend_and_errors():
    assert kernels.BACKEND in {"python", "cython"}
    if compiled_backend is not None and not os.environ.get("ECSTATES_PURE_PYTHON"):
        assert kernels.BACKEND == "cython"
    K = random_channel(2, 2, 2, seed=0).stack
    for b in BACKENDS:
        with pytest.raises(ValueError):
            b.output_entropy_grad(K, np.zeros(3))
    if compiled_backend is not None:
        with pytest.raises(ValueError):
            compiled_backend.pure_output_entropy(K, np.ones(3))


def test_forced_fallback():
    code = "from ecstates import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, ECSTATES_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_unnormalized_input_is_scaled():
    K = random_channel(3, 3, 2, seed=2).stack
    psi = random_pure(3, 4).vec
    for b in BACKENDS:
        assert b.pure_output_entropy(K, 7.5 * psi) == pytest.approx(b.pure_output_entropy(K, psi), abs=1e-12)
