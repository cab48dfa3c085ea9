"""Pure numpy implementation of the hot kernels (reference and fallback)."""
import numpy as np

from ..config import TOL

BACKEND = "python"


def _spectra(kraus: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """Output spectra for a batch of (unnormalized) input vectors ``phis[b, :]``.

    For a pure input the output ``sum_i K_i phi phi^H K_i^H`` and the Gram matrix
    of the vectors ``K_i phi`` share their nonzero spectrum, so the smaller of
    the two matrices is diagonalized.
    """
    k, dout, _ = kraus.shape
    W = np.einsum("kmd,bd->bkm", kraus, phis)
    if k <= dout:
        G = np.einsum("bim,bjm->bij", W.conj(), W)
    else:
        G = np.einsum("bim,bin->bmn", W, W.conj())
    norms = np.einsum("bd,bd->b", phis.conj(), phis).real
    return np.linalg.eigvalsh(G) / norms[:, None]


def _check(kraus, n):
    if kraus.ndim != 3 or kraus.shape[2] != n:
        raise ValueError(f"input length {n} does not match Kraus stack {kraus.shape}")


def _entropies(lam: np.ndarray) -> np.ndarray:
    safe = np.where(lam > TOL.entropy_floor, lam, 1.0)
    return -np.sum(np.where(lam > TOL.entropy_floor, safe * np.log(safe), 0.0), axis=-1)


def pure_output_entropy(kraus, phi) -> float:
    """Von Neumann entropy (nats) of the channel output for input ``phi / ||phi||``."""
    kraus = np.ascontiguousarray(kraus, dtype=np.complex128)
    phi = np.ascontiguousarray(phi, dtype=np.complex128).reshape(1, -1)
    _check(kraus, phi.shape[1])
    return float(_entropies(_spectra(kraus, phi))[0])


def output_entropy_grad(kraus, x, step: float = 1e-6):
    """Entropy and its central-difference gradient in the real parametrization.

    ``x`` has length ``2 * d_in``: ``phi = x[:d] + 1j * x[d:]``.
    """
    kraus = np.ascontiguousarray(kraus, dtype=np.complex128)
    x = np.asarray(x, dtype=float)
    n = x.size
    d = n // 2
    if n % 2:
        raise ValueError("real parametrization must have even length")
    _check(kraus, d)
    X = np.empty((2 * n + 1, n))
    X[:] = x
    idx = np.arange(n)
    X[1 + idx, idx] += step
    X[1 + n + idx, idx] -= step
    phis = X[:, :d] + 1j * X[:, d:]
    S = _entropies(_spectra(kraus, phis))
    grad = (S[1 : n + 1] - S[n + 1 :]) / (2 * step)
    return float(S[0]), grad
