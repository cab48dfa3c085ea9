# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: pure-input output entropy of a Kraus channel.

Same contract as ``_pykernels``.  Each evaluation forms the smaller of the
output matrix and the Gram matrix of the vectors ``K_i phi`` and calls LAPACK
``zheev`` directly, which avoids the per-call overhead of numpy on the tiny
matrices the multi-start optimizers feed in.
"""
import numpy as np
from libc.math cimport log, NAN, isnan
from libc.stdlib cimport malloc, free
from scipy.linalg.cython_lapack cimport zheev

BACKEND = "cython"

cdef double ENTROPY_FLOOR = 1e-12


cdef struct Workspace:
    int k, dout, din, n, lwork
    double complex *W
    double complex *G
    double complex *phi
    double *w
    double complex *work
    double *rwork


cdef int _ws_init(Workspace *ws, int k, int dout, int din) noexcept nogil:
    ws.k = k
    ws.dout = dout
    ws.din = din
    ws.n = k if k <= dout else dout
    ws.lwork = 2 * ws.n + 32
    ws.W = <double complex *> malloc(k * dout * sizeof(double complex))
    ws.G = <double complex *> malloc(ws.n * ws.n * sizeof(double complex))
    ws.phi = <double complex *> malloc(din * sizeof(double complex))
    ws.w = <double *> malloc(ws.n * sizeof(double))
    ws.work = <double complex *> malloc(ws.lwork * sizeof(double complex))
    ws.rwork = <double *> malloc((3 * ws.n + 2) * sizeof(double))
    if ws.W == NULL or ws.G == NULL or ws.phi == NULL or ws.w == NULL or ws.work == NULL or ws.rwork == NULL:
        return -1
    return 0


cdef void _ws_free(Workspace *ws) noexcept nogil:
    free(ws.W)
    free(ws.G)
    free(ws.phi)
    free(ws.w)
    free(ws.work)
    free(ws.rwork)


cdef double _entropy(const double complex[:, :, ::1] K, Workspace *ws) noexcept nogil:
    cdef int k = ws.k, dout = ws.dout, din = ws.din, n = ws.n
    cdef int i, j, m, a, info = 0
    cdef double complex acc, zi, zj
    cdef double nrm = 0.0, lam, s = 0.0
    cdef char jobz = b'N'
    cdef char uplo = b'U'

    for a in range(din):
        nrm += ws.phi[a].real * ws.phi[a].real + ws.phi[a].imag * ws.phi[a].imag
    for i in range(k):
        for m in range(dout):
            acc = 0.0
            for a in range(din):
                acc = acc + K[i, m, a] * ws.phi[a]
            ws.W[i * dout + m] = acc

    # Column-major upper triangle: G[r + c * n] with r <= c.
    if k <= dout:
        for j in range(k):
            for i in range(j + 1):
                acc = 0.0
                for m in range(dout):
                    zi = ws.W[i * dout + m]
                    zj = ws.W[j * dout + m]
                    acc = acc + zi.conjugate() * zj
                ws.G[i + j * n] = acc
    else:
        for j in range(dout):
            for i in range(j + 1):
                acc = 0.0
                for m in range(k):
                    zi = ws.W[m * dout + i]
                    zj = ws.W[m * dout + j]
                    acc = acc + zi * zj.conjugate()
                ws.G[i + j * n] = acc

    zheev(&jobz, &uplo, &n, ws.G, &n, ws.w, ws.work, &ws.lwork, ws.rwork, &info)
    if info != 0:
        return NAN
    for i in range(n):
        lam = ws.w[i] / nrm
        if lam > ENTROPY_FLOOR:
            s -= lam * log(lam)
    return s


def pure_output_entropy(kraus, phi):
    """Von Neumann entropy (nats) of the channel output for input ``phi / ||phi||``."""
    cdef const double complex[:, :, ::1] K = np.ascontiguousarray(kraus, dtype=np.complex128)
    cdef const double complex[::1] p = np.ascontiguousarray(phi, dtype=np.complex128).ravel()
    cdef Workspace ws
    cdef int a
    cdef double s
    if p.shape[0] != K.shape[2]:
        raise ValueError("input dimension mismatch")
    if _ws_init(&ws, K.shape[0], K.shape[1], K.shape[2]) != 0:
        _ws_free(&ws)
        raise MemoryError()
    try:
        for a in range(ws.din):
            ws.phi[a] = p[a]
        s = _entropy(K, &ws)
    finally:
        _ws_free(&ws)
    if isnan(s):
        raise ArithmeticError("zheev failed")
    return s


def output_entropy_grad(kraus, x, double step=1e-6):
    """Entropy and its central-difference gradient in the real parametrization ``x = (Re phi, Im phi)``."""
    cdef const double complex[:, :, ::1] K = np.ascontiguousarray(kraus, dtype=np.complex128)
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef int nx = xv.shape[0]
    cdef int d = nx // 2
    cdef int a, j
    cdef double f, fp, fm
    cdef Workspace ws
    if 2 * d != nx or d != K.shape[2]:
        raise ValueError("parameter length must be twice the input dimension")
    grad = np.empty(nx, dtype=np.float64)
    cdef double[::1] g = grad
    if _ws_init(&ws, K.shape[0], K.shape[1], K.shape[2]) != 0:
        _ws_free(&ws)
        raise MemoryError()
    try:
        with nogil:
            for a in range(d):
                ws.phi[a] = xv[a] + 1j * xv[d + a]
            f = _entropy(K, &ws)
            for j in range(nx):
                a = j if j < d else j - d
                if j < d:
                    ws.phi[a] = (xv[a] + step) + 1j * xv[d + a]
                    fp = _entropy(K, &ws)
                    ws.phi[a] = (xv[a] - step) + 1j * xv[d + a]
                    fm = _entropy(K, &ws)
                else:
                    ws.phi[a] = xv[a] + 1j * (xv[d + a] + step)
                    fp = _entropy(K, &ws)
                    ws.phi[a] = xv[a] + 1j * (xv[d + a] - step)
                    fm = _entropy(K, &ws)
                ws.phi[a] = xv[a] + 1j * xv[d + a]
                g[j] = (fp - fm) / (2.0 * step)
    finally:
        _ws_free(&ws)
    if isnan(f):
        raise ArithmeticError("zheev failed")
    return f, grad
