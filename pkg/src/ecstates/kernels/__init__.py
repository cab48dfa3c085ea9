"""Hot kernels with a compiled backend and a numpy fallback.

The compiled extension is used when it was built; setting the environment
variable ``ECSTATES_PURE_PYTHON=1`` forces the numpy backend.  Both backends
are importable directly (``python_backend``, ``compiled_backend``) so they
can be compared.
"""
import os

from . import _pykernels as python_backend

try:
    from . import _ckernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

if compiled_backend is not None and not os.environ.get("ECSTATES_PURE_PYTHON"):
    _active = compiled_backend
else:
    _active = python_backend

BACKEND = _active.BACKEND
pure_output_entropy = _active.pure_output_entropy
output_entropy_grad = _active.output_entropy_grad

__all__ = [
    "BACKEND",
    "pure_output_entropy",
    "output_entropy_grad",
    "python_backend",
    "compiled_backend",
]
