"""Hot-loop kernels with a compiled backend and a numpy fallback.

The compiled extension is used when it imports; set ``PHASEFILTER_PURE=1``
to force the numpy versions.  ``BACKEND`` names the active choice.
"""

import os

import numpy as np

from . import _kernels_py

try:
    if os.environ.get("PHASEFILTER_PURE", "") not in ("", "0"):
        raise ImportError("pure backend requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "numpy"

__all__ = ["BACKEND", "available_backends", "lag_products", "shifted_products"]


def available_backends() -> list[str]:
    return ["compiled", "numpy"] if _compiled is not None else ["numpy"]


def _impl(backend):
    if backend is None:
        backend = BACKEND
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        return _compiled
    if backend == "numpy":
        return _kernels_py
    raise ValueError(f"unknown backend {backend!r}")


def lag_products(a, b, backend=None) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.complex128)
    b = np.ascontiguousarray(b, dtype=np.complex128)
    return _impl(backend).lag_products(a, b)


def shifted_products(a, b, offset: int, backend=None) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.complex128)
    b = np.ascontiguousarray(b, dtype=np.complex128)
    return _impl(backend).shifted_products(a, b, int(offset))
