"""Pure numpy versions of the compiled kernels."""

import numpy as np


def lag_products(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Symmetric lag products ``conj(a[j-s]) * b[j+s]``.

    Row ``j``, column ``s mod n`` for ``s`` in ``[-n/2, n/2)`` (FFT order);
    zero whenever either index leaves ``[0, n)``.
    """
    n = a.shape[0]
    if b.shape[0] != n:
        raise ValueError("inputs must have equal length")
    j = np.arange(n)[:, None]
    s = np.fft.fftfreq(n, 1.0 / n).astype(np.intp)[None, :]
    lo = j - s
    hi = j + s
    inside = (lo >= 0) & (lo < n) & (hi >= 0) & (hi < n)
    out = np.zeros((n, n), dtype=np.complex128)
    out[inside] = np.conj(a[lo[inside]]) * b[hi[inside]]
    return out


def shifted_products(a: np.ndarray, b: np.ndarray, offset: int) -> np.ndarray:
    """``a[jp] * conj(b[j - jp + offset])`` at row ``j``, column ``jp``; zero off the grid."""
    n = a.shape[0]
    if b.shape[0] != n:
        raise ValueError("inputs must have equal length")
    i = np.arange(n)[:, None] - np.arange(n)[None, :] + offset
    inside = (i >= 0) & (i < n)
    out = np.zeros((n, n), dtype=np.complex128)
    rows, cols = np.nonzero(inside)
    out[rows, cols] = a[cols] * np.conj(b[i[rows, cols]])
    return out
