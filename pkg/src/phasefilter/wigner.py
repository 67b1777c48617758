"""Discrete Wigner transform, its inverse, Fourier transform and phase-space integrals.

Discretization
--------------
Row ``j`` of the map is built from the lag products
``c_j[s] = conj(psi[j-s]) psi[j+s]`` (zero when an index leaves the grid),
i.e. the correlation variable is sampled at ``x = 2 s dq``.  A length-``n``
FFT over ``s`` then lands on the wigner momentum lattice (spacing
``pi hbar / (n dq)``), and summing a row over momentum returns
``|psi(q_j)|^2`` exactly.  The resulting map is periodic in ``p`` with the
lattice period; it is *not* periodic in ``q``.

The momentum-side transform is the mirror image: the state is resampled onto
the wigner lattice, lag products are taken in momentum and an inverse FFT over
the lag lands on the position lattice.  That map is periodic in ``q`` with
period ``q_extent``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .grid import GridError, MomentumGrid, SpatialGrid
from .states import MomentumWavefunction, PositionWavefunction

__all__ = [
    "AliasingError",
    "CrossWignerMap",
    "ReconstructionError",
    "WignerMap",
    "band_limit_excess",
    "cross_wigner",
    "fourier_transform",
    "inverse_fourier_transform",
    "marginal_p",
    "marginal_q",
    "momentum_on_wigner_lattice",
    "moments",
    "overlap",
    "reconstruct_position",
    "shift_p",
    "shift_q",
    "total_mass",
    "uncertainty_product",
    "wigner_direct",
    "wigner_from_momentum",
    "wigner_from_position",
]

IMAG_RESIDUE_TOL = 1e-9


class AliasingError(ValueError):
    """The transform produced an imaginary part that roundoff cannot explain."""


class ReconstructionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class WignerMap:
    """Real map ``w[j, k]`` over positions ``q_j`` and wigner-lattice momenta ``p_k``."""

    grid: SpatialGrid
    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w)
        if w.shape != (self.grid.n, self.grid.n):
            raise GridError(f"map shape {w.shape} does not match grid size {self.grid.n}")
        if np.iscomplexobj(w):
            raise TypeError("WignerMap holds real values; use CrossWignerMap")
        w = np.array(w, dtype=float)
        if not np.all(np.isfinite(w)):
            raise ValueError("Wigner map values must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def p_lattice(self) -> MomentumGrid:
        return self.grid.wigner

    @property
    def q(self) -> np.ndarray:
        return self.grid.q

    @property
    def p(self) -> np.ndarray:
        return self.grid.wigner.samples

    @property
    def dq(self) -> float:
        return self.grid.dq

    @property
    def dp(self) -> float:
        return self.grid.wigner.dp

    def check_same(self, other) -> None:
        self.grid.check_same(other.grid)

    def __sub__(self, other: "WignerMap") -> "WignerMap":
        self.check_same(other)
        return WignerMap(self.grid, self.w - other.w)

    def __add__(self, other: "WignerMap") -> "WignerMap":
        self.check_same(other)
        return WignerMap(self.grid, self.w + other.w)


@dataclass(frozen=True, eq=False)
class CrossWignerMap:
    grid: SpatialGrid
    w: np.ndarray

    def __post_init__(self):
        w = np.array(self.w, dtype=np.complex128)
        if w.shape != (self.grid.n, self.grid.n):
            raise GridError(f"map shape {w.shape} does not match grid size {self.grid.n}")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def dq(self) -> float:
        return self.grid.dq

    @property
    def dp(self) -> float:
        return self.grid.wigner.dp

    def real_part(self) -> WignerMap:
        return WignerMap(self.grid, self.w.real.copy())


# --- Fourier transforms -------------------------------------------------------


def _cdft(x, axis=-1):
    """Centred DFT: ``X[k] = sum_m x[m] exp(-2 pi i k m / n)`` with both indices centred."""
    return np.fft.fftshift(np.fft.fft(np.fft.ifftshift(x, axes=axis), axis=axis), axes=axis)


def _cidft_sum(x, axis=-1):
    """Centred inverse sum ``sum_k x[k] exp(+2 pi i k m / n)`` (no 1/n)."""
    n = x.shape[axis]
    return n * np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(x, axes=axis), axis=axis), axes=axis)


def fourier_transform(psi: PositionWavefunction) -> MomentumWavefunction:
    """``Phi(p_k) = h^(-1/2) sum_j psi(q_j) exp(-i p_k q_j / hbar) dq`` on the fourier lattice."""
    g = psi.grid
    p = g.fourier.samples
    amp = g.dq / math.sqrt(g.h) * np.exp(-1j * p * g.q_center / g.hbar) * _cdft(psi.amp)
    return MomentumWavefunction(g, amp)


def inverse_fourier_transform(phi: MomentumWavefunction) -> PositionWavefunction:
    """Exact inverse of :func:`fourier_transform` on the same grid."""
    g = phi.grid
    p = g.fourier.samples
    amp = g.fourier.dp / math.sqrt(g.h) * _cidft_sum(phi.amp * np.exp(1j * p * g.q_center / g.hbar))
    return PositionWavefunction(g, amp)


def momentum_on_wigner_lattice(state) -> np.ndarray:
    """Momentum amplitudes sampled on the half-spacing wigner lattice.

    Obtained by zero-padding the position samples to twice the extent, so it
    is exact for a state that vanishes outside the grid.
    """
    psi = inverse_fourier_transform(state) if isinstance(state, MomentumWavefunction) else state
    g = psi.grid
    n = g.n
    padded = np.zeros(2 * n, dtype=np.complex128)
    padded[n // 2 : n // 2 + n] = psi.amp
    spec = _cdft(padded)[n // 2 : n // 2 + n]
    p = g.wigner.samples
    return g.dq / math.sqrt(g.h) * np.exp(-1j * p * g.q_center / g.hbar) * spec


def band_limit_excess(psi: PositionWavefunction) -> float:
    """Fraction of ``|Phi|^2`` lying beyond the Wigner band limit ``pi hbar / (2 dq)``."""
    phi = fourier_transform(psi)
    dens = np.abs(phi.amp) ** 2
    total = dens.sum()
    if total == 0:
        return 0.0
    outside = np.abs(phi.p) >= psi.grid.band_limit
    return float(dens[outside].sum() / total)


# --- Wigner transforms --------------------------------------------------------


def _rows_to_map(lags: np.ndarray, scale: float) -> np.ndarray:
    return scale * np.fft.fftshift(np.fft.fft(lags, axis=1), axes=1)


def _check_real(w: np.ndarray) -> np.ndarray:
    resid = float(np.max(np.abs(w.imag))) if w.size else 0.0
    if resid > IMAG_RESIDUE_TOL:
        raise AliasingError(f"Wigner transform left an imaginary residue of {resid:.3g}")
    return w.real.copy()


def wigner_from_position(psi: PositionWavefunction) -> WignerMap:
    g = psi.grid
    lags = kernels.lag_products(psi.amp, psi.amp)
    w = _rows_to_map(lags, 2.0 * g.dq / g.h)
    return WignerMap(g, _check_real(w))


def wigner_from_momentum(phi: MomentumWavefunction) -> WignerMap:
    """Momentum-side transform, resampled to the ``(q, wigner p)`` lattice."""
    g = phi.grid
    n = g.n
    phi_w = momentum_on_wigner_lattice(phi)
    lags = kernels.lag_products(phi_w, phi_w)  # rows: p_k, cols: lag r (fft order)
    dp_f = g.fourier.dp
    r = np.fft.fftfreq(n, 1.0 / n)
    phase = np.exp(1j * g.q_center * r * dp_f / g.hbar)
    w = (dp_f / g.h) * n * np.fft.fftshift(np.fft.ifft(lags * phase[None, :], axis=1), axes=1)
    return WignerMap(g, _check_real(w.T))


def cross_wigner(psi_n: PositionWavefunction, psi_m: PositionWavefunction) -> CrossWignerMap:
    """``W_nm`` built from ``conj(psi_n(q - x/2)) psi_m(q + x/2)``."""
    psi_n.grid.check_same(psi_m.grid)
    g = psi_n.grid
    lags = kernels.lag_products(psi_n.amp, psi_m.amp)
    return CrossWignerMap(g, _rows_to_map(lags, 2.0 * g.dq / g.h))


def wigner_direct(psi: PositionWavefunction) -> WignerMap:
    """O(n^3) evaluation of the same discrete rule, for cross-checking small grids."""
    g = psi.grid
    n = g.n
    if n > 256:
        raise ValueError("direct evaluation is meant for n <= 256")
    p = g.wigner.samples
    a = psi.amp
    w = np.zeros((n, n))
    for j in range(n):
        smax = min(j, n - 1 - j, n // 2 - 1)
        s = np.arange(-smax, smax + 1)
        c = np.conj(a[j - s]) * a[j + s]
        kern = np.exp(-1j * np.outer(p, 2.0 * s * g.dq) / g.hbar)
        w[j] = (2.0 * g.dq / g.h * (kern @ c)).real
    return WignerMap(g, w)


# --- integrals ----------------------------------------------------------------


def marginal_q(W: WignerMap) -> np.ndarray:
    return W.w.sum(axis=1) * W.dp


def marginal_p(W: WignerMap) -> np.ndarray:
    return W.w.sum(axis=0) * W.dq


def total_mass(W: WignerMap) -> float:
    return float(W.w.sum() * W.dq * W.dp)


def overlap(W1: WignerMap, W2: WignerMap) -> float:
    """Transition probability ``h sum W1 W2 dq dp``."""
    W1.check_same(W2)
    return float(W1.grid.h * np.sum(W1.w * W2.w) * W1.dq * W1.dp)


def moments(W: WignerMap) -> dict:
    """Means and standard deviations of both marginals."""
    mq, mp = marginal_q(W), marginal_p(W)
    q, p = W.q, W.p
    norm_q = mq.sum() * W.dq
    norm_p = mp.sum() * W.dp
    mean_q = float((q * mq).sum() * W.dq / norm_q)
    mean_p = float((p * mp).sum() * W.dp / norm_p)
    var_q = float(((q - mean_q) ** 2 * mq).sum() * W.dq / norm_q)
    var_p = float(((p - mean_p) ** 2 * mp).sum() * W.dp / norm_p)
    return {"mean_q": mean_q, "mean_p": mean_p, "sigma_q": math.sqrt(var_q), "sigma_p": math.sqrt(var_p)}


def uncertainty_product(W: WignerMap) -> float:
    m = moments(W)
    return m["sigma_q"] * m["sigma_p"]


# --- spectral shifts ----------------------------------------------------------


def _shift_along(arr: np.ndarray, axis: int, shift, pad: bool) -> np.ndarray:
    """Band-limited translation ``out(x) = in(x - shift)``, ``shift`` in samples.

    ``shift`` may be an array indexed by the remaining axis (for 2-D input, a
    1-D array over the other axis, or shape ``(1, m)``).  With
    ``pad`` the axis is zero-padded to twice its length (non-periodic data).
    """
    arr = np.moveaxis(np.asarray(arr), axis, 0)
    n = arr.shape[0]
    if pad:
        work = np.zeros((2 * n,) + arr.shape[1:], dtype=np.result_type(arr, np.complex128))
        work[n // 2 : n // 2 + n] = arr
    else:
        work = arr.astype(np.complex128)
    m = work.shape[0]
    f = np.fft.fftfreq(m)
    f = f.reshape((m,) + (1,) * (work.ndim - 1))
    shift = np.asarray(shift, dtype=float)
    spec = np.fft.fft(work, axis=0) * np.exp(-2j * np.pi * f * shift)
    out = np.fft.ifft(spec, axis=0)
    if pad:
        out = out[n // 2 : n // 2 + n]
    if not np.iscomplexobj(arr):
        out = out.real
    return np.moveaxis(out, 0, axis)


def shift_p(W: WignerMap, p0: float) -> WignerMap:
    """``W(q, p - p0)``, periodic along ``p`` (exact for position-path maps)."""
    return WignerMap(W.grid, _shift_along(W.w, 1, p0 / W.dp, pad=False))


def shift_q(W: WignerMap, q0: float) -> WignerMap:
    """``W(q - q0, p)``, periodic along ``q`` (exact for momentum-path maps)."""
    return WignerMap(W.grid, _shift_along(W.w, 0, q0 / W.dq, pad=False))


# --- reconstruction -----------------------------------------------------------

PURITY_TOL = 1e-6
REFERENCE_FLOOR = 1e-6


def reconstruct_position(W: WignerMap, reference="auto") -> PositionWavefunction:
    """Recover the pure state behind ``W`` up to a global phase.

    Uses ``psi(q) conj(psi(q0)) = int W((q+q0)/2, p) exp(i p (q-q0)/hbar) dp``
    with ``q0`` the argmax of the position marginal (``reference="auto"``) or
    a given sample index.  Half-sample midpoints come from band-limited
    interpolation along ``q``.  The result is unit-normalized.
    """
    g = W.grid
    n = g.n
    mass = total_mass(W)
    if not mass > 0:
        raise ReconstructionError("map has no positive mass")
    purity = overlap(W, W) / mass**2
    if purity < 1.0 - PURITY_TOL:
        raise ReconstructionError(f"map is not a pure state (purity {purity:.6g})")
    mq = marginal_q(W)
    if reference == "auto":
        j0 = int(np.argmax(mq))
    else:
        j0 = int(reference)
        if not 0 <= j0 < n:
            raise ReconstructionError(f"reference index {j0} outside the grid")
    if mq[j0] < REFERENCE_FLOOR * mq.max():
        raise ReconstructionError(
            f"reference sample {j0} has |psi|^2 = {mq[j0]:.3g}, too small relative to the peak"
        )
    half = _shift_along(W.w, 0, -0.5, pad=True)  # row m holds W(q_m + dq/2, p)
    j = np.arange(n)
    t = j + j0
    rows = np.where((t % 2 == 0)[:, None], W.w[np.minimum(t // 2, n - 1)], half[np.minimum((t - 1) // 2, n - 1)])
    x = (j - j0) * g.dq
    kern = np.exp(1j * np.outer(x, W.p) / g.hbar)
    vals = (rows * kern).sum(axis=1) * W.dp
    return PositionWavefunction(g, vals / math.sqrt(mq[j0])).normalized()
