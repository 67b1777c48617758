"""Filtering, detection and interference bookkeeping, on both the wavefunction
path and the phase-space path.

Convolution conventions on the lattice
--------------------------------------
Position-path maps are periodic in ``p``, so convolutions along ``p`` of such
maps are circular over one lattice period; along ``q`` they are linear
(zero-padded).  Momentum-path maps are the mirror image: circular along ``q``,
linear along ``p``.  Kernels (filter and detector maps) are read with their
own lattice coordinates, so ``W_f(q - q', .)`` needs ``q_center`` to be a whole
number of samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import gaussian_filter1d
from scipy.signal import fftconvolve

from . import kernels
from .states import MomentumWavefunction, PositionWavefunction
from .wigner import WignerMap, _cdft, shift_p, shift_q

__all__ = [
    "FilterSpec",
    "FilteredOutput",
    "Visibility",
    "apply_filter",
    "apply_momentum_filter",
    "apply_position_filter",
    "detect",
    "detect_wavefunction",
    "envelope_window",
    "filter_phase_space",
    "filter_phase_space_momentum",
    "filter_phase_space_position",
    "fringe_visibility",
    "general_filter_momentum",
    "general_filter_momentum_phase_space",
    "general_filter_position",
    "general_filter_position_phase_space",
    "interference_energy",
    "fringe_period",
    "smoothed_envelope",
    "split_interference",
]

REPRESENTATIONS = ("position", "momentum", "general-position", "general-momentum")


@dataclass(frozen=True, eq=False)
class FilterSpec:
    """A transmittance and where it acts.  ``offset`` is ``p_0`` for
    ``general-position`` and ``q_0`` for ``general-momentum``; zero otherwise."""

    representation: str
    transmittance: PositionWavefunction | MomentumWavefunction
    offset: float = 0.0

    def __post_init__(self):
        if self.representation not in REPRESENTATIONS:
            raise ValueError(f"unknown filter representation {self.representation!r}")
        if self.offset != 0.0 and not self.representation.startswith("general"):
            raise ValueError("offset is only meaningful for the general filter forms")
        want = MomentumWavefunction if self.representation.endswith("momentum") else PositionWavefunction
        if not isinstance(self.transmittance, want):
            raise TypeError(f"{self.representation} filter needs a {want.__name__} transmittance")


@dataclass(frozen=True, eq=False)
class FilteredOutput:
    """Raw output (keeps the input's scale), a unit-norm copy and the passed fraction.

    ``state_renorm`` is ``None`` when the filter blocked everything.
    """

    state_raw: PositionWavefunction | MomentumWavefunction
    state_renorm: PositionWavefunction | MomentumWavefunction | None
    passed_fraction: float

    @property
    def blocked(self) -> bool:
        return self.state_renorm is None


def _finish(state_in, raw) -> FilteredOutput:
    n_in = state_in.norm2
    n_out = raw.norm2
    frac = n_out / n_in if n_in > 0 else 0.0
    renorm = raw.normalized() if n_out > 0 else None
    return FilteredOutput(raw, renorm, frac)


# --- multiplicative filters ---------------------------------------------------


def apply_position_filter(psi_in: PositionWavefunction, psi_f: PositionWavefunction) -> FilteredOutput:
    psi_in.grid.check_same(psi_f.grid)
    return _finish(psi_in, PositionWavefunction(psi_in.grid, psi_in.amp * psi_f.amp))


def apply_momentum_filter(phi_in: MomentumWavefunction, phi_f: MomentumWavefunction) -> FilteredOutput:
    phi_in.grid.check_same(phi_f.grid)
    return _finish(phi_in, MomentumWavefunction(phi_in.grid, phi_in.amp * phi_f.amp))


def _circular(a, b, axis, origin):
    """``out[i] = sum_i' a[i'] b[(i - i' + origin) mod n]`` along ``axis``."""
    n = a.shape[axis]
    circ = np.fft.ifft(np.fft.fft(a, axis=axis) * np.fft.fft(b, axis=axis), axis=axis).real
    return np.roll(circ, -origin, axis=axis)


def _linear(a, b, axis, origin):
    """``out[i] = sum_i' a[i'] b[i - i' + origin]`` along ``axis``, ``b`` zero off the lattice."""
    n = a.shape[axis]
    full = fftconvolve(a, b, mode="full", axes=axis)
    idx = np.arange(n) + origin
    ok = (idx >= 0) & (idx < full.shape[axis])
    out = np.zeros_like(a, dtype=full.dtype)
    sl_out = [slice(None)] * a.ndim
    sl_full = [slice(None)] * a.ndim
    sl_out[axis] = np.nonzero(ok)[0]
    sl_full[axis] = idx[ok]
    out[tuple(sl_out)] = full[tuple(sl_full)]
    return out


def filter_phase_space_position(W_in: WignerMap, W_f: WignerMap) -> WignerMap:
    """Multiplication along ``q``, convolution along ``p``:
    ``W_out(q, p) = sum_p' W_in(q, p') W_f(q, p - p') dp``."""
    W_in.check_same(W_f)
    n = W_in.grid.n
    return WignerMap(W_in.grid, W_in.dp * _circular(W_in.w, W_f.w, 1, n // 2))


def filter_phase_space_momentum(W_in: WignerMap, W_f: WignerMap) -> WignerMap:
    """Convolution along ``q``, multiplication along ``p`` (momentum-path maps)."""
    W_in.check_same(W_f)
    g = W_in.grid
    return WignerMap(g, g.dq * _circular(W_in.w, W_f.w, 0, g.n // 2 - g.center_offset))


# --- generalized filters ------------------------------------------------------


def general_filter_position(psi_in: PositionWavefunction, psi_f: PositionWavefunction, p0: float = 0.0) -> FilteredOutput:
    """``psi_out(q) = h^(-1/2) sum_q' psi_in(q') psi_f(q - q') exp(i p0 q'/hbar) dq``."""
    psi_in.grid.check_same(psi_f.grid)
    g = psi_in.grid
    a = psi_in.amp * np.exp(1j * p0 * g.q / g.hbar)
    out = g.dq / math.sqrt(g.h) * _linear(a, psi_f.amp, 0, g.n // 2 - g.center_offset)
    return _finish(psi_in, PositionWavefunction(g, out))


def general_filter_position_phase_space(W_in: WignerMap, W_f: WignerMap, p0: float = 0.0) -> WignerMap:
    """``W_out(q, p) = sum_q' W_in(q', p - p0) W_f(q - q', p) dq`` (position-path maps)."""
    W_in.check_same(W_f)
    g = W_in.grid
    shifted = shift_p(W_in, p0) if p0 else W_in
    return WignerMap(g, g.dq * _linear(shifted.w, W_f.w, 0, g.n // 2 - g.center_offset))


def general_filter_momentum(phi_in: MomentumWavefunction, phi_f: MomentumWavefunction, q0: float = 0.0) -> FilteredOutput:
    """``Phi_out(p) = h^(-1/2) sum_p' Phi_in(p') Phi_f(p - p') exp(-i q0 p'/hbar) dp``."""
    phi_in.grid.check_same(phi_f.grid)
    g = phi_in.grid
    a = phi_in.amp * np.exp(-1j * q0 * phi_in.p / g.hbar)
    out = g.fourier.dp / math.sqrt(g.h) * _linear(a, phi_f.amp, 0, g.n // 2)
    return _finish(phi_in, MomentumWavefunction(g, out))


def general_filter_momentum_phase_space(W_in: WignerMap, W_f: WignerMap, q0: float = 0.0) -> WignerMap:
    """``W_out(q, p) = sum_p' W_in(q - q0, p') W_f(q, p - p') dp`` (momentum-path maps)."""
    W_in.check_same(W_f)
    g = W_in.grid
    shifted = shift_q(W_in, q0) if q0 else W_in
    return WignerMap(g, W_in.dp * _linear(shifted.w, W_f.w, 1, g.n // 2))


def apply_filter(state, spec: FilterSpec) -> FilteredOutput:
    """Wavefunction-path dispatch on ``spec.representation``."""
    rep = spec.representation
    if rep == "position":
        return apply_position_filter(state, spec.transmittance)
    if rep == "momentum":
        return apply_momentum_filter(state, spec.transmittance)
    if rep == "general-position":
        return general_filter_position(state, spec.transmittance, spec.offset)
    return general_filter_momentum(state, spec.transmittance, spec.offset)


def filter_phase_space(W_in: WignerMap, W_f: WignerMap, spec: FilterSpec) -> WignerMap:
    """Phase-space-path dispatch; ``W_f`` is the transmittance's map."""
    rep = spec.representation
    if rep == "position":
        return filter_phase_space_position(W_in, W_f)
    if rep == "momentum":
        return filter_phase_space_momentum(W_in, W_f)
    if rep == "general-position":
        return general_filter_position_phase_space(W_in, W_f, spec.offset)
    return general_filter_momentum_phase_space(W_in, W_f, spec.offset)


# --- detection ----------------------------------------------------------------


def detect(W_in: WignerMap, W_d: WignerMap) -> WignerMap:
    """Full phase-space convolution ``sum W_in(q', p') W_d(q - q', p - p') dq dp``.

    Linear along ``q``, circular along ``p`` (position-path maps).
    """
    W_in.check_same(W_d)
    g = W_in.grid
    n = g.n
    a = np.zeros((2 * n, n))
    b = np.zeros((2 * n, n))
    a[:n] = W_in.w
    b[:n] = W_d.w
    conv = np.fft.ifft2(np.fft.fft2(a) * np.fft.fft2(b)).real
    conv = np.roll(conv, -(n // 2), axis=1)
    rows = np.arange(n) + n // 2 - g.center_offset
    out = np.zeros((n, n))
    ok = (rows >= 0) & (rows < 2 * n)
    out[ok] = conv[rows[ok]]
    return WignerMap(g, out * g.dq * W_in.dp)


def detect_wavefunction(psi_in: PositionWavefunction, psi_d: PositionWavefunction) -> WignerMap:
    """``h^-1 |sum psi_in(q') conj(psi_d(q - q')) exp(-i p q'/hbar) dq|^2`` on the map lattice."""
    psi_in.grid.check_same(psi_d.grid)
    g = psi_in.grid
    n = g.n
    prods = kernels.shifted_products(psi_in.amp, psi_d.amp, n // 2 - g.center_offset)
    padded = np.zeros((n, 2 * n), dtype=np.complex128)
    padded[:, n // 2 : n // 2 + n] = prods
    amp = _cdft(padded, axis=1)[:, n // 2 : n // 2 + n] * g.dq
    return WignerMap(g, np.abs(amp) ** 2 / g.h)


# --- interference bookkeeping -------------------------------------------------


def split_interference(W_total: WignerMap, auto_parts) -> tuple[WignerMap, WignerMap]:
    """``(W_auto, W_int)`` with ``W_auto`` the sum of the (already weighted) parts."""
    auto = np.zeros_like(W_total.w)
    for part in auto_parts:
        W_total.check_same(part)
        auto = auto + part.w
    return WignerMap(W_total.grid, auto), WignerMap(W_total.grid, W_total.w - auto)


def interference_energy(W_int: WignerMap) -> float:
    """``sum |W_int| dq dp``."""
    return float(np.abs(W_int.w).sum() * W_int.dq * W_int.dp)


# --- fringe visibility --------------------------------------------------------


class Visibility(float):
    """A visibility value; ``degenerate`` is set when the window had no interior minimum."""

    degenerate: bool

    def __new__(cls, value: float, degenerate: bool = False):
        obj = super().__new__(cls, value)
        obj.degenerate = degenerate
        return obj


def fringe_period(intensity) -> float | None:
    """Dominant fringe period in samples, from the strongest local peak of the
    intensity spectrum away from zero frequency; ``None`` when there is none."""
    inten = np.asarray(intensity, dtype=float)
    spec = np.abs(np.fft.rfft(inten - inten.mean()))
    if spec.size < 4:
        return None
    mid = spec[1:-1]
    peaks = np.nonzero((mid > spec[:-2]) & (mid >= spec[2:]))[0] + 1
    peaks = peaks[spec[peaks] > 1e-6 * spec.max()]
    if peaks.size == 0:
        return None
    k = int(peaks[np.argmax(spec[peaks])])
    return inten.size / k


def smoothed_envelope(intensity, sigma: float | None = None) -> np.ndarray:
    """Gaussian-smoothed intensity.  ``sigma`` in samples; by default one fringe
    period (at least 8 samples) so the fringes wash out."""
    inten = np.asarray(intensity, dtype=float)
    if sigma is None:
        sigma = max(8.0, fringe_period(inten) or 0.0)
    return gaussian_filter1d(inten, sigma, mode="constant")


def envelope_window(envelope, threshold: float = 0.1, anchor: int | None = None) -> tuple[int, int]:
    """Contiguous ``[start, stop)`` around ``anchor`` (default: envelope argmax) where
    the envelope exceeds ``threshold`` times its maximum."""
    env = np.asarray(envelope, dtype=float)
    if anchor is None:
        anchor = int(np.argmax(env))
    level = threshold * env.max()
    if not env[anchor] > level:
        return anchor, anchor + 1
    above = env > level
    start = anchor
    while start > 0 and above[start - 1]:
        start -= 1
    stop = anchor + 1
    while stop < env.size and above[stop]:
        stop += 1
    return start, stop


def _window_bounds(window, size):
    if isinstance(window, slice):
        start, stop, _ = window.indices(size)
    else:
        start, stop = (int(v) for v in window)
    return max(start, 0), min(stop, size)


def fringe_visibility(intensity, window=None, *, envelope=None, smooth: float | None = None) -> Visibility:
    """``(I_max - I_min) / (I_max + I_min)`` over a window.

    Without ``envelope``, ``I_max`` is the brightest interior maximum of the
    window and ``I_min`` the lowest sample between the maxima bracketing it,
    which keeps envelope tails out.  The window defaults to where the smoothed
    intensity exceeds 10% of its peak.  Fewer than two interior maxima gives 0,
    flagged degenerate.

    With ``envelope`` (the fringe-free intensity, e.g. an incoherent sum of
    contributions) the ratio ``intensity / envelope`` is used instead of the
    raw intensity, over the window where the envelope exceeds 10% of its peak.
    Non-overlapping contributions then read as zero visibility rather than as
    a deep gap between two bright regions.

    Parameters
    ----------
    intensity : array_like
        Non-negative samples.
    window : (start, stop) or slice, optional
    envelope : array_like, optional
    smooth : float, optional
        Smoothing width in samples for the default window; by default one
        fringe period.
    """
    inten = np.asarray(intensity, dtype=float)
    if envelope is not None:
        env = np.asarray(envelope, dtype=float)
        if env.shape != inten.shape:
            raise ValueError("envelope and intensity shapes differ")
        if window is None:
            window = envelope_window(env)
        start, stop = _window_bounds(window, inten.size)
        seg_env = env[start:stop]
        if seg_env.size == 0:
            raise ValueError("empty visibility window")
        if not seg_env.max() > 1e-9:
            raise ValueError("envelope vanishes in the window")
        keep = seg_env > 0.1 * seg_env.max()
        ratio = inten[start:stop][keep] / seg_env[keep]
        if ratio.size < 3:
            return Visibility(0.0, degenerate=True)
        hi, lo = float(ratio.max()), max(float(ratio.min()), 0.0)
        return Visibility((hi - lo) / (hi + lo) if hi + lo > 0 else 0.0)

    if window is None:
        window = envelope_window(smoothed_envelope(inten, smooth))
    start, stop = _window_bounds(window, inten.size)
    seg = inten[start:stop]
    if seg.size == 0:
        raise ValueError("empty visibility window")
    if not seg.max() > 1e-9:
        raise ValueError("window holds no intensity")
    interior = seg[1:-1]
    peaks = np.nonzero((interior > seg[:-2]) & (interior >= seg[2:]))[0] + 1
    if peaks.size < 2:
        return Visibility(0.0, degenerate=True)
    k = int(np.argmax(seg[peaks]))
    lo_idx = peaks[k - 1] if k > 0 else peaks[k]
    hi_idx = peaks[k + 1] if k + 1 < peaks.size else peaks[k]
    i_max = float(seg[peaks[k]])
    i_min = max(float(seg[lo_idx : hi_idx + 1].min()), 0.0)
    return Visibility((i_max - i_min) / (i_max + i_min))
