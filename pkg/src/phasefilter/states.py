"""Wavefunction containers, the analytic states and their closed-form Wigner maps."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import GridError, MomentumGrid, SpatialGrid

__all__ = [
    "ClippingError",
    "MomentumWavefunction",
    "PositionWavefunction",
    "SlitParams",
    "analytic_filtered_wdf",
    "analytic_gaussian_wdf",
    "analytic_slit_wdf",
    "build_superposition",
    "double_slit_lobes",
    "double_slit_state",
    "gaussian_state",
    "hermite_gauss_state",
    "lens_output_lobes",
    "lens_output_state",
]

#: Edge-to-peak amplitude ratio above which a constructed state counts as clipped.
CONSTRUCTION_EDGE_TOL = 1e-9


class ClippingError(ValueError):
    """State does not fit its grid; the message carries a sizing hint."""


@dataclass(frozen=True, eq=False)
class PositionWavefunction:
    grid: SpatialGrid
    amp: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amp, dtype=np.complex128)
        if amp.shape != (self.grid.n,):
            raise GridError(f"amplitude shape {amp.shape} does not match grid size {self.grid.n}")
        if not np.all(np.isfinite(amp)):
            raise ValueError("wavefunction amplitudes must be finite")
        amp.setflags(write=False)
        object.__setattr__(self, "amp", amp)

    @property
    def q(self) -> np.ndarray:
        return self.grid.q

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.amp) ** 2) * self.grid.dq)

    def normalized(self) -> "PositionWavefunction":
        nrm = self.norm2
        if nrm <= 0:
            raise ValueError("cannot normalize the zero state")
        return PositionWavefunction(self.grid, self.amp / math.sqrt(nrm))

    def scaled(self, factor: complex) -> "PositionWavefunction":
        return PositionWavefunction(self.grid, self.amp * factor)

    def inner(self, other: "PositionWavefunction") -> complex:
        """``<self|other>`` by the rectangle rule."""
        self.grid.check_same(other.grid)
        return complex(np.sum(np.conj(self.amp) * other.amp) * self.grid.dq)

    def __add__(self, other: "PositionWavefunction") -> "PositionWavefunction":
        self.grid.check_same(other.grid)
        return PositionWavefunction(self.grid, self.amp + other.amp)


@dataclass(frozen=True, eq=False)
class MomentumWavefunction:
    """Amplitudes on the fourier momentum lattice of ``grid``."""

    grid: SpatialGrid
    amp: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amp, dtype=np.complex128)
        if amp.shape != (self.grid.n,):
            raise GridError(f"amplitude shape {amp.shape} does not match grid size {self.grid.n}")
        if not np.all(np.isfinite(amp)):
            raise ValueError("wavefunction amplitudes must be finite")
        amp.setflags(write=False)
        object.__setattr__(self, "amp", amp)

    @property
    def lattice(self) -> MomentumGrid:
        return self.grid.fourier

    @property
    def p(self) -> np.ndarray:
        return self.grid.fourier.samples

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.amp) ** 2) * self.grid.fourier.dp)

    def normalized(self) -> "MomentumWavefunction":
        nrm = self.norm2
        if nrm <= 0:
            raise ValueError("cannot normalize the zero state")
        return MomentumWavefunction(self.grid, self.amp / math.sqrt(nrm))


@dataclass(frozen=True)
class SlitParams:
    """Slit half-separation ``d``, slit width ``q_f``, beam misalignment ``delta``,
    incident width ``q_i`` and detector width ``q_d``."""

    d: float
    q_f: float
    delta: float = 0.0
    q_i: float = 8.0
    q_d: float = 2.4

    def __post_init__(self):
        for name in ("d", "q_f", "q_i", "q_d"):
            val = getattr(self, name)
            if not val > 0:
                raise ValueError(f"{name} must be positive, got {val!r}")


def _check_edges(grid: SpatialGrid, amp: np.ndarray, peak: float, what: str) -> None:
    edge = max(abs(amp[0]), abs(amp[-1]))
    if peak > 0 and edge > CONSTRUCTION_EDGE_TOL * peak:
        raise ClippingError(
            f"{what} is clipped by the grid (edge/peak = {edge / peak:.3g}); "
            f"enlarge q_extent beyond {grid.q_extent:g} or recentre the grid"
        )


def _gaussian(q, center, width):
    return (math.pi * width**2) ** -0.25 * np.exp(-((q - center) ** 2) / (2.0 * width**2))


def gaussian_state(
    grid: SpatialGrid,
    center: float = 0.0,
    width: float = 1.0,
    p0: float = 0.0,
    chirp: float = 0.0,
    *,
    allow_truncation: bool = False,
) -> PositionWavefunction:
    """Normalized Gaussian ``(pi w^2)^(-1/4) exp(-(q-c)^2/2w^2) exp(i p0 q/hbar) exp(i chirp q^2)``.

    ``allow_truncation`` skips the edge check; use it for broad incident beams
    that are multiplied by a filter before anything else sees them.
    """
    if not width > 0:
        raise ValueError(f"width must be positive, got {width!r}")
    q = grid.q
    env = _gaussian(q, center, width)
    if not allow_truncation:
        _check_edges(grid, env, (math.pi * width**2) ** -0.25, "Gaussian envelope")
    phase = np.exp(1j * (p0 * q / grid.hbar + chirp * q**2))
    return PositionWavefunction(grid, env * phase)


def _slit_norm(d, q_f):
    return (4.0 * math.pi * q_f**2) ** -0.25 / math.sqrt(1.0 + math.exp(-(d**2) / q_f**2))


def double_slit_lobes(grid: SpatialGrid, d: float, q_f: float) -> tuple[PositionWavefunction, PositionWavefunction]:
    """The ``(plus, minus)`` lobes of the cat state, each carrying the shared normalization."""
    if not (d >= 0 and q_f > 0):
        raise ValueError("need d >= 0 and q_f > 0")
    q = grid.q
    nrm = _slit_norm(d, q_f)
    plus = nrm * np.exp(-((q - d) ** 2) / (2.0 * q_f**2))
    minus = nrm * np.exp(-((q + d) ** 2) / (2.0 * q_f**2))
    _check_edges(grid, plus + minus, float(np.max(np.abs(plus + minus))) or nrm, "double-slit state")
    return PositionWavefunction(grid, plus), PositionWavefunction(grid, minus)


def double_slit_state(grid: SpatialGrid, d: float, q_f: float) -> PositionWavefunction:
    """Two Gaussian slits of width ``q_f`` at ``+-d``, normalized in the continuum."""
    plus, minus = double_slit_lobes(grid, d, q_f)
    return plus + minus


MAX_HERMITE_ORDER = 20


def hermite_gauss_state(grid: SpatialGrid, order: int, width: float = 1.0) -> PositionWavefunction:
    """Normalized Hermite-Gauss function of the given order, centred at ``q = 0``.

    Built by the three-term recurrence on sampled values and renormalized on
    the lattice.
    """
    if order < 0 or int(order) != order:
        raise ValueError(f"order must be a non-negative integer, got {order!r}")
    if order > MAX_HERMITE_ORDER:
        raise ValueError(f"order {order} exceeds the supported maximum {MAX_HERMITE_ORDER}")
    if not width > 0:
        raise ValueError("width must be positive")
    # classical turning point and peak momentum of the n-th function
    reach = math.sqrt(2 * order + 1)
    if reach * grid.hbar / width > 0.5 * grid.band_limit:
        raise ValueError(
            f"order {order} at width {width:g} needs momenta up to {reach / width:.3g}, "
            f"beyond half the band limit {grid.band_limit:.3g}; refine the grid"
        )
    x = grid.q / width
    h_prev = np.zeros_like(x)
    h_cur = math.pi**-0.25 * np.exp(-(x**2) / 2.0)
    for k in range(order):
        h_prev, h_cur = h_cur, math.sqrt(2.0 / (k + 1)) * x * h_cur - math.sqrt(k / (k + 1)) * h_prev
    amp = h_cur / math.sqrt(width)
    _check_edges(grid, amp, float(np.max(np.abs(amp))), f"Hermite-Gauss order {order}")
    return PositionWavefunction(grid, amp).normalized()


def build_superposition(coeffs, states) -> PositionWavefunction:
    """``sum_n a_n psi_n``; no renormalization."""
    states = list(states)
    coeffs = list(coeffs)
    if not states or len(coeffs) != len(states):
        raise ValueError("need one coefficient per state and at least one state")
    grid = states[0].grid
    amp = np.zeros(grid.n, dtype=np.complex128)
    for a, st in zip(coeffs, states):
        grid.check_same(st.grid)
        amp = amp + complex(a) * st.amp
    return PositionWavefunction(grid, amp)


def lens_output_lobes(
    grid: SpatialGrid, d: float, q_f: float, K: float, p0: float
) -> tuple[PositionWavefunction, PositionWavefunction]:
    """Unnormalized lobes of the off-axis lens output; sum them for the state.

    Each slit lobe keeps the double-slit profile ``exp(-(q -+ d)^2 / 2 q_f^2)``,
    picks up the common lens phase ``exp(-i q^2/K^2)`` and a tilt ``-+p0``.
    ``K = inf`` disables the lens.
    """
    if not (K > 0 and q_f > 0 and d >= 0):
        raise ValueError("need K > 0, q_f > 0, d >= 0")
    q = grid.q
    lens = np.ones_like(q, dtype=np.complex128) if math.isinf(K) else np.exp(-1j * q**2 / K**2)
    plus = lens * np.exp(-((q - d) ** 2) / (2.0 * q_f**2) - 1j * p0 * q / grid.hbar)
    minus = lens * np.exp(-((q + d) ** 2) / (2.0 * q_f**2) + 1j * p0 * q / grid.hbar)
    total = np.abs(plus + minus)
    _check_edges(grid, total, float(np.max(total)), "lens output state")
    return PositionWavefunction(grid, plus), PositionWavefunction(grid, minus)


def lens_output_state(grid: SpatialGrid, d: float, q_f: float, K: float, p0: float) -> PositionWavefunction:
    """State just behind two off-axis lenses placed on the slits, renormalized."""
    plus, minus = lens_output_lobes(grid, d, q_f, K, p0)
    return (plus + minus).normalized()


# --- closed-form Wigner maps -------------------------------------------------


def analytic_gaussian_wdf(q, p, q_i, hbar: float = 1.0):
    """``(2/h) exp(-q^2/q_i^2 - p^2 q_i^2/hbar^2)``."""
    if not q_i > 0:
        raise ValueError("q_i must be positive")
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    return (2.0 / (2.0 * math.pi * hbar)) * np.exp(-(q**2) / q_i**2 - (p * q_i / hbar) ** 2)


def analytic_slit_wdf(q, p, d, q_f, hbar: float = 1.0):
    """Closed-form Wigner map of the double-slit state.

    Returns ``(w_plus, w_minus, w_int, total)``.
    """
    if not (d >= 0 and q_f > 0):
        raise ValueError("need d >= 0 and q_f > 0")
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    h = 2.0 * math.pi * hbar
    pref = np.exp(-((p * q_f / hbar) ** 2)) / (h * (1.0 + math.exp(-(d**2) / q_f**2)))
    w_plus = pref * np.exp(-((q - d) ** 2) / q_f**2)
    w_minus = pref * np.exp(-((q + d) ** 2) / q_f**2)
    w_int = pref * 2.0 * np.exp(-(q**2) / q_f**2) * np.cos(2.0 * d * p / hbar)
    return w_plus, w_minus, w_int, w_plus + w_minus + w_int


def analytic_filtered_wdf(q, p, params: SlitParams, hbar: float = 1.0):
    """Wigner map of a Gaussian beam (width ``q_i``, offset ``delta``) behind the slits.

    The detector case uses the same expression with ``delta -> d`` and
    ``q_i -> q_d``; build the :class:`SlitParams` accordingly.
    """
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    d, q_f, q_i, delta = params.d, params.q_f, params.q_i, params.delta
    h = 2.0 * math.pi * hbar
    s2 = q_f**2 + q_i**2
    pref = 1.0 / (h * (1.0 + math.exp(-(d**2) / q_f**2)) * math.sqrt(math.pi * s2))
    env = pref * np.exp(-((q - delta) ** 2) / q_i**2) * np.exp(-((p / hbar) ** 2) * q_f**2 * q_i**2 / s2)
    bracket = (
        np.exp(-((q - d) ** 2) / q_f**2)
        + np.exp(-((q + d) ** 2) / q_f**2)
        + 2.0 * np.exp(-(q**2) / q_f**2) * math.exp(-(d**2) / s2) * np.cos(2.0 * d * p / hbar * q_i**2 / s2)
    )
    return env * bracket
