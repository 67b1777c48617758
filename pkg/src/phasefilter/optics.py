"""Free-space propagation, thin lenses and tilts, on wavefunctions and on maps.

Propagation is the paraxial shear: in momentum space the state picks up
``exp(-i tau p^2 / 2 hbar)``, which moves every phase-space point along
``q`` by ``tau p``.  With ``hbar = 1`` and lengths in slit-width units a plane
at distance ``D`` behind the slits is reached with ``tau = D``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .filters import REPRESENTATIONS, FilteredOutput, FilterSpec, apply_filter
from .states import ClippingError, MomentumWavefunction, PositionWavefunction
from .wigner import WignerMap, _shift_along, band_limit_excess, fourier_transform, inverse_fourier_transform

__all__ = [
    "BandLimitWarning",
    "ELEMENT_KINDS",
    "EDGE_TOL",
    "Element",
    "apply_element",
    "check_edges",
    "detector_transmittance",
    "free_propagate",
    "lens_shear_wigner",
    "shear_wigner",
    "thin_lens",
    "tilt",
    "tilt_wigner",
]

EDGE_TOL = 1e-6
EDGE_BAND = 0.01
BAND_TOL = 1e-10


class BandLimitWarning(UserWarning):
    """A state carries momentum beyond what the Wigner lattice can hold."""


def _band(n: int) -> int:
    return max(2, int(math.ceil(EDGE_BAND * n)))


def check_edges(psi: PositionWavefunction, what: str = "state") -> None:
    """Raise :class:`ClippingError` if the outer 1% of the grid holds more than
    ``EDGE_TOL`` of the peak amplitude."""
    mag = np.abs(psi.amp)
    peak = float(mag.max())
    if peak == 0.0:
        return
    b = _band(mag.size)
    edge = float(max(mag[:b].max(), mag[-b:].max()))
    if edge > EDGE_TOL * peak:
        g = psi.grid
        raise ClippingError(
            f"{what} reaches the grid edge (edge/peak = {edge / peak:.3g}); "
            f"enlarge the grid extent beyond {g.q_extent:g} (e.g. --grid-extent {2 * g.q_extent:g} "
            f"--grid-n {2 * g.n})"
        )


# --- wavefunction path --------------------------------------------------------


def free_propagate(psi: PositionWavefunction, tau: float, *, check: bool = True) -> PositionWavefunction:
    """Propagate by the shear ``tau`` (``W(q, p) -> W(q - tau p, p)``)."""
    if not math.isfinite(tau):
        raise ValueError(f"tau must be finite, got {tau!r}")
    if tau == 0:
        return psi
    g = psi.grid
    phi = fourier_transform(psi)
    phase = np.exp(-1j * tau * phi.p**2 / (2.0 * g.hbar))
    out = inverse_fourier_transform(MomentumWavefunction(g, phi.amp * phase))
    if check:
        check_edges(out, f"state propagated by tau={tau:g}")
    return out


def thin_lens(psi: PositionWavefunction, K: float) -> PositionWavefunction:
    """Multiply by ``exp(-i q^2 / K^2)``; ``K = inf`` is no lens.

    The phase is taken exactly as written, without ``hbar``.
    """
    if not K > 0:
        raise ValueError(f"lens parameter K must be positive, got {K!r}")
    if math.isinf(K):
        return psi
    return PositionWavefunction(psi.grid, psi.amp * np.exp(-1j * psi.q**2 / K**2))


def tilt(psi: PositionWavefunction, p0: float) -> PositionWavefunction:
    """Multiply by ``exp(i p0 q / hbar)``; warns if the result leaves the band limit."""
    if p0 == 0:
        return psi
    out = PositionWavefunction(psi.grid, psi.amp * np.exp(1j * p0 * psi.q / psi.grid.hbar))
    excess = band_limit_excess(out)
    if excess > BAND_TOL:
        warnings.warn(
            f"tilt p0={p0:g} pushes {excess:.3g} of the momentum density past the band limit",
            BandLimitWarning,
            stacklevel=2,
        )
    return out


# --- phase-space path ---------------------------------------------------------


def shear_wigner(W: WignerMap, tau: float, *, check: bool = True) -> WignerMap:
    """``W(q - tau p, p)`` by band-limited shifting of each momentum column along ``q``.

    Meant for position-path maps (non-periodic in ``q``): each column is zero
    padded, and content pushed out of the grid raises :class:`ClippingError`.
    """
    if not math.isfinite(tau):
        raise ValueError(f"tau must be finite, got {tau!r}")
    if tau == 0:
        return W
    n = W.grid.n
    shifts = (tau * W.p / W.dq)[np.newaxis, :]
    work = np.zeros((2 * n, n))
    work[n // 2 : n // 2 + n] = W.w
    moved = _shift_along(work, 0, shifts, pad=False)
    inside = moved[n // 2 : n // 2 + n]
    if check:
        peak = float(np.abs(inside).max())
        b = _band(n)
        outside = np.concatenate([moved[: n // 2 + b], moved[n // 2 + n - b :]])
        edge = float(np.abs(outside).max())
        if peak > 0 and edge > EDGE_TOL * peak:
            raise ClippingError(
                f"map sheared by tau={tau:g} reaches the grid edge (edge/peak = {edge / peak:.3g}); "
                "enlarge the grid extent"
            )
    return WignerMap(W.grid, inside)


def lens_shear_wigner(W: WignerMap, K: float) -> WignerMap:
    """Map of the lensed state: ``W(q, p + 2 hbar q / K^2)`` (circular along ``p``)."""
    if not K > 0:
        raise ValueError(f"lens parameter K must be positive, got {K!r}")
    if math.isinf(K):
        return W
    shifts = -2.0 * W.grid.hbar * W.q / K**2 / W.dp
    return WignerMap(W.grid, _shift_along(W.w, 1, shifts, pad=False))


def tilt_wigner(W: WignerMap, p0: float) -> WignerMap:
    """Map of the tilted state: ``W(q, p - p0)``."""
    if p0 == 0:
        return W
    return WignerMap(W.grid, _shift_along(W.w, 1, p0 / W.dp, pad=False))


# --- elements -----------------------------------------------------------------

ELEMENT_KINDS = {
    "free_space": ("tau",),
    "lens": ("K",),
    "tilt": ("p0",),
    "filter": ("representation", "center", "width", "offset"),
    "detector_filter": ("q_d", "center"),
}
_REQUIRED = {
    "free_space": ("tau",),
    "lens": ("K",),
    "tilt": ("p0",),
    "filter": ("center", "width"),
    "detector_filter": ("q_d",),
}


@dataclass(frozen=True)
class Element:
    """One optical element; ``params`` holds the kind's named parameters.

    ``filter`` is a Gaussian transmittance ``exp(-(x - center)^2 / 2 width^2)``
    in the chosen representation.  ``detector_filter`` is the unit-peak
    Gaussian ``exp(-(q - center)^2 / 2 q_d^2)`` in position.
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ELEMENT_KINDS:
            raise ValueError(f"unknown element kind {self.kind!r}")
        allowed = ELEMENT_KINDS[self.kind]
        for key in self.params:
            if key not in allowed:
                raise ValueError(f"{self.kind} does not take parameter {key!r}")
        for key in _REQUIRED[self.kind]:
            if key not in self.params:
                raise ValueError(f"{self.kind} needs parameter {key!r}")
        p = self.params
        if self.kind == "free_space" and not math.isfinite(p["tau"]):
            raise ValueError("tau must be finite")
        if self.kind == "lens" and not p["K"] > 0:
            raise ValueError("lens needs K > 0")
        if self.kind == "detector_filter" and not p["q_d"] > 0:
            raise ValueError("detector_filter needs q_d > 0")
        if self.kind == "filter":
            if not p["width"] > 0:
                raise ValueError("filter needs width > 0")
            rep = p.get("representation", "position")
            if rep not in REPRESENTATIONS:
                raise ValueError(f"unknown filter representation {rep!r}")

    def __hash__(self):
        return hash((self.kind, tuple(sorted(self.params.items()))))


def detector_transmittance(grid, q_d: float, center: float) -> PositionWavefunction:
    """Unit-peak Gaussian transmittance of a which-path detector."""
    q = grid.q
    return PositionWavefunction(grid, np.exp(-((q - center) ** 2) / (2.0 * q_d**2)).astype(np.complex128))


def _filter_spec(grid, params) -> FilterSpec:
    rep = params.get("representation", "position")
    center = float(params["center"])
    width = float(params["width"])
    offset = float(params.get("offset", 0.0))
    if rep.endswith("momentum"):
        p = grid.fourier.samples
        trans = MomentumWavefunction(grid, np.exp(-((p - center) ** 2) / (2.0 * width**2)).astype(np.complex128))
    else:
        q = grid.q
        trans = PositionWavefunction(grid, np.exp(-((q - center) ** 2) / (2.0 * width**2)).astype(np.complex128))
    return FilterSpec(rep, trans, offset)


def apply_element(psi: PositionWavefunction, element: Element) -> tuple[PositionWavefunction, float]:
    """Apply one element; returns the raw (unrenormalized) state and the
    fraction of the incoming norm it kept."""
    p = element.params
    kind = element.kind
    if kind == "free_space":
        return free_propagate(psi, float(p["tau"])), 1.0
    if kind == "lens":
        return thin_lens(psi, float(p["K"])), 1.0
    if kind == "tilt":
        return tilt(psi, float(p["p0"])), 1.0
    if kind == "detector_filter":
        trans = detector_transmittance(psi.grid, float(p["q_d"]), float(p.get("center", 0.0)))
        out = apply_filter(psi, FilterSpec("position", trans))
        return out.state_raw, out.passed_fraction
    spec = _filter_spec(psi.grid, p)
    state = fourier_transform(psi) if spec.representation.endswith("momentum") else psi
    out: FilteredOutput = apply_filter(state, spec)
    raw = out.state_raw
    if isinstance(raw, MomentumWavefunction):
        raw = inverse_fourier_transform(raw)
    return raw, out.passed_fraction
