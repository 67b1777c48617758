"""Sampling lattices and unit conventions.

Positions live on a uniform lattice ``q_j = q_center + (j - n/2) dq``.  Two
momentum lattices are derived from it:

* the *fourier* lattice, conjugate to the position lattice under the discrete
  Fourier transform, with spacing ``2 pi hbar / (n dq)``;
* the *wigner* lattice, with half that spacing, on which the discrete Wigner
  map lives (the correlation variable is sampled at ``2 dq``).

To avoid aliasing in the Wigner map a state should be band limited to
``|p| < pi hbar / (2 dq)``, i.e. to the range of the wigner lattice.  States
are treated as identically zero outside the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Constants",
    "GridError",
    "MomentumGrid",
    "SpatialGrid",
    "make_grid",
]


class GridError(ValueError):
    """Invalid lattice parameters or mismatched lattices."""


@dataclass(frozen=True)
class Constants:
    """Action unit.  ``h`` is always ``2 pi hbar``."""

    hbar: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.hbar) and self.hbar > 0):
            raise GridError(f"hbar must be positive and finite, got {self.hbar!r}")

    @property
    def h(self) -> float:
        return 2.0 * math.pi * self.hbar


@dataclass(frozen=True)
class MomentumGrid:
    """A centred momentum lattice of ``n`` points.

    ``variant`` is ``"fourier"`` or ``"wigner"``.
    """

    n: int
    dp: float
    variant: str

    @property
    def samples(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dp

    @property
    def extent(self) -> float:
        return self.n * self.dp


@dataclass(frozen=True)
class SpatialGrid:
    n: int
    q_center: float
    q_extent: float
    hbar: float = 1.0

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n:
            raise GridError(f"sample count must be an integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if self.n < 4 or self.n % 2:
            raise GridError(f"sample count must be even and >= 4, got {self.n}")
        if not (math.isfinite(self.q_extent) and self.q_extent > 0):
            raise GridError(f"extent must be positive and finite, got {self.q_extent!r}")
        if not math.isfinite(self.q_center):
            raise GridError("grid centre must be finite")
        Constants(self.hbar)

    @property
    def h(self) -> float:
        return 2.0 * math.pi * self.hbar

    @property
    def dq(self) -> float:
        return self.q_extent / self.n

    @property
    def q(self) -> np.ndarray:
        return self.q_center + (np.arange(self.n) - self.n // 2) * self.dq

    @property
    def fourier(self) -> MomentumGrid:
        return MomentumGrid(self.n, 2.0 * math.pi * self.hbar / (self.n * self.dq), "fourier")

    @property
    def wigner(self) -> MomentumGrid:
        return MomentumGrid(self.n, math.pi * self.hbar / (self.n * self.dq), "wigner")

    @property
    def band_limit(self) -> float:
        """Largest momentum magnitude a state may carry without Wigner aliasing."""
        return math.pi * self.hbar / (2.0 * self.dq)

    def index_of(self, q) -> np.ndarray | int:
        """Nearest sample index for position(s) ``q``."""
        idx = np.rint((np.asarray(q, dtype=float) - self.q_center) / self.dq).astype(int) + self.n // 2
        return int(idx) if idx.ndim == 0 else idx

    @property
    def center_offset(self) -> int:
        """``q_center / dq`` as an integer; needed when the lattice doubles as a kernel axis."""
        ratio = self.q_center / self.dq
        k = round(ratio)
        if abs(ratio - k) > 1e-9 * max(1.0, abs(ratio)):
            raise GridError(
                "convolution kernels need q_center to be a whole number of samples "
                f"(q_center/dq = {ratio!r})"
            )
        return int(k)

    def check_same(self, other: "SpatialGrid") -> None:
        if self != other:
            raise GridError(f"lattice mismatch: {self} vs {other}")


def make_grid(n: int, q_center: float = 0.0, q_extent: float = 64.0, hbar: float = 1.0) -> SpatialGrid:
    """Build a :class:`SpatialGrid`; rejects odd or tiny ``n`` and non-positive extent or hbar."""
    return SpatialGrid(n, float(q_center), float(q_extent), float(hbar))
