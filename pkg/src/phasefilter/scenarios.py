"""Canned bench pipelines: double slit, which-path detector, off-axis lenses.

A scenario builds a source state, optionally passes it through two Gaussian
slits, runs an ordered element chain and then looks at the result at a list
of observation planes (free propagation by ``tau`` from the end of the
chain).  Every linear stage is also applied to the two slit lobes separately,
so each plane carries the lobe maps and the interference part of the map.

All lengths are in slit-width units and ``hbar = 1`` unless the grid says
otherwise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import states as st
from .filters import fringe_visibility, interference_energy
from .grid import SpatialGrid, make_grid
from .optics import Element, apply_element, free_propagate
from .states import PositionWavefunction
from .wigner import WignerMap, cross_wigner, marginal_p, marginal_q, wigner_from_position

__all__ = [
    "GridSpec",
    "OutputSpec",
    "PlaneResult",
    "ScenarioResult",
    "ScenarioSpec",
    "ScenarioWarning",
    "Source",
    "SOURCE_KINDS",
    "delayed_choice_spec",
    "detector_filter_spec",
    "double_slit_spec",
    "has_separated_lobes",
    "run_delayed_choice",
    "run_detector_filter",
    "run_double_slit",
    "run_scenario",
]

# n = 1280 over 80 keeps dq = 1/16 and leaves room for the tau = 5 planes
DEFAULT_N = 1280
DEFAULT_EXTENT = 80.0

SOURCE_KINDS = {
    "gaussian": ("q_i", "delta"),
    "cat": ("d", "q_f"),
    "lens_output": ("K", "p0", "d", "q_f"),
}
_SOURCE_DEFAULTS = {"gaussian": {"q_i": 8.0, "delta": 0.0}, "cat": {}, "lens_output": {}}


class ScenarioWarning(UserWarning):
    pass


@dataclass(frozen=True)
class GridSpec:
    n: int = DEFAULT_N
    extent: float = DEFAULT_EXTENT

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 4 or self.n % 2:
            raise ValueError(f"grid size must be an even integer >= 4, got {self.n!r}")
        if not (math.isfinite(self.extent) and self.extent > 0):
            raise ValueError(f"grid extent must be positive and finite, got {self.extent!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "extent", float(self.extent))

    def build(self) -> SpatialGrid:
        return make_grid(self.n, 0.0, self.extent)


@dataclass(frozen=True)
class Source:
    """Where the beam comes from.

    ``gaussian``: incident beam of width ``q_i`` centred at ``delta`` (``q_i``
    may be ``inf``, meaning a plane wave over the slits);
    ``cat``: the two-slit state itself;
    ``lens_output``: the state behind two tilted lenses sitting on the slits.
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in SOURCE_KINDS:
            raise ValueError(f"unknown source kind {self.kind!r}")
        allowed = SOURCE_KINDS[self.kind]
        for key in self.params:
            if key not in allowed:
                raise ValueError(f"source {self.kind} does not take parameter {key!r}")
        merged = dict(_SOURCE_DEFAULTS[self.kind])
        merged.update(self.params)
        for key in allowed:
            if key not in merged:
                raise ValueError(f"source {self.kind} needs parameter {key!r}")
        for key, val in merged.items():
            val = float(val)
            if math.isnan(val):
                raise ValueError(f"{key} must be a number")
            if key in ("q_i", "K", "q_f") and not val > 0:
                raise ValueError(f"{key} must be positive, got {val!r}")
            if key in ("delta", "p0", "d") and not math.isfinite(val):
                raise ValueError(f"{key} must be finite, got {val!r}")
            if key == "d" and val < 0:
                raise ValueError(f"d must be non-negative, got {val!r}")
            if key == "q_f" and math.isinf(val):
                raise ValueError("q_f must be finite")
            merged[key] = val
        object.__setattr__(self, "params", merged)

    def __hash__(self):
        return hash((self.kind, tuple(sorted(self.params.items()))))


@dataclass(frozen=True)
class OutputSpec:
    directory: str | None = None
    formats: tuple = ("tsv",)


@dataclass(frozen=True)
class ScenarioSpec:
    """A full bench: source, optional slits ``(d, q_f)``, element chain, planes."""

    source: Source
    slits: tuple | None = None
    elements: tuple = ()
    planes: tuple = (0.0,)
    grid: GridSpec = GridSpec()
    output: OutputSpec = OutputSpec()

    def __post_init__(self):
        planes = tuple(float(t) for t in self.planes)
        if not planes:
            raise ValueError("at least one observation plane is needed")
        if not all(math.isfinite(t) for t in planes):
            raise ValueError("plane positions must be finite")
        if any(b <= a for a, b in zip(planes, planes[1:])):
            raise ValueError("planes must be sorted ascending without repeats")
        object.__setattr__(self, "planes", planes)
        object.__setattr__(self, "elements", tuple(self.elements))
        if self.slits is not None:
            d, q_f = (float(v) for v in self.slits)
            if not (math.isfinite(d) and d >= 0):
                raise ValueError(f"slit half-separation must be finite and >= 0, got {d!r}")
            if not (math.isfinite(q_f) and q_f > 0):
                raise ValueError(f"slit width must be positive, got {q_f!r}")
            object.__setattr__(self, "slits", (d, q_f))

    @property
    def reference_slits(self) -> tuple | None:
        """``(d, q_f)`` of the unfiltered two-slit state used to scale interference energy."""
        if self.slits is not None:
            return self.slits
        if self.source.kind in ("cat", "lens_output"):
            return self.source.params["d"], self.source.params["q_f"]
        return None


@dataclass(frozen=True, eq=False)
class PlaneResult:
    """Everything observed at one plane; maps and marginals refer to the
    renormalized state."""

    tau: float
    state: PositionWavefunction
    wigner: WignerMap
    lobe_maps: tuple
    interference: WignerMap | None
    marginal_q: np.ndarray
    marginal_p: np.ndarray
    visibility_q: float
    visibility_p: float
    interference_energy: float | None
    interference_energy_abs: float | None
    passed_fraction: float

    def metrics(self) -> dict:
        return {
            "tau": self.tau,
            "visibility_q": float(self.visibility_q),
            "visibility_q_degenerate": bool(getattr(self.visibility_q, "degenerate", False)),
            "visibility_p": float(self.visibility_p),
            "visibility_p_degenerate": bool(getattr(self.visibility_p, "degenerate", False)),
            "interference_energy": self.interference_energy,
            "interference_energy_abs": self.interference_energy_abs,
            "passed_fraction": self.passed_fraction,
        }


@dataclass(frozen=True, eq=False)
class ScenarioResult:
    spec: ScenarioSpec
    planes: tuple
    chain_fractions: tuple

    def plane(self, tau: float) -> PlaneResult:
        for pr in self.planes:
            if pr.tau == tau:
                return pr
        raise KeyError(f"no plane at tau={tau!r}")

    @property
    def passed_fraction(self) -> float:
        return self.chain_fractions[-1] if self.chain_fractions else 1.0


# --- pipeline -----------------------------------------------------------------


def _slit_transmittance(grid, d, q_f):
    plus, minus = st.double_slit_lobes(grid, d, q_f)
    return plus, minus


def _source_parts(spec: ScenarioSpec, grid) -> list:
    """Lobes (or the single beam) at the slit plane, before the element chain."""
    src = spec.source
    p = src.params
    if src.kind == "cat":
        return list(st.double_slit_lobes(grid, p["d"], p["q_f"]))
    if src.kind == "lens_output":
        plus, minus = st.lens_output_lobes(grid, p["d"], p["q_f"], p["K"], p["p0"])
        scale = 1.0 / math.sqrt((plus + minus).norm2)
        return [plus.scaled(scale), minus.scaled(scale)]
    # gaussian incident beam
    q_i, delta = p["q_i"], p["delta"]
    if spec.slits is None:
        if math.isinf(q_i):
            raise ValueError("a plane-wave source needs slits")
        return [st.gaussian_state(grid, delta, q_i)]
    d, q_f = spec.slits
    if q_i < 5.0 * q_f:
        warnings.warn(
            f"incident width q_i={q_i:g} is not much larger than the slit width {q_f:g}",
            ScenarioWarning,
            stacklevel=3,
        )
    plus, minus = _slit_transmittance(grid, d, q_f)
    if math.isinf(q_i):
        return [plus, minus]
    beam = st.gaussian_state(grid, delta, q_i, allow_truncation=True)
    return [st.PositionWavefunction(grid, beam.amp * plus.amp), st.PositionWavefunction(grid, beam.amp * minus.amp)]


def _total(parts):
    out = parts[0]
    for part in parts[1:]:
        out = out + part
    return out


def _reference_energy(grid, d, q_f, tau) -> float:
    plus, minus = st.double_slit_lobes(grid, d, q_f)
    scale = 1.0 / math.sqrt((plus + minus).norm2)
    plus = free_propagate(plus.scaled(scale), tau)
    minus = free_propagate(minus.scaled(scale), tau)
    w_int = WignerMap(grid, 2.0 * cross_wigner(plus, minus).w.real)
    return interference_energy(w_int)


def _observe(spec, grid, parts, tau, passed) -> PlaneResult:
    parts = [free_propagate(part, tau) for part in parts]
    total = _total(parts)
    nrm2 = total.norm2
    if nrm2 <= 0:
        raise ValueError("the element chain blocked the whole beam")
    scale = 1.0 / math.sqrt(nrm2)
    parts = [part.scaled(scale) for part in parts]
    state = total.scaled(scale)
    W = wigner_from_position(state)
    mq, mp = marginal_q(W), marginal_p(W)
    if len(parts) > 1:
        lobe_maps = tuple(wigner_from_position(part) for part in parts)
        auto = sum(m.w for m in lobe_maps)
        w_int = WignerMap(grid, W.w - auto)
        env_q = sum(marginal_q(m) for m in lobe_maps)
        env_p = sum(marginal_p(m) for m in lobe_maps)
        vis_q = fringe_visibility(mq, envelope=env_q)
        vis_p = fringe_visibility(mp, envelope=env_p)
        e_abs = interference_energy(w_int)
    else:
        lobe_maps = (W,)
        w_int = None
        vis_q = fringe_visibility(mq)
        vis_p = fringe_visibility(mp)
        e_abs = None
    ref = spec.reference_slits
    e_rel = None
    if e_abs is not None and ref is not None:
        e_ref = _reference_energy(grid, ref[0], ref[1], tau)
        e_rel = e_abs / e_ref if e_ref > 0 else None
    return PlaneResult(
        tau=tau,
        state=state,
        wigner=W,
        lobe_maps=lobe_maps,
        interference=w_int,
        marginal_q=mq,
        marginal_p=mp,
        visibility_q=vis_q,
        visibility_p=vis_p,
        interference_energy=e_rel,
        interference_energy_abs=e_abs,
        passed_fraction=passed,
    )


def run_scenario(spec: ScenarioSpec) -> ScenarioResult:
    """Run the bench and observe every plane (each propagated directly from the
    end of the element chain)."""
    grid = spec.grid.build()
    parts = _source_parts(spec, grid)
    fractions = []
    passed = 1.0
    if spec.slits is not None and spec.source.kind == "gaussian" and not math.isinf(spec.source.params["q_i"]):
        passed = _total(parts).norm2
        fractions.append(passed)
    for element in spec.elements:
        before = _total(parts).norm2
        parts = [apply_element(part, element)[0] for part in parts]
        after = _total(parts).norm2
        passed *= after / before if before > 0 else 0.0
        fractions.append(passed)
    planes = tuple(_observe(spec, grid, parts, tau, passed) for tau in spec.planes)
    return ScenarioResult(spec, planes, tuple(fractions))


# --- canned benches -----------------------------------------------------------


def double_slit_spec(q_i=8.0, d=4.0, q_f=1.0, delta=0.0, planes=(0.0, 5.0), grid: GridSpec | None = None) -> ScenarioSpec:
    return ScenarioSpec(
        source=Source("gaussian", {"q_i": q_i, "delta": delta}),
        slits=(d, q_f),
        planes=tuple(planes),
        grid=grid or GridSpec(),
    )


def detector_filter_spec(q_d, d=4.0, q_f=1.0, planes=(0.0, 5.0), grid: GridSpec | None = None) -> ScenarioSpec:
    return ScenarioSpec(
        source=Source("cat", {"d": d, "q_f": q_f}),
        elements=(Element("detector_filter", {"q_d": float(q_d), "center": float(d)}),),
        planes=tuple(planes),
        grid=grid or GridSpec(),
    )


def delayed_choice_spec(K=2.0, p0=3.0, d=4.0, q_f=1.0, planes=(0.0, 1.0, 3.0), grid: GridSpec | None = None) -> ScenarioSpec:
    return ScenarioSpec(
        source=Source("lens_output", {"K": K, "p0": p0, "d": d, "q_f": q_f}),
        planes=tuple(planes),
        grid=grid or GridSpec(),
    )


def run_double_slit(q_i=8.0, d=4.0, q_f=1.0, delta=0.0, planes=(0.0, 5.0), grid: GridSpec | None = None) -> ScenarioResult:
    """Gaussian beam through two slits; ``q_i = inf`` feeds the slits a plane wave."""
    return run_scenario(double_slit_spec(q_i, d, q_f, delta, planes, grid))


def run_detector_filter(q_d, d=4.0, q_f=1.0, planes=(0.0, 5.0), grid: GridSpec | None = None) -> ScenarioResult:
    """Two-slit state filtered by a Gaussian which-path detector sitting on the ``+d`` slit."""
    if not q_d > 0:
        raise ValueError("q_d must be positive")
    return run_scenario(detector_filter_spec(q_d, d, q_f, planes, grid))


def run_delayed_choice(K=2.0, p0=3.0, d=4.0, q_f=1.0, planes=(0.0, 1.0, 3.0), grid: GridSpec | None = None) -> ScenarioResult:
    """Off-axis lenses on the slits, observed at several planes."""
    return run_scenario(delayed_choice_spec(K, p0, d, q_f, planes, grid))


def has_separated_lobes(intensity, level: float = 0.1) -> bool:
    """True when the region above ``level`` times the peak splits into at least
    two pieces, i.e. two maxima with a gap below ``level`` between them."""
    inten = np.asarray(intensity, dtype=float)
    above = inten > level * inten.max()
    rises = np.count_nonzero(above[1:] & ~above[:-1]) + int(above[0])
    return rises >= 2
