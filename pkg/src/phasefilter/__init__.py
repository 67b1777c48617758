"""Phase-space (Wigner function) simulation of filters, double slits and off-axis lenses in 1-D."""

from .filters import (
    FilteredOutput,
    FilterSpec,
    apply_filter,
    detect,
    detect_wavefunction,
    filter_phase_space,
    fringe_visibility,
    interference_energy,
    split_interference,
)
from .grid import Constants, GridError, SpatialGrid, make_grid
from .kernels import BACKEND
from .optics import Element, free_propagate, shear_wigner, thin_lens, tilt
from .scenario_file import ScenarioParseError, parse_scenario, print_scenario
from .scenarios import (
    ScenarioResult,
    ScenarioSpec,
    run_delayed_choice,
    run_detector_filter,
    run_double_slit,
    run_scenario,
)
from .states import (
    ClippingError,
    MomentumWavefunction,
    PositionWavefunction,
    double_slit_state,
    gaussian_state,
    hermite_gauss_state,
    lens_output_state,
)
from .wigner import (
    AliasingError,
    WignerMap,
    cross_wigner,
    fourier_transform,
    inverse_fourier_transform,
    marginal_p,
    marginal_q,
    overlap,
    reconstruct_position,
    wigner_from_momentum,
    wigner_from_position,
)

__version__ = "0.1.0"
