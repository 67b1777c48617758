import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from phasefilter import filters as flt
from phasefilter import optics
from phasefilter import states as st
from phasefilter import wigner as wg
from phasefilter.grid import make_grid

from conftest import sup


@pytest.fixture(scope="module")
def cat(desk):
    return st.double_slit_state(desk, 4.0, 1.0)


def test_zero_propagation_is_identity(cat):
    assert optics.free_propagate(cat, 0.0) is cat
    W = wg.wigner_from_position(cat)
    assert optics.shear_wigner(W, 0.0) is W


def test_momentum_density_unchanged(cat):
    before = np.abs(wg.fourier_transform(cat).amp) ** 2
    for tau in (1.0, 5.0, -3.0):
        after = np.abs(wg.fourier_transform(optics.free_propagate(cat, tau)).amp) ** 2
        assert sup(before, after) <= 1e-10


def test_propagated_gaussian_closed_form(desk):
    """Free spreading: |psi|^2 stays Gaussian with width w sqrt(1 + (tau/w^2)^2)."""
    w, tau = 1.0, 3.0
    out = optics.free_propagate(st.gaussian_state(desk, 0.0, w), tau)
    wt = w * math.sqrt(1 + (tau / w**2) ** 2)
    ref = np.exp(-(desk.q**2) / wt**2) / (math.sqrt(math.pi) * wt)
    assert sup(np.abs(out.amp) ** 2, ref) <= 1e-12


def test_shear_matches_wavefunction_path(cat):
    W = optics.shear_wigner(wg.wigner_from_position(cat), 5.0)
    direct = wg.wigner_from_position(optics.free_propagate(cat, 5.0))
    assert sup(W.w, direct.w) <= 1e-6
    assert wg.total_mass(W) == pytest.approx(1.0, abs=1e-8)


def test_spatial_fringes_after_propagation(cat, desk):
    before = np.abs(cat.amp) ** 2
    # two disjoint lobes with nothing in between
    assert before[desk.n // 2] < 1e-6 * before.max()
    after = np.abs(optics.free_propagate(cat, 5.0).amp) ** 2
    assert flt.fringe_visibility(after) >= 0.5


@settings(max_examples=15, deadline=None)
@given(t1=hs.floats(-3, 3), t2=hs.floats(-3, 3))
def test_propagation_composes(t1, t2):
    # wide enough that |t1| + |t2| <= 6 stays clear of the edges
    g = make_grid(1024, 0.0, 128.0)
    psi = st.double_slit_state(g, 3.0, 1.0)
    a = optics.free_propagate(optics.free_propagate(psi, t1), t2)
    b = optics.free_propagate(psi, t1 + t2)
    assert sup(a.amp, b.amp) <= 1e-8
    assert a.norm2 == pytest.approx(psi.norm2, abs=1e-10)


@settings(max_examples=15, deadline=None)
@given(c=hs.floats(-2, 2), p0=hs.floats(-1.5, 1.5), tau=hs.floats(-4, 4))
def test_first_moment_transport(c, p0, tau):
    g = make_grid(512, 0.0, 64.0)
    psi = st.gaussian_state(g, c, 1.3, p0=p0)
    m0 = wg.moments(wg.wigner_from_position(psi))
    m1 = wg.moments(wg.wigner_from_position(optics.free_propagate(psi, tau)))
    assert m1["mean_q"] == pytest.approx(m0["mean_q"] + tau * m0["mean_p"], abs=1e-8)
    assert m1["mean_p"] == pytest.approx(m0["mean_p"], abs=1e-10)


def test_clipping_is_reported(desk, cat):
    with pytest.raises(st.ClippingError, match="grid-extent"):
        optics.free_propagate(cat, 40.0)
    with pytest.raises(st.ClippingError):
        optics.shear_wigner(wg.wigner_from_position(cat), 40.0)
    with pytest.raises(ValueError):
        optics.free_propagate(cat, math.inf)


def test_lens_is_a_pure_phase(cat):
    out = optics.thin_lens(cat, 2.0)
    assert sup(np.abs(out.amp), np.abs(cat.amp)) <= 1e-15
    assert out.norm2 == pytest.approx(cat.norm2, abs=1e-12)
    assert optics.thin_lens(cat, math.inf) is cat
    with pytest.raises(ValueError):
        optics.thin_lens(cat, 0.0)


def test_lens_shears_along_momentum(cat):
    lensed = wg.wigner_from_position(optics.thin_lens(cat, 2.0))
    assert sup(lensed.w, optics.lens_shear_wigner(wg.wigner_from_position(cat), 2.0).w) <= 1e-6


def test_tilt_displaces_momentum(desk):
    psi = st.gaussian_state(desk, 0.0, 1.0)
    out = optics.tilt(psi, 2.5)
    assert optics.tilt(psi, 0.0) is psi
    m = wg.moments(wg.wigner_from_position(out))
    assert m["mean_p"] == pytest.approx(2.5, abs=1e-12)
    W = wg.wigner_from_position(psi)
    assert sup(optics.tilt_wigner(W, 2.5).w, wg.wigner_from_position(out).w) <= 1e-12
    assert sup(wg.marginal_p(optics.tilt_wigner(W, 2.5)), wg.marginal_p(wg.shift_p(W, 2.5))) == 0.0


def test_tilt_beyond_band_limit_warns(desk):
    psi = st.gaussian_state(desk, 0.0, 1.0)
    with pytest.warns(optics.BandLimitWarning):
        optics.tilt(psi, desk.band_limit)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        optics.tilt(psi, 3.0)


def test_tilt_and_lens_commute(cat):
    a = optics.tilt(optics.thin_lens(cat, 2.0), 3.0)
    b = optics.thin_lens(optics.tilt(cat, 3.0), 2.0)
    assert sup(a.amp, b.amp) <= 1e-12


def test_unitarity(cat):
    for out in (optics.free_propagate(cat, 2.0), optics.thin_lens(cat, 2.0), optics.tilt(cat, 3.0)):
        assert out.norm2 == pytest.approx(cat.norm2, abs=1e-10)


def test_tilted_lobes_meet():
    """Lobes at +-d tilted by -+p0 cross after tau = d / p0."""
    g = make_grid(1024, 0.0, 64.0)
    d, p0 = 4.0, 3.0
    plus, minus = st.lens_output_lobes(g, d, 1.0, math.inf, p0)
    tau = d / p0
    for lobe, start in ((plus, d), (minus, -d)):
        moved = optics.free_propagate(lobe, tau)
        mean = wg.moments(wg.wigner_from_position(moved.normalized()))["mean_q"]
        assert mean == pytest.approx(0.0, abs=1e-9)


def test_elements(desk, cat):
    with pytest.raises(ValueError):
        optics.Element("mirror", {})
    with pytest.raises(ValueError):
        optics.Element("lens", {"K": -1.0})
    with pytest.raises(ValueError):
        optics.Element("lens", {"K": 1.0, "tau": 2.0})
    with pytest.raises(ValueError):
        optics.Element("free_space", {})
    out, frac = optics.apply_element(cat, optics.Element("detector_filter", {"q_d": 2.4, "center": 4.0}))
    assert 0.4 < frac < 0.6
    out, frac = optics.apply_element(cat, optics.Element("free_space", {"tau": 1.0}))
    assert frac == 1.0 and sup(out.amp, optics.free_propagate(cat, 1.0).amp) == 0.0
    out, frac = optics.apply_element(cat, optics.Element("filter", {"representation": "momentum", "center": 0.0, "width": 1.0}))
    assert 0.0 < frac < 1.0
    assert isinstance(out, st.PositionWavefunction)
