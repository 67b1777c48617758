import math

import numpy as np
import pytest
from scipy import integrate, special

from phasefilter import states as st
from phasefilter.grid import GridError, make_grid


def test_gaussian_is_normalized(desk):
    for width in (0.5, 1.0, 3.0):
        assert st.gaussian_state(desk, 0.3, width).norm2 == pytest.approx(1.0, abs=1e-12)


def test_gaussian_phase_terms(desk):
    psi = st.gaussian_state(desk, 1.0, 1.0, p0=2.0, chirp=0.1)
    plain = st.gaussian_state(desk, 1.0, 1.0)
    np.testing.assert_allclose(np.abs(psi.amp), np.abs(plain.amp), atol=1e-15)
    np.testing.assert_allclose(psi.amp, plain.amp * np.exp(1j * (2.0 * desk.q + 0.1 * desk.q**2)), atol=1e-15)


def test_clipped_gaussian_is_rejected():
    g = make_grid(256, 0.0, 16.0)
    with pytest.raises(st.ClippingError, match="grid"):
        st.gaussian_state(g, 0.0, 4.0)
    psi = st.gaussian_state(g, 0.0, 4.0, allow_truncation=True)
    assert psi.norm2 < 1.0


def test_gaussian_rejects_bad_width(small):
    with pytest.raises(ValueError):
        st.gaussian_state(small, 0.0, 0.0)


def test_double_slit_normalization(desk):
    """The continuum normalization constant gives unit norm on the lattice too."""
    for d, q_f in ((4.0, 1.0), (1.0, 1.0), (0.5, 2.0)):
        assert st.double_slit_state(desk, d, q_f).norm2 == pytest.approx(1.0, abs=1e-12)


def test_double_slit_lobes_mirror(desk):
    plus, minus = st.double_slit_lobes(desk, 4.0, 1.0)
    # q -> -q maps index j to n - j on this lattice
    np.testing.assert_allclose(plus.amp[1:], minus.amp[1:][::-1], atol=1e-15)
    np.testing.assert_allclose((plus + minus).amp, st.double_slit_state(desk, 4.0, 1.0).amp)


def test_hermite_matches_special_functions(desk):
    """Recurrence values against scipy's physicists' Hermite polynomials."""
    x = desk.q
    for n in range(6):
        psi = st.hermite_gauss_state(desk, n)
        ref = special.eval_hermite(n, x) * np.exp(-(x**2) / 2) / math.sqrt(2**n * math.factorial(n) * math.sqrt(math.pi))
        np.testing.assert_allclose(psi.amp.real, ref, atol=1e-12)


def test_hermite_orthonormal(desk):
    funcs = [st.hermite_gauss_state(desk, n) for n in range(6)]
    gram = np.array([[a.inner(b) for b in funcs] for a in funcs])
    np.testing.assert_allclose(gram, np.eye(6), atol=1e-12)


def test_hermite_limits(small):
    with pytest.raises(ValueError, match="maximum"):
        st.hermite_gauss_state(small, st.MAX_HERMITE_ORDER + 1)
    with pytest.raises(ValueError, match="band limit"):
        st.hermite_gauss_state(small, 20, width=0.1)
    with pytest.raises(ValueError):
        st.hermite_gauss_state(small, -1)


def test_build_superposition(small):
    a = st.gaussian_state(small, -2.0, 1.0)
    b = st.gaussian_state(small, 2.0, 1.0)
    s = st.build_superposition([1.0, 1j], [a, b])
    np.testing.assert_allclose(s.amp, a.amp + 1j * b.amp)
    with pytest.raises(ValueError):
        st.build_superposition([1.0], [a, b])


def test_lens_output_without_lens_or_tilt_is_the_slit_state(desk):
    np.testing.assert_allclose(
        st.lens_output_state(desk, 4.0, 1.0, math.inf, 0.0).amp,
        st.double_slit_state(desk, 4.0, 1.0).amp,
        atol=1e-14,
    )


def test_lens_output_moduli(desk):
    plus, minus = st.lens_output_lobes(desk, 4.0, 1.0, 2.0, 3.0)
    np.testing.assert_allclose(np.abs(plus.amp), np.exp(-((desk.q - 4.0) ** 2) / 2), atol=1e-15)
    np.testing.assert_allclose(np.abs(minus.amp), np.exp(-((desk.q + 4.0) ** 2) / 2), atol=1e-15)
    assert st.lens_output_state(desk, 4.0, 1.0, 2.0, 3.0).norm2 == pytest.approx(1.0)


def test_wavefunction_containers(small):
    psi = st.gaussian_state(small)
    with pytest.raises(ValueError):
        psi.amp[0] = 1.0
    with pytest.raises(GridError):
        st.PositionWavefunction(small, np.zeros(10))
    with pytest.raises(ValueError):
        st.PositionWavefunction(small, np.full(small.n, np.nan))
    with pytest.raises(ValueError):
        st.PositionWavefunction(small, np.zeros(small.n)).normalized()
    assert psi.scaled(2.0).norm2 == pytest.approx(4.0)


def test_slit_params_validation():
    with pytest.raises(ValueError):
        st.SlitParams(d=4.0, q_f=-1.0)
    assert st.SlitParams(4.0, 1.0).q_i == 8.0


def test_analytic_maps_have_unit_mass():
    """Closed forms integrate to one (quadrature)."""
    gauss = integrate.dblquad(lambda p, q: st.analytic_gaussian_wdf(q, p, 2.0), -30, 30, -10, 10)[0]
    assert gauss == pytest.approx(1.0, abs=1e-8)
    total = integrate.dblquad(lambda p, q: st.analytic_slit_wdf(q, p, 2.0, 1.0)[3], -12, 12, -10, 10, epsabs=1e-11)[0]
    assert total == pytest.approx(1.0, abs=1e-7)


def test_slit_interference_term_mass():
    """Integrated interference term equals the lobe cross term of the norm,
    e^{-d^2/q_f^2} / (1 + e^{-d^2/q_f^2}), i.e. essentially zero for d = 4 q_f."""
    d, q_f = 4.0, 1.0
    q = np.linspace(-20, 20, 4001)
    p = np.linspace(-10, 10, 4001)
    Q, P = np.meshgrid(q, p, indexing="ij")
    w_int = st.analytic_slit_wdf(Q, P, d, q_f)[2]
    mass = integrate.trapezoid(integrate.trapezoid(w_int, p, axis=1), q)
    e = math.exp(-(d**2) / q_f**2)
    assert mass == pytest.approx(e / (1 + e), abs=1e-12)
    assert abs(mass) < 1e-6


def test_filtered_closed_form_reduces_to_slits_for_wide_beam():
    params = st.SlitParams(d=2.0, q_f=1.0, q_i=1e6)
    q, p = np.meshgrid(np.linspace(-5, 5, 41), np.linspace(-3, 3, 31), indexing="ij")
    a = st.analytic_filtered_wdf(q, p, params)
    b = st.analytic_slit_wdf(q, p, 2.0, 1.0)[3]
    np.testing.assert_allclose(a / a.max(), b / b.max(), atol=1e-9)
