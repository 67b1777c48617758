import math

import numpy as np
import pytest

from phasefilter.grid import Constants, GridError, SpatialGrid, make_grid


def test_lattice_spacings():
    g = make_grid(1024, 0.0, 64.0)
    assert g.dq == 1 / 16
    assert g.fourier.dp == pytest.approx(2 * math.pi / 64)
    assert g.wigner.dp == pytest.approx(math.pi / 64)
    assert g.band_limit == pytest.approx(8 * math.pi)
    # the wigner lattice spans exactly twice the band limit
    assert g.wigner.extent == pytest.approx(2 * g.band_limit)


def test_positions_are_centred():
    g = make_grid(8, 1.0, 8.0)
    np.testing.assert_allclose(g.q, [-3, -2, -1, 0, 1, 2, 3, 4])
    assert g.q[g.n // 2] == g.q_center
    np.testing.assert_allclose(g.wigner.samples[g.n // 2], 0.0)


@pytest.mark.parametrize("n", [3, 2, 0, -4, 7, 2.5])
def test_rejects_bad_sample_counts(n):
    with pytest.raises(GridError):
        make_grid(n)


@pytest.mark.parametrize("extent", [0.0, -1.0, math.inf, math.nan])
def test_rejects_bad_extent(extent):
    with pytest.raises(GridError):
        make_grid(64, 0.0, extent)


def test_rejects_bad_hbar():
    with pytest.raises(GridError):
        Constants(0.0)
    with pytest.raises(GridError):
        make_grid(64, hbar=-1.0)
    assert Constants(2.0).h == pytest.approx(4 * math.pi)


def test_index_of_round_trips():
    g = make_grid(64, 2.0, 16.0)
    assert g.index_of(g.q[17]) == 17
    np.testing.assert_array_equal(g.index_of(g.q[[3, 40]]), [3, 40])


def test_center_offset_needs_whole_samples():
    assert make_grid(64, 2.0, 16.0).center_offset == 8
    with pytest.raises(GridError):
        _ = make_grid(64, 0.1, 16.0).center_offset


def test_check_same():
    a = make_grid(64)
    a.check_same(SpatialGrid(64, 0.0, 64.0, 1.0))
    with pytest.raises(GridError):
        a.check_same(make_grid(128))
