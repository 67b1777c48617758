import numpy as np
import pytest

from phasefilter import _kernels_py, kernels


def _pair(n, seed=0):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    b = rng.normal(size=n) + 1j * rng.normal(size=n)
    return a, b


def _lag_reference(a, b):
    """Plain loops: out[j, s] = conj(a[j - s]) b[j + s], lag s in FFT order."""
    n = a.size
    out = np.zeros((n, n), complex)
    for j in range(n):
        for col in range(n):
            s = col if col < n // 2 else col - n
            if 0 <= j - s < n and 0 <= j + s < n:
                out[j, col] = np.conj(a[j - s]) * b[j + s]
    return out


def _shift_reference(a, b, offset):
    n = a.size
    out = np.zeros((n, n), complex)
    for j in range(n):
        for jp in range(n):
            k = j - jp + offset
            if 0 <= k < n:
                out[j, jp] = a[jp] * np.conj(b[k])
    return out


@pytest.mark.parametrize("backend", kernels.available_backends())
def test_lag_products_against_loops(backend):
    a, b = _pair(24)
    np.testing.assert_allclose(kernels.lag_products(a, b, backend=backend), _lag_reference(a, b), rtol=0, atol=1e-15)


@pytest.mark.parametrize("backend", kernels.available_backends())
@pytest.mark.parametrize("offset", [0, 7, 12, 30])
def test_shifted_products_against_loops(backend, offset):
    a, b = _pair(24, 1)
    np.testing.assert_allclose(
        kernels.shifted_products(a, b, offset, backend=backend), _shift_reference(a, b, offset), rtol=0, atol=1e-15
    )


def test_backends_agree():
    if "compiled" not in kernels.available_backends():
        pytest.skip("compiled kernels not built")
    a, b = _pair(512, 2)
    for fn, args in ((kernels.lag_products, ()), (kernels.shifted_products, (256,))):
        x = fn(a, b, *args, backend="compiled")
        y = fn(a, b, *args, backend="numpy")
        # the two may differ in the last bit of a complex product
        np.testing.assert_allclose(x, y, rtol=1e-15, atol=1e-15)


def test_backend_is_deterministic():
    a, b = _pair(256, 3)
    x = kernels.lag_products(a, b)
    assert np.array_equal(x, kernels.lag_products(a, b))


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.lag_products(np.ones(4), np.ones(4), backend="gpu")


def test_fallback_module_is_complete():
    assert kernels.BACKEND in kernels.available_backends()
    a, b = _pair(8)
    assert _kernels_py.lag_products(a, b).shape == (8, 8)


def test_benchmark_script_runs(capsys):
    import importlib.util
    import os

    path = os.path.join(os.path.dirname(__file__), os.pardir, "benchmarks", "bench_kernels.py")
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    mod.main(["--sizes", "64", "--repeat", "1"])
    out = capsys.readouterr().out
    assert "lag_products" in out and "shifted_products" in out
