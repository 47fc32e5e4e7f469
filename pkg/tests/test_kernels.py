import numpy as np
import pytest

from radcoulomb import _kernels_py, kernels
from radcoulomb.quadrature import cumulative_matrix, panel_rule

compiled = pytest.importorskip("radcoulomb._kernels")


@pytest.fixture
def rng():
    return np.random.default_rng(3)


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


def test_sine_sum(rng):
    rhos = np.sort(rng.uniform(0.1, 40.0, 37))
    r = np.sort(rng.uniform(0.0, 8.0, 301))
    wg = rng.normal(size=301)
    a = compiled.sine_sum(rhos, r, wg)
    b = _kernels_py.sine_sum(rhos, r, wg)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12 * np.abs(wg).sum())


@pytest.mark.parametrize("s", [0.55, 0.75, 0.95])
def test_gagliardo_sum(rng, s):
    n = 5000
    r = rng.uniform(1.0, 5.0, n)
    h = r * rng.uniform(1e-5, 1.0, n)
    args = (r, h, rng.uniform(size=n), rng.normal(size=n), rng.normal(size=n), s)
    assert compiled.gagliardo_sum(*args) == pytest.approx(_kernels_py.gagliardo_sum(*args), rel=1e-11)


def test_coulomb_prefix():
    edges = np.linspace(0.0, 6.0, 65)
    x, w = panel_rule(edges, 16)
    f = np.exp(-x * x)
    args = (np.ascontiguousarray(x), np.ascontiguousarray(w), f,
            np.ascontiguousarray(cumulative_matrix(16)), 0.5 * np.diff(edges))
    assert compiled.coulomb_prefix(*args) == pytest.approx(_kernels_py.coulomb_prefix(*args), rel=1e-13)


def test_readonly_inputs(rng):
    r = np.sort(rng.uniform(0.0, 3.0, 50))
    wg = rng.normal(size=50)
    rhos = np.linspace(0.5, 5.0, 10)
    for arr in (r, wg, rhos):
        arr.setflags(write=False)
    np.testing.assert_allclose(compiled.sine_sum(rhos, r, wg), _kernels_py.sine_sum(rhos, r, wg), rtol=1e-12, atol=1e-12)
