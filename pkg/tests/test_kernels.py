import numpy as np
import pytest

from ecoplan import _kernels_py, kernels
from ecoplan import game as gm

compiled = pytest.mark.skipif("compiled" not in kernels.BACKENDS, reason="extension not built")


@compiled
@pytest.mark.parametrize("u,v", [(2.0, 2.0), (2.0, 3.0), (1.5, 5.0)])
def test_backends_bit_identical(u, v):
    ext = kernels.get("compiled")
    rng = np.random.default_rng(1)
    p0, q0 = rng.uniform(0, 1, 300), rng.uniform(0, 1, 300)
    a = ext.rk4_final(p0, q0, u, v, 0.01, 5000, 1 / v, 1 / u, 1e-4)
    b = _kernels_py.rk4_final(p0, q0, u, v, 0.01, 5000, 1 / v, 1 / u, 1e-4)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x, y)
    pa = ext.rk4_path(0.3, 0.6, u, v, 0.01, 3000)
    pb = _kernels_py.rk4_path(0.3, 0.6, u, v, 0.01, 3000)
    np.testing.assert_array_equal(pa[0], pb[0])
    np.testing.assert_array_equal(pa[1], pb[1])
    assert pa[2] == pb[2] == -1


@pytest.mark.parametrize("backend", sorted(kernels.BACKENDS))
def test_nonfinite_reported(backend):
    k = kernels.get(backend)
    p, q, status = k.rk4_final(np.array([0.3]), np.array([0.4]), np.inf, 2.0, 0.01, 10, 0.5, 0.5, 1e-4)
    assert status[0] == 2
    _, _, bad = k.rk4_path(0.3, 0.4, np.nan, 2.0, 0.01, 10)
    assert bad == 1


@compiled
def test_basin_labels_identical_across_backends():
    g = gm.GameParams(2.0, 3.5)
    a = gm.basin_grid(g, 24, backend="compiled")
    b = gm.basin_grid(g, 24, backend="python")
    np.testing.assert_array_equal(a.labels, b.labels)


def test_active_backend_is_named():
    assert kernels.BACKEND in kernels.BACKENDS
