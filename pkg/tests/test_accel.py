import os
import subprocess
import sys

import numpy as np
import pytest

from charvar import _accel
from charvar.orbit_engine import sphere_grid

pytestmark = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")


def test_twist_walk_backends_agree():
    rng = np.random.default_rng(0)
    choices = rng.integers(0, 4, size=50_000, dtype=np.int8)
    a, ia = _accel.twist_walk((0.5, 0.5, 0.5), choices, backend="numba")
    b, ib = _accel.twist_walk((0.5, 0.5, 0.5), choices, backend="numpy")
    assert ia == ib == -1
    assert np.array_equal(a, b)


def test_twist_walk_abort_index_agrees():
    choices = np.random.default_rng(2).integers(0, 4, size=500, dtype=np.int8)
    a = _accel.twist_walk((0.3, 0.7, 1.1), choices, drift_tol=1e-18, backend="numba")[1]
    b = _accel.twist_walk((0.3, 0.7, 1.1), choices, drift_tol=1e-18, backend="numpy")[1]
    assert a == b >= 1


def test_nearest_distances_backends_agree():
    rng = np.random.default_rng(1)
    grid = sphere_grid(0.3, 700)
    pts = rng.normal(size=(3000, 3))
    a = _accel.nearest_distances(grid, pts, backend="numba")
    b = _accel.nearest_distances(grid, pts, backend="numpy")
    brute = np.sqrt(((grid[:, None, :] - pts[None, :, :]) ** 2).sum(-1)).min(1)
    assert np.allclose(a, brute, atol=1e-12)
    assert np.allclose(b, brute, atol=1e-6)


def test_nearest_distances_empty():
    with pytest.raises(ValueError):
        _accel.nearest_distances(np.zeros((2, 3)), np.zeros((0, 3)))


def test_unknown_backend():
    with pytest.raises(ValueError):
        _accel.twist_walk((0.5, 0.5, 0.5), [0], backend="cuda")


def test_env_flag_selects_backend():
    code = "from charvar import _accel; print(_accel.BACKEND)"
    env = dict(os.environ, CHARVAR_BACKEND="numpy")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "numpy"
    env["CHARVAR_BACKEND"] = "fortran"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.returncode != 0
