"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The backend is chosen once at import from ``CHARVAR_BACKEND`` ("numba" or
"numpy"; default numba when importable).  Every public kernel also takes an
explicit ``backend=`` so tests and the benchmark can run both side by side.
``CHARVAR_THREADS`` caps numba's thread pool.
"""

from __future__ import annotations

import os

import numpy as np

if "NUMBA_THREADING_LAYER" not in os.environ:
    # system TBB predates what numba accepts
    os.environ["NUMBA_THREADING_LAYER"] = "workqueue"

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

_requested = os.environ.get("CHARVAR_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ValueError(f"CHARVAR_BACKEND must be 'numba' or 'numpy', not {_requested!r}")
BACKEND = "numba" if (_requested == "numba" and HAVE_NUMBA) else "numpy"

if HAVE_NUMBA and os.environ.get("CHARVAR_THREADS"):
    numba.set_num_threads(max(1, min(int(os.environ["CHARVAR_THREADS"]), numba.config.NUMBA_NUM_THREADS)))


def _resolve(backend):
    backend = BACKEND if backend is None else backend
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


# -- twist walk -----------------------------------------------------------------
# generator codes: 0 tau_X, 1 tau_X^-1, 2 tau_Y, 3 tau_Y^-1


def _walk_py(x, y, z, choices, out, k0, drift_tol):
    out[0, 0], out[0, 1], out[0, 2] = x, y, z
    for i in range(choices.shape[0]):
        g = choices[i]
        if g == 0:
            x, y, z = x, z, x * z - y
        elif g == 1:
            x, y, z = x, x * y - z, y
        elif g == 2:
            x, y, z = z, y, y * z - x
        else:
            x, y, z = x * y - z, y, x
        out[i + 1, 0] = x
        out[i + 1, 1] = y
        out[i + 1, 2] = z
        k = x * x + y * y + z * z - x * y * z - 2.0
        if abs(k - k0) > drift_tol:
            return i + 1
    return -1


if HAVE_NUMBA:
    _walk_nb = numba.njit(cache=True, nogil=True)(_walk_py)

    @numba.njit(cache=True, parallel=True)
    def _nearest_nb(grid, pts):
        n = grid.shape[0]
        out = np.empty(n)
        for i in numba.prange(n):
            gx, gy, gz = grid[i, 0], grid[i, 1], grid[i, 2]
            best = np.inf
            for j in range(pts.shape[0]):
                dx = pts[j, 0] - gx
                dy = pts[j, 1] - gy
                dz = pts[j, 2] - gz
                d = dx * dx + dy * dy + dz * dz
                if d < best:
                    best = d
            out[i] = np.sqrt(best)
        return out


def twist_walk(start, choices, drift_tol=1e-6, backend=None):
    """Iterate the generator codes in ``choices`` from ``start``.

    Returns ``(points, abort_index)``; points has ``len(choices) + 1`` rows
    (start first) and abort_index is -1 unless k drifted past ``drift_tol``,
    in which case it is the first offending row and later rows are unset.
    """
    backend = _resolve(backend)
    choices = np.ascontiguousarray(choices, dtype=np.int8)
    x, y, z = (float(c) for c in start)
    k0 = x * x + y * y + z * z - x * y * z - 2.0
    out = np.zeros((choices.shape[0] + 1, 3))
    fn = _walk_nb if backend == "numba" else _walk_py
    return out, int(fn(x, y, z, choices, out, k0, float(drift_tol)))


def _nearest_np(grid, pts, budget=20_000_000):
    chunk = max(1, budget // max(1, grid.shape[0]))
    g2 = np.einsum("ij,ij->i", grid, grid)
    best = np.full(grid.shape[0], np.inf)
    for s in range(0, pts.shape[0], chunk):
        block = pts[s:s + chunk]
        b2 = np.einsum("ij,ij->i", block, block)
        d2 = g2[:, None] + b2[None, :] - 2.0 * (grid @ block.T)
        np.minimum(best, d2.min(axis=1), out=best)
    # the expanded form can round slightly negative
    return np.sqrt(np.maximum(best, 0.0))


def nearest_distances(grid, pts, backend=None):
    """Euclidean distance from each grid row to the closest row of ``pts``."""
    backend = _resolve(backend)
    grid = np.ascontiguousarray(grid, dtype=np.float64)
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    if pts.shape[0] == 0:
        raise ValueError("empty point set")
    if backend == "numba":
        return _nearest_nb(grid, pts)
    return _nearest_np(grid, pts)
