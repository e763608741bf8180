"""Compare the numba and numpy backends on the two hot kernels.

    python benchmarks/bench_kernels.py [--steps N] [--grid N] [--repeat N]

The first numba call of each kernel is timed separately as compile time.
"""

import argparse
import json
import time

import numpy as np

from charvar import _accel
from charvar.orbit_engine import sphere_grid


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=1_000_000)
    ap.add_argument("--grid", type=int, default=2000)
    ap.add_argument("--orbit", type=int, default=200_000, help="orbit points for the distance kernel")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    choices = rng.integers(0, 4, size=args.steps, dtype=np.int8)
    start = (0.5, 0.5, 0.5)
    grid = sphere_grid(-1.375, args.grid)

    results = {"numba_threads": None}
    if _accel.HAVE_NUMBA:
        import numba

        results["numba_threads"] = numba.get_num_threads()
        t0 = time.perf_counter()
        _accel.twist_walk(start, choices[:10], backend="numba")
        results["walk_compile_s"] = time.perf_counter() - t0
    walk = {}
    for backend in ("numba", "numpy") if _accel.HAVE_NUMBA else ("numpy",):
        walk[backend], (pts, _) = _best(lambda: _accel.twist_walk(start, choices, backend=backend), args.repeat)
    orbit = pts[: args.orbit]

    if _accel.HAVE_NUMBA:
        t0 = time.perf_counter()
        _accel.nearest_distances(grid[:5], orbit[:5], backend="numba")
        results["nearest_compile_s"] = time.perf_counter() - t0
    near = {}
    for backend in walk:
        near[backend], _ = _best(lambda: _accel.nearest_distances(grid, orbit, backend=backend), args.repeat)

    results["twist_walk_s"] = walk
    results["nearest_distances_s"] = near
    results["sizes"] = {"steps": args.steps, "grid": int(len(grid)), "orbit": int(len(orbit))}
    print(json.dumps(results, indent=2))
    for name, table in (("twist_walk", walk), ("nearest_distances", near)):
        if "numba" in table:
            print(f"{name}: numba {table['numba']:.3f}s, numpy {table['numpy']:.3f}s, "
                  f"speedup {table['numpy'] / table['numba']:.1f}x")


if __name__ == "__main__":
    main()
