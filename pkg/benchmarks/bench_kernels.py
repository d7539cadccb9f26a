"""Compare the compiled and numpy RK4 kernels on basin grids.

    python3 benchmarks/bench_kernels.py --grid 50 --repeat 3
"""
import argparse
import time

import numpy as np

from ecoplan import game, kernels


def bench(backend, g, grid, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = game.basin_grid(g, grid, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=50)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--u", type=float, default=2.0)
    ap.add_argument("--v", type=float, default=2.0)
    args = ap.parse_args(argv)

    g = game.GameParams(args.u, args.v)
    timings = {}
    labels = {}
    for name in kernels.BACKENDS:
        timings[name], basin = bench(name, g, args.grid, args.repeat)
        labels[name] = basin.labels
        print(f"{name:>9}: {timings[name]:.4f} s  (Q4 fraction {basin.q4_fraction:.4f})")
    if len(timings) == 2:
        same = np.array_equal(labels["compiled"], labels["python"])
        print(f"speedup: {timings['python'] / timings['compiled']:.1f}x, labels identical: {same}")
    else:
        print("compiled extension not built; only the python backend is available")


if __name__ == "__main__":
    main()
