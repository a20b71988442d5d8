"""Time the numba and numpy kernels on the same inputs.

    python3 benchmarks/bench_backends.py [--n 20000] [--repeat 3]
"""

import argparse
import time

import numpy as np

from bresenham_skew import kernels
from bresenham_skew._backend import HAVE_NUMBA


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=20_000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    da = rng.integers(2, 2000, args.n)
    db = (rng.random(args.n) * da).astype(np.int64)
    x0 = rng.integers(0, 10**6, args.n)
    y0 = (x0 * db) // da
    td0 = 2 * (x0 * db - y0 * da) + 2 * db - da
    # window-sized walks, as in a binary32 window at i ~ 1e9
    steps = rng.integers(0, 600, args.n)

    cases = {
        "walk": ((y0, td0, steps, da, db), kernels.walk_numpy, kernels.walk_numba),
        "td_bound_scan": ((da, db, 3 * da), kernels.td_bound_scan_numpy, kernels.td_bound_scan_numba),
    }
    print(f"{'kernel':<12} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for name, (inputs, np_fn, nb_fn) in cases.items():
        t_np, out_np = best_of(np_fn, inputs, args.repeat)
        if not HAVE_NUMBA:
            print(f"{name:<12} {t_np:>10.4f} {'n/a':>10} {'n/a':>8}")
            continue
        nb_fn(*(a[:2] for a in inputs))  # compile or load from cache
        t_nb, out_nb = best_of(nb_fn, inputs, args.repeat)
        same = all(np.array_equal(a, b) for a, b in zip(np.atleast_2d(out_np), np.atleast_2d(out_nb)))
        if not same:
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<12} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
