"""Time the compiled kernels against the numpy fallback on identical inputs.

    python benchmarks/bench_kernels.py [--paths N] [--steps M] [--repeat R]
"""
import argparse
import time

import numpy as np

from hybridbm._backend import load


def _inputs(n_paths, n_steps, seed=0):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n_steps, n_paths)), rng.standard_normal((n_steps, n_paths))


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(k, z1, z2):
    n = z1.shape[1]

    def euler():
        x = np.zeros(n)
        k.euler_block(x, z1, z2, 0.1, 1.5, 1.0, 1.0, 0.3, 1e-3, 1e12,
                      np.full(n, -1, dtype=np.int64), 0)
        return x

    def hyperbolic():
        u = np.zeros(n)
        k.hyperbolic_block(u, z1, 2.0, 1e-3)
        return u

    def integrating_factor():
        y = np.zeros(n)
        k.integrating_factor_block(y, z1, z2, 0.1, 1.0, 1.0, 0.3, 2.0, 1e-3)
        return y

    def asian():
        w, e, a, b = np.zeros(n), np.ones(n), np.zeros(n), np.zeros(n)
        k.asian_block(w, e, a, b, z1, 1.0, 1.0, 1e-3, 0)
        return np.concatenate([a, b])

    def hyp2f1():
        return np.array([k.hyp2f1_series(1.3 + 0.001 * i, 2.1, 4.4, 0.45, 1e-16, 100000)[0]
                         for i in range(2000)])

    return {"euler": euler, "hyperbolic": hyperbolic,
            "integrating_factor": integrating_factor, "asian": asian, "hyp2f1_x2000": hyp2f1}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--paths", type=int, default=4096)
    ap.add_argument("--steps", type=int, default=256)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    z1, z2 = _inputs(args.paths, args.steps)
    try:
        compiled = load("cython")
    except ImportError:
        print("compiled extension not built; only the fallback is available")
        return
    fast, slow = cases(compiled, z1, z2), cases(load("python"), z1, z2)
    print(f"{'kernel':<20}{'cython [s]':>12}{'python [s]':>12}{'speedup':>10}{'max |diff|':>14}")
    for name in fast:
        tc, oc = _time(fast[name], args.repeat)
        tp, op = _time(slow[name], args.repeat)
        diff = float(np.max(np.abs(oc - op)))
        print(f"{name:<20}{tc:>12.4f}{tp:>12.4f}{tp / tc:>10.1f}{diff:>14.3g}")


if __name__ == "__main__":
    main()
