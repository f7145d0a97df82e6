"""Compiled vs pure-numpy table kernels.

    python3 benchmarks/bench_kernels.py [--n 200000] [--repeat 5]

Prints the best-of-repeat time of each kernel under each backend, the
speedup, and the largest difference between the two results.
"""
import argparse
import timeit

import numpy as np

from hradon import _kernels_py, backend
from hradon.transform import bump_transform


def bench(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000, help="evaluation points")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    T = bump_transform(4)
    rng = np.random.default_rng(0)
    w = rng.uniform(-600.0, 600.0, args.n)
    x = rng.uniform(-20.0, 20.0, args.n // 10)
    scales = np.ldexp(1.0, np.arange(-16, 9))
    cases = {
        "table_eval": lambda mod: mod.table_eval(T.table, T.delta, T.wmax, w),
        "table_dyadic_sum": lambda mod: mod.table_dyadic_sum(T.table, T.delta, T.wmax, x, scales),
    }
    if "compiled" not in backend.available():
        print("compiled extension not built; timing the numpy kernels only")
        for name, f in cases.items():
            print(f"{name:18s} python {bench(lambda: f(_kernels_py), args.repeat) * 1e3:9.2f} ms")
        return
    from hradon import _kernels

    print(f"{'kernel':18s} {'python ms':>10s} {'compiled ms':>12s} {'speedup':>8s} {'max diff':>10s}")
    for name, f in cases.items():
        tp = bench(lambda: f(_kernels_py), args.repeat)
        tc = bench(lambda: f(_kernels), args.repeat)
        diff = float(np.abs(f(_kernels_py) - f(_kernels)).max())
        print(f"{name:18s} {tp * 1e3:10.2f} {tc * 1e3:12.2f} {tp / tc:8.1f} {diff:10.1e}")


if __name__ == "__main__":
    main()
