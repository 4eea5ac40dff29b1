"""Compare the compiled and numpy kernel backends.

Usage:
    python3 benchmarks/bench_kernels.py [--points 777] [--jacobi-size 200] [--repeat 3]

Times the swap-test and kernel probability batches (points x 4
centroids, 2 features) and the Jacobi eigensolver, checks that both
backends agree, and prints a table of best-of-``repeat`` wall times.
"""

import argparse
import math
import time

import numpy as np

from qcluster import kernels


def best_time(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=777)
    parser.add_argument("--centroids", type=int, default=4)
    parser.add_argument("--jacobi-size", type=int, default=200)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    X = rng.uniform(0, math.pi, (args.points, 2))
    C = rng.uniform(0, math.pi, (args.centroids, 2))
    A = rng.normal(size=(args.jacobi_size, args.jacobi_size))
    A = np.ascontiguousarray(A + A.T)

    backends = kernels.available_backends()
    cases = {
        f"swap_test_p0 {args.points}x{args.centroids}": lambda m: m.swap_test_p0(X, C),
        f"kernel_p0 {args.points}x{args.centroids}": lambda m: m.kernel_p0(X, C),
        f"jacobi_eigh {args.jacobi_size}x{args.jacobi_size}": lambda m: np.sort(m.jacobi_eigh(A)[0]),
    }
    names = sorted(backends)
    print(f"{'kernel':<28}" + "".join(f"{n + ' (s)':>14}" for n in names)
          + (f"{'speedup':>10}{'max diff':>12}" if len(names) == 2 else ""))
    for label, call in cases.items():
        results = {n: best_time(lambda: call(backends[n]), args.repeat) for n in names}
        row = f"{label:<28}" + "".join(f"{results[n][0]:>14.4f}" for n in names)
        if len(names) == 2:
            (t_cy, out_cy), (t_py, out_py) = results["cython"], results["python"]
            diff = float(np.max(np.abs(np.asarray(out_cy) - np.asarray(out_py))))
            row += f"{t_py / t_cy:>9.1f}x{diff:>12.1e}"
        print(row)
    if len(names) < 2:
        print("compiled extension not built; only the numpy backend was timed")


if __name__ == "__main__":
    main()
