"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The first numba call per kernel is a warm-up and is not timed, so the
figures compare steady-state throughput rather than JIT cost.
"""

import argparse
import timeit

import numpy as np

from polygrowth import _kernels


def cases():
    rng = np.random.default_rng(0)
    pts = rng.integers(-5, 5000, size=(200_000, 3))
    pts[:100_000, 1:] = 0
    win = _kernels.numpy_impl.window_points(3, 30)
    targets = win[rng.choice(len(win), 200)]
    return [
        ("window_points d=3 R=40", lambda impl: impl.window_points(3, 40)),
        ("mask_zeros 200k points n=2", lambda impl: impl.mask_zeros(pts, 2)),
        ("match_rows 200 targets", lambda impl: impl.match_rows(win, targets)),
        ("mask_runs n=3 cap=2^16", lambda impl: impl.mask_runs(np.array([256, 0, 0]), 3, 1 << 16)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    impls = [("numpy", _kernels.numpy_impl)]
    if _kernels.numba_impl is not None:
        impls.append(("numba", _kernels.numba_impl))
    print(f"{'kernel':<30}" + "".join(f"{name:>12}" for name, _ in impls) + f"{'speedup':>10}")
    for label, fn in cases():
        times = []
        for _, impl in impls:
            fn(impl)
            times.append(min(timeit.repeat(lambda: fn(impl), number=1, repeat=args.repeat)))
        row = f"{label:<30}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
