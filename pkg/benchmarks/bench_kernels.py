"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from mmthz import kernels


def _cases(seed=0):
    rng = np.random.default_rng(seed)
    n_trials, total = 10_000, 400_000
    trial = np.sort(rng.integers(0, n_trials, total))
    cx, cy = rng.uniform(-70, 170, total), rng.uniform(-70, 70, total)
    hl, hw = rng.exponential(7.5, total), rng.exponential(4.0, total)
    a = rng.uniform(0, np.pi, total)
    ca, sa = np.cos(a), np.sin(a)
    values = rng.random(total)

    y = np.repeat(rng.normal(size=20), 30) + 0.01 * rng.normal(size=600)
    z = np.zeros(1)
    cnt, s, ss = (np.concatenate((z, np.cumsum(v))) for v in (np.ones_like(y), y, y * y))

    return {
        "rect_blocked (4e5 rects)": lambda impl: kernels.rect_blocked(
            trial, cx, cy, hl, hw, ca, sa, 100.0, n_trials, True, impl=impl),
        "disc_blocked (4e5 discs)": lambda impl: kernels.disc_blocked(
            trial, cx, cy, 0.3, 100.0, n_trials, True, impl=impl),
        "grouped_argmax (4e5 links)": lambda impl: kernels.grouped_argmax(
            trial, values, n_trials, impl=impl),
        "segmented_lsq (600 pts, K=8)": lambda impl: kernels.segmented_lsq(
            cnt, s, ss, 8, 1e-12, impl=impl),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    impls = kernels.backends()
    names = sorted(impls)
    print(f"default backend: {kernels.BACKEND}")
    print(f"{'kernel':32s}" + "".join(f"{n:>12s}" for n in names) + f"{'speedup':>10s}")
    for label, fn in _cases().items():
        best = {}
        for name in names:
            fn(name)  # warm-up
            best[name] = min(timeit.repeat(lambda: fn(name), number=1, repeat=args.repeat))
        row = f"{label:32s}" + "".join(f"{best[n] * 1e3:10.2f}ms" for n in names)
        if "compiled" in best:
            row += f"{best['python'] / best['compiled']:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
