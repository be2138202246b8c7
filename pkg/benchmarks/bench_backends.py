#!/usr/bin/env python3
"""Benchmark the compiled kernel extension against the numpy fallback.

The three hot loops dominate everything the package does: per-trial minima
feed the Monte Carlo harness, accumulate feeds stream ingestion, and
weight_block feeds the dense oracle path.

Usage:
    python benchmarks/bench_backends.py [--trials N] [--updates N] [--k K]
"""

import argparse
import importlib
import time

import numpy as np


def load_backends():
    backends = {}
    try:
        backends["compiled"] = importlib.import_module("ccsketch._kernels")
    except ImportError:
        pass
    backends["python"] = importlib.import_module("ccsketch._kernels_py")
    return backends


def bench(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=2_000_000,
                        help="trials for the minima kernel")
    parser.add_argument("--updates", type=int, default=200_000,
                        help="updates for the accumulate kernel")
    parser.add_argument("--k", type=int, default=8,
                        help="sketch width for accumulate/weight_block")
    args = parser.parse_args()

    backends = load_backends()
    gap = 1e-4
    idx = np.random.default_rng(0).integers(
        0, 1 << 40, args.updates).astype(np.uint64)
    inc = np.random.default_rng(1).uniform(0.1, 2.0, args.updates)

    cases = {
        f"stable_minima({args.trials:,} trials, k=1)":
            lambda kern: kern.stable_minima(7, gap, 0, args.trials, 1),
        f"accumulate({args.updates:,} updates, k={args.k})":
            lambda kern: kern.accumulate(7, gap, idx, inc,
                                         np.zeros(args.k)),
        f"weight_block({args.updates:,} rows, k={args.k})":
            lambda kern: kern.weight_block(7, gap, idx, args.k),
    }

    width = max(map(len, cases))
    print(f"backends: {', '.join(backends)}")
    print(f"{'kernel':<{width}}  " +
          "  ".join(f"{name:>12}" for name in backends) +
          ("  speedup" if len(backends) == 2 else ""))
    for label, runner in cases.items():
        times = [bench(lambda k=kern: runner(k)) for kern in backends.values()]
        row = f"{label:<{width}}  " + "  ".join(f"{t:>10.3f}s" for t in times)
        if len(times) == 2:
            row += f"  {times[1] / times[0]:>6.1f}x"
        print(row)

    if len(backends) == 2:
        compiled, python = backends["compiled"], backends["python"]
        a = compiled.stable_minima(7, gap, 0, 10_000, 2)
        b = python.stable_minima(7, gap, 0, 10_000, 2)
        worst = float(np.max(np.abs(a / b - 1.0)))
        print(f"cross-backend agreement on 1e4 minima: "
              f"max rel diff {worst:.2e}")


if __name__ == "__main__":
    main()
