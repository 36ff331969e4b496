#!/usr/bin/env python3
"""Benchmark the compiled kernel backend against the pure-Python fallback.

Runs the three hot kernels (word replay, product-machine counterexample
search, partition refinement) on seeded random machines and reports wall
time per backend plus the speedup.  Both backends must agree on every
result; this is asserted while timing.

Usage: python benchmarks/bench_kernels.py [--states N] [--inputs K] [--reps R]
"""

import argparse
import time

import numpy as np

from ialearn._kernels import backends
from ialearn.ops import random_minimal_mealy


def bench(fn, reps):
    t0 = time.perf_counter()
    for _ in range(reps):
        result = fn()
    return time.perf_counter() - t0, result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--states", type=int, default=40)
    ap.add_argument("--inputs", type=int, default=5)
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--word-len", type=int, default=2000)
    args = ap.parse_args()

    impls = backends()
    if len(impls) == 1:
        print("note: compiled backend unavailable; benchmarking the fallback only")

    m1 = random_minimal_mealy(args.states, args.inputs, 3, seed=1)
    m2 = random_minimal_mealy(args.states, args.inputs, 3, seed=2)
    rng = np.random.default_rng(0)
    word = rng.integers(0, m1.alphabet.n_inputs, size=args.word_len).astype(np.int32)

    cases = {
        "run_word": lambda impl: impl.run_word(m1.delta, m1.out, m1.initial, word),
        "product_counterexample": lambda impl: impl.product_counterexample(
            m1.delta, m1.out, m1.initial, m2.delta, m2.out, m2.initial
        ),
        "refine_partition": lambda impl: impl.refine_partition(m1.delta, m1.out),
    }

    print(f"machines: {args.states} states, {m1.alphabet.n_inputs} closed inputs; "
          f"{args.reps} reps")
    header = f"{'kernel':>24} " + "".join(f"{name:>16}" for name in impls)
    print(header + f"{'speedup':>10}")
    for case_name, case in cases.items():
        times = {}
        results = {}
        for name, impl in impls.items():
            times[name], results[name] = bench(lambda impl=impl: case(impl), args.reps)
        baseline = results["pure-python"]
        for name, got in results.items():
            if isinstance(baseline, tuple):
                assert all(np.array_equal(a, b) if isinstance(a, np.ndarray) else a == b
                           for a, b in zip(baseline, got)), f"{case_name}: backends disagree"
            elif baseline is None:
                assert got is None, f"{case_name}: backends disagree"
            else:
                assert np.array_equal(baseline, got), f"{case_name}: backends disagree"
        row = f"{case_name:>24} " + "".join(
            f"{times[name] * 1000:>13.2f} ms" for name in impls
        )
        if len(impls) > 1:
            fastest_other = min(t for n, t in times.items() if n != "pure-python")
            row += f"{times['pure-python'] / fastest_other:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
