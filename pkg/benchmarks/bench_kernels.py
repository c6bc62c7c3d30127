"""Compare the compiled kernels against the pure-numpy fallback.

Runs the three hot paths (subgroup closure, the SL2 Monte Carlo block,
and the trace-decay block) on both backends in one process and prints a
small table.  The compiled path is warmed first so JIT compilation is
not billed to the timing loop.

Usage: python benchmarks/bench_kernels.py [--trials N]
"""

import argparse
import time

import numpy as np

np.seterr(over="ignore")

from liegen import matgrp, estimate
from liegen.backend import HAS_NUMBA
from liegen.gentest import subgroup_closure


def timed(fn, repeat=3):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def bench_closure(backend):
    group = matgrp.parse_group("SL2", 25)
    gens = matgrp.standard_generators(group)

    def run():
        out = subgroup_closure(gens, cap=group.order + 1, backend=backend)
        assert out.size == group.order
    return run


def bench_mc(backend, trials):
    group = matgrp.parse_group("SL2", 81)

    def run():
        estimate.monte_carlo_P(group, trials, seed=7, backend=backend)
    return run


def bench_decay(backend, trials):
    def run():
        estimate.subfield_trace_decay(2, 6, trials=trials, seed=3,
                                      backend=backend)
    return run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=20000)
    args = ap.parse_args()

    backends = ["numpy"] + (["numba"] if HAS_NUMBA else [])
    cases = [
        ("closure SL2(25), order 15600", bench_closure, ()),
        (f"MC whole-group SL2(81), {args.trials} trials", bench_mc,
         (args.trials,)),
        (f"decay word trace SL2(64), {args.trials} trials", bench_decay,
         (args.trials,)),
    ]
    print(f"backends: {', '.join(backends)}"
          + ("" if HAS_NUMBA else "  (numba unavailable)"))
    results = {}
    for name, factory, extra in cases:
        for be in backends:
            fn = factory(be, *extra)
            fn()              # warm tables and JIT caches
            results[name, be] = timed(fn)
    width = max(len(n) for n, _, _ in cases)
    header = f"{'workload':<{width}}  " + "".join(
        f"{be:>12}" for be in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for name, _, _ in cases:
        line = f"{name:<{width}}  " + "".join(
            f"{results[name, be] * 1e3:>10.1f}ms" for be in backends)
        if len(backends) == 2:
            ratio = results[name, "numpy"] / results[name, "numba"]
            line += f"{ratio:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
