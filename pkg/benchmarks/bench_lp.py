#!/usr/bin/env python3
"""Benchmark the compiled simplex kernel against the pure-python twin.

Three workloads: raw pivot-kernel throughput on captured tableaus, slip
state enumeration, and repeated stability queries. Run from the repo
root:

    python3 benchmarks/bench_lp.py [--contacts M] [--repeat N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from graspstab import check_stability, enumerate_slip_states
from graspstab import lp
from graspstab.generate import random_grasp


def time_call(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernel(repeat):
    """Raw kernel: median-size max-min-slack programs."""
    rng = np.random.default_rng(0)
    problems = []
    for _ in range(200):
        n = int(rng.integers(4, 16))
        k = int(rng.integers(4, 20))
        e = int(rng.integers(1, 6))
        problems.append((rng.normal(size=(e, n)), rng.normal(size=e),
                         rng.normal(size=(k, n)), rng.normal(size=k), n))

    def run():
        for a_eq, b_eq, a_in, b_in, n in problems:
            lp.max_min_slack(a_eq, b_eq, a_in, b_in, -50, 50, n=n)

    return time_call(run, repeat)


def bench_enumeration(m, repeat):
    model = random_grasp(m, rng=7)
    return time_call(lambda: enumerate_slip_states(model, detachment=False),
                     repeat)


def bench_queries(m, repeat):
    model = random_grasp(m, rng=11)
    states = enumerate_slip_states(model, detachment=True)
    wrenches = [np.array([np.cos(a), np.sin(a), 0.3]) for a in
                np.linspace(0, 2 * np.pi, 24, endpoint=False)]

    def run():
        for w in wrenches:
            check_stability(model, w, states=states, witness_policy="first")

    return time_call(run, repeat)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--contacts", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = ["python"]
    try:
        lp.set_backend("cython")
        backends.insert(0, "cython")
    except RuntimeError:
        print("compiled kernel unavailable; benchmarking python only")

    rows = {}
    for backend in backends:
        lp.set_backend(backend)
        rows[backend] = {
            "kernel (200 LPs)": bench_kernel(args.repeat),
            f"enumeration m={args.contacts}": bench_enumeration(args.contacts,
                                                                args.repeat),
            f"24 queries m={args.contacts - 1}": bench_queries(
                args.contacts - 1, args.repeat),
        }

    names = list(next(iter(rows.values())))
    width = max(len(n) for n in names)
    header = f"{'workload':<{width}} " + " ".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f" {'speedup':>9}"
    print(header)
    for name in names:
        line = f"{name:<{width}} " + " ".join(
            f"{rows[b][name] * 1e3:>10.1f}ms" for b in backends)
        if len(backends) == 2:
            line += f" {rows['python'][name] / rows['cython'][name]:>8.2f}x"
        print(line)


if __name__ == "__main__":
    main()
