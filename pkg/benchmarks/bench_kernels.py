#!/usr/bin/env python3
"""Benchmark the compiled kernels against their pure-Python twins.

Covers the two hot paths: the classical program sweep and the sparse
branch-permutation simulation of the full 2-state 2-symbol machine.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time
from contextlib import contextmanager

import qpulba.kernels as kernels
from qpulba import simulate
from qpulba.builder import build_machine
from qpulba.layout import plan_layout
from qpulba.machine import MachineSpec


@contextmanager
def pure_only():
    saved = kernels._compiled
    kernels._compiled = None
    try:
        yield
    finally:
        kernels._compiled = saved


def timed(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def bench_sweep_small():
    kernels.sweep_programs(2, 2, 12, 12, 0, 4096)


def bench_sweep_large():
    # first 2^16 programs of the 3-state 2-symbol machine (c = t = 24)
    kernels.sweep_programs(3, 2, 24, 24, 0, 1 << 16)


def bench_machine():
    layout = plan_layout(MachineSpec.create(2, 2), "general")
    simulate.run(build_machine(layout=layout), "sparse")


TASKS = [
    ("program sweep, 4096 x 12 cycles", bench_sweep_small),
    ("program sweep, 65536 x 24 cycles", bench_sweep_large),
    ("sparse sim, 2-2-1 machine (4096 branches)", bench_machine),
]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if not kernels.COMPILED_AVAILABLE:
        print("compiled kernels unavailable; timing the pure backend only")
    print(f"{'task':<45}{'pure':>10}{'compiled':>10}{'speedup':>9}")
    for name, fn in TASKS:
        with pure_only():
            pure = timed(fn, args.repeat)
        if kernels.COMPILED_AVAILABLE:
            fast = timed(fn, args.repeat)
            print(f"{name:<45}{pure:>9.3f}s{fast:>9.3f}s{pure / fast:>8.1f}x")
        else:
            print(f"{name:<45}{pure:>9.3f}s{'-':>10}{'-':>9}")


if __name__ == "__main__":
    main()
