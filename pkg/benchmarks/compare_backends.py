#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-Python fallback.

Runs the same seeded workloads on both backends, checks that the
results agree bit-for-bit, and reports wall-clock speedups.

Usage: python benchmarks/compare_backends.py [--quick]
"""

import argparse
import time

import numpy as np

from qpso._backend import core, run_compiled
from qpso._pykernel import run_python
from qpso.optimizers import AlgorithmConfig
from qpso.problems import make_problem


WORKLOADS = [
    ("sphere D=10, qpso-cd", "sphere", 10, dict(algorithm="qpso-cd", population=20, iterations=1000)),
    ("rastrigin D=10, qpso-cd", "rastrigin", 10, dict(algorithm="qpso-cd", population=20, iterations=1000)),
    ("griewank D=30, qpso", "griewank", 30, dict(algorithm="qpso", population=20, iterations=1000)),
    ("vessel, qpso-cd", "vessel", 0, dict(algorithm="qpso-cd", population=40, iterations=1000)),
    ("constrained-sphere D=6, pso", "constrained-sphere", 6, dict(algorithm="pso", population=30, iterations=500)),
]


def run_workload(label, problem_name, dim, cfg_kwargs, repeats):
    problem = make_problem(problem_name, dim)
    configs = [AlgorithmConfig(seed=1000 + r, **cfg_kwargs).resolved()
               for r in range(repeats)]

    t0 = time.perf_counter()
    fast = [run_compiled(problem, cfg) for cfg in configs]
    t_fast = time.perf_counter() - t0

    t0 = time.perf_counter()
    slow = [run_python(problem, cfg) for cfg in configs]
    t_slow = time.perf_counter() - t0

    for a, b in zip(fast, slow):
        assert a.final_value == b.final_value, f"{label}: final values differ"
        assert np.array_equal(a.trajectory, b.trajectory), f"{label}: trajectories differ"
        assert np.array_equal(a.final_position, b.final_position)

    print(f"{label:32s} compiled {t_fast:7.3f}s   python {t_slow:7.3f}s   "
          f"speedup {t_slow / t_fast:6.1f}x   (identical results)")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true",
                        help="single repeat per workload")
    args = parser.parse_args()
    if core() is None:
        raise SystemExit("compiled extension not available; build it first "
                         "(pip install -e . --no-build-isolation)")
    repeats = 1 if args.quick else 3
    print(f"{repeats} repeat(s) per workload; both backends share seeds\n")
    for label, name, dim, kwargs in WORKLOADS:
        run_workload(label, name, dim, kwargs, repeats)


if __name__ == "__main__":
    main()
