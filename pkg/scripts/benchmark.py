#!/usr/bin/env python3
"""Benchmark the compiled solver kernel against the pure-Python twin.

Both kernels consume the same integer-encoded systems; this script times
them on identical random workloads and verifies they return identical
solutions.  Usage: python scripts/benchmark.py [--seed N] [--cases N]
"""

import argparse
import random
import time

from fes import _pykernel
from fes._encode import encode, encode_valuation
from fes.checker import GenConfig, gen_instance

try:
    from fes import _ckernel
except ImportError:
    _ckernel = None


def _workload(seed, cases, max_vars):
    rng = random.Random(seed)
    cfg = GenConfig(seed=seed, cases=cases, max_vars=max_vars,
                    lattice_families=("bool", "chain3", "diamond", "powerset2"))
    out = []
    for _ in range(cases):
        f, v = gen_instance(cfg, rng)
        out.append((encode(f), encode_valuation(f, v)))
    return out


def _run(kernel, work, max_evals=10 ** 7):
    t0 = time.perf_counter()
    results = [kernel.solve_fes(enc, eta, max_evals) for enc, eta in work]
    return time.perf_counter() - t0, results


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--cases", type=int, default=400)
    ap.add_argument("--max-vars", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    work = _workload(args.seed, args.cases, args.max_vars)
    print(f"workload: {args.cases} random systems, up to {args.max_vars} variables")

    py_time, py_res = min(
        (_run(_pykernel, work) for _ in range(args.repeat)), key=lambda r: r[0])
    print(f"pure-python kernel: {py_time * 1000:8.1f} ms")

    if _ckernel is None:
        print("compiled kernel: not built")
        return

    c_time, c_res = min(
        (_run(_ckernel, work) for _ in range(args.repeat)), key=lambda r: r[0])
    print(f"compiled kernel:    {c_time * 1000:8.1f} ms")
    print(f"speedup:            {py_time / c_time:8.2f}x")

    mismatches = sum(1 for a, b in zip(py_res, c_res) if a[0] != b[0])
    print(f"solution mismatches: {mismatches}")
    if mismatches:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
