"""Time the exhaustive minimum-subsidy search and the discrete budget pour on
both backends (numba and numpy/python), checking they return the same answer.

    python benchmarks/bench_kernels.py [--n 4] [--m 8] [--repeat 3]
"""
import argparse
import time
from fractions import Fraction

import numpy as np

from wefable import kernels
from wefable.envy import is_wefable
from wefable.generators import Distribution, random_instance
from wefable.model import Allocation
from wefable.oracle import min_total_subsidy_exhaustive, simulate_budget_discrete


def best_of(fn, repeat):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--m", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--steps", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if not kernels.HAVE_NUMBA:
        print("numba is not installed; only the numpy backend can run")
        return

    rng = np.random.default_rng(args.seed)
    inst = random_instance(Distribution.parse("discrete_uniform(1,100)"), args.n, args.m, rng)

    # warm the jit so compile time is not counted
    min_total_subsidy_exhaustive(random_instance(Distribution("discrete_uniform", 1, 5), 2, 2, rng), engine="numba")

    print(f"exhaustive search, n={args.n}, m={args.m} ({args.n ** args.m} allocations)")
    results, times = {}, {}
    for engine in ("numba", "numpy"):
        times[engine], results[engine] = best_of(lambda: min_total_subsidy_exhaustive(inst, engine=engine), args.repeat)
        print(f"  {engine:<6} {times[engine]:8.3f}s  total={results[engine].total}")
    assert results["numba"].allocation == results["numpy"].allocation
    print(f"  numba speedup x{times['numpy'] / times['numba']:.1f}")

    # the budget pour needs a WEF-able allocation; the optimum is one
    alloc = results["numba"].allocation
    assert is_wefable(inst, alloc).wefable
    d = Fraction(results["numba"].total, 2) or Fraction(1)
    print(f"discrete pour, {args.steps} steps, budget {d}")
    pours = {}
    for engine in ("numba", "python"):
        times[engine], pours[engine] = best_of(
            lambda: simulate_budget_discrete(inst, alloc, d, args.steps, engine), args.repeat)
        print(f"  {engine:<6} {times[engine]:8.3f}s")
    assert pours["numba"] == pours["python"]
    print(f"  numba speedup x{times['python'] / times['numba']:.1f}")


if __name__ == "__main__":
    main()
