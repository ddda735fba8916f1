"""Brute-force ground truth for small instances."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import permutations, product
from math import lcm
from typing import Callable

import numpy as np

from . import kernels
from .envy import EnvyGraph, Stable, build_envy_graph, is_wefable, longest_paths
from .errors import NotWefable, TooLarge
from .model import Additive, Allocation, Capped, IdenticalItems, Instance, Table, normalize_weights

ZERO = Fraction(0)
ENUM_LIMIT = 10**7
PY_ENUM_LIMIT = 10**6
INT_LIMIT = 1 << 62


@dataclass(frozen=True)
class OracleResult:
    allocation: Allocation  # lexicographically first optimum owner vector
    subsidies: tuple[Fraction, ...]
    total: Fraction
    enumerated: int
    wefable_count: int
    optimal_count: int
    engine: str


def _check_size(n: int, m: int, limit: int = ENUM_LIMIT) -> None:
    if n ** m > limit:
        raise TooLarge(f"{n}^{m} allocations exceeds the enumeration guard of {limit}")


def _exact_cost_of(instance, owners):
    alloc = Allocation(owners, instance.n)
    cert = is_wefable(instance, alloc)
    if not isinstance(cert, Stable):
        return alloc, None
    return alloc, tuple(w * l for w, l in zip(instance.weights, cert.levels))


def _search_exact(instance: Instance, candidates, predicate=None) -> OracleResult:
    best = None
    count = ok = ties = 0
    for owners in candidates:
        count += 1
        alloc, p = _exact_cost_of(instance, owners)
        if p is None or (predicate is not None and not predicate(instance, alloc)):
            continue
        ok += 1
        t = sum(p, ZERO)
        if best is None or t < best[0]:
            best = (t, alloc, p)
            ties = 1
        elif t == best[0]:
            ties += 1
            if alloc.owners < best[1].owners:
                best = (t, alloc, p)
    if best is None:
        raise ValueError("no allocation satisfies the requested filter")
    t, alloc, p = best
    return OracleResult(alloc, p, t, count, ok, ties, "exact")


def _integer_form(instance: Instance):
    """(mode, int values, int weights, scale, divisor) or None when int64 could overflow."""
    n, m = instance.n, instance.m
    prof = instance.valuations
    if prof.additive:
        raw = instance.item_values()
        mode = kernels.MODE_ADDITIVE
        biggest = max((sum(r, ZERO) for r in raw), default=ZERO)
    elif isinstance(prof, Table):
        raw = [list(r) for r in prof.bundles]
        mode = kernels.MODE_TABLE
        biggest = max(r[-1] for r in raw)
    elif isinstance(prof, Capped):
        raw = [[k, Fraction(1)] for k in prof.caps]
        mode = kernels.MODE_CAPPED
        biggest = max(min(k, Fraction(m)) for k in prof.caps)
    else:
        return None
    den = reduce(lcm, (x.denominator for r in raw for x in r), 1)
    w = normalize_weights(instance.weights)
    L = reduce(lcm, w, 1)
    scale = [L // x for x in w]
    if (biggest * den + 1) * L * (n + 1) * (sum(w) + 1) >= INT_LIMIT:
        return None
    vals = np.array([[int(x * den) for x in r] for r in raw], dtype=np.int64).reshape(n, -1)
    return mode, vals, w, scale, den * L


def min_total_subsidy_exhaustive(instance: Instance, engine: str | None = None,
                                 predicate: Callable | None = None) -> OracleResult:
    """Minimum total subsidy over every WEF-able complete allocation.

    ``engine`` is "numba", "numpy" or "exact" (pure Fraction loop); by default
    the compiled backend chosen by WEF_BACKEND. A ``predicate`` restricts the
    search to allocations it accepts and forces the exact engine.
    """
    n, m = instance.n, instance.m
    if isinstance(instance.valuations, IdenticalItems) and predicate is None:
        # items are interchangeable: one owner vector per count vector suffices
        return _search_exact(instance, _count_owner_vectors(n, m))
    _check_size(n, m)
    form = None if engine == "exact" or predicate is not None else _integer_form(instance)
    if form is None:
        _check_size(n, m, PY_ENUM_LIMIT)
        return _search_exact(instance, product(range(n), repeat=m), predicate)
    mode, vals, w, scale, _ = form
    which = engine or kernels.backend()
    best, rank, n_ok, n_best = kernels.exhaustive_search(mode, vals, w, scale, n, m, which)
    owners = []
    for _ in range(m):
        owners.append(rank % n)
        rank //= n
    alloc, p = _exact_cost_of(instance, tuple(reversed(owners)))
    assert p is not None
    return OracleResult(alloc, p, sum(p, ZERO), n ** m, n_ok, n_best, which)


def _count_owner_vectors(n: int, m: int):
    def rec(k, left):
        if k == n - 1:
            yield (left,)
            return
        for c in range(left, -1, -1):
            for rest in rec(k + 1, left - c):
                yield (c,) + rest

    for counts in rec(0, m):
        yield Allocation.from_counts(counts).owners


def reassignment_stable_bruteforce(instance: Instance, allocation: Allocation) -> bool:
    """No permutation of bundles raises the sum of weighted bundle values."""
    n = instance.n
    if n > 8:
        raise TooLarge("permutation check is limited to 8 agents")
    vals = instance.bundle_values(allocation)
    w = instance.weights
    base = sum((vals[i][i] / w[i] for i in range(n)), ZERO)
    return all(
        sum((vals[i][pi[i]] / w[pi[i]] for i in range(n)), ZERO) <= base
        for pi in permutations(range(n))
    )


def _simple_paths(graph: EnvyGraph, source: int):
    """Yield (cost, vertices) for every simple path and closed simple cycle from source."""
    n = graph.n
    stack = [(source, (source,), ZERO)]
    while stack:
        v, path, c = stack.pop()
        yield c, path, False
        for u in range(n):
            if u == source and len(path) > 1:
                yield c + graph.cost[v][u], path, True
            elif u not in path:
                stack.append((u, path + (u,), c + graph.cost[v][u]))


def longest_simple_path_bruteforce(instance: Instance, allocation: Allocation, source: int) -> Fraction:
    if instance.n > 8:
        raise TooLarge("path enumeration is limited to 8 agents")
    graph = build_envy_graph(instance, allocation)
    for s in range(instance.n):
        for c, path, closed in _simple_paths(graph, s):
            if closed and c > 0:
                raise NotWefable(path, c)
    return max(c for c, _, closed in _simple_paths(graph, source) if not closed)


def efficiency_predicates(instance: Instance, allocation: Allocation) -> dict[str, bool]:
    n, m = instance.n, instance.m
    bundles = allocation.bundles()
    util = [instance.value(i, bundles[i]) for i in range(n)]

    non_wasteful = True
    for i in range(n):
        for o in bundles[i]:
            rest = [x for x in bundles[i] if x != o]
            if instance.value(i, rest) != util[i]:
                continue
            if any(instance.value(j, bundles[j] + (o,)) > util[j] for j in range(n) if j != i):
                non_wasteful = False
                break
        if not non_wasteful:
            break

    _check_size(n, m, PY_ENUM_LIMIT)
    sw = sum(util, ZERO)
    best_sw = sw
    dominated = False
    for owners in product(range(n), repeat=m):
        other = Allocation(owners, n).bundles()
        u = [instance.value(i, other[i]) for i in range(n)]
        best_sw = max(best_sw, sum(u, ZERO))
        if not dominated and all(a >= b for a, b in zip(u, util)) and any(a > b for a, b in zip(u, util)):
            dominated = True
    return {
        "non_wasteful": non_wasteful,
        "pareto_efficient": not dominated,
        "msw": sw == best_sw,
        "nonzero_welfare": sw > 0 or best_sw == 0,
    }


def simulate_budget_discrete(instance: Instance, allocation: Allocation, d, steps: int = 10**6,
                             engine: str | None = None) -> tuple[Fraction, ...]:
    """Reference split of budget ``d``: pour ``steps`` equal slices, each into
    the agents currently at the highest level, in proportion to weight."""
    d = Fraction(d)
    n = instance.n
    w = instance.weights
    table, witness = longest_paths(build_envy_graph(instance, allocation))
    if witness is not None:
        raise NotWefable(*witness)
    if d == 0:
        return (ZERO,) * n
    eps = d / steps
    inc = [ZERO] * (1 << n)
    for mask in range(1, 1 << n):
        inc[mask] = eps / sum((w[i] for i in range(n) if mask >> i & 1), ZERO)
    unit = reduce(lcm, [x.denominator for r in table for x in r] + [x.denominator for x in inc], 1)
    L = [[int(x * unit) for x in r] for r in table]
    incs = [int(x * unit) for x in inc]
    peak = max(abs(x) for r in L for x in r) + int(d / min(w) * unit) + 1
    which = engine or kernels.backend()
    if 4 * peak >= INT_LIMIT:
        which = "python"
    rate = kernels.simulate(L, [0] * n, incs, steps, which if which == "numba" else "python")
    return tuple(w[i] * Fraction(rate[i], unit) for i in range(n))
