"""Weighted envy graphs, WEF-ability and the minimal subsidy vector."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotWefable
from .model import Allocation, Instance, Outcome, require_additive

ZERO = Fraction(0)


@dataclass(frozen=True)
class EnvyGraph:
    """cost[i][j] = v_i(X_j)/w_j - v_i(X_i)/w_i, with a zero diagonal."""

    cost: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.cost)

    def cycle_cost(self, cycle: Sequence[int]) -> Fraction:
        k = len(cycle)
        return sum((self.cost[cycle[t]][cycle[(t + 1) % k]] for t in range(k)), ZERO)


@dataclass(frozen=True)
class Stable:
    """No positive cycle; ``levels[i]`` is the max path cost from agent i."""

    levels: tuple[Fraction, ...]
    wefable = True


@dataclass(frozen=True)
class PositiveCycle:
    cycle: tuple[int, ...]
    cost: Fraction
    wefable = False


WefabilityCertificate = Stable | PositiveCycle


def cost_matrix(instance: Instance, vals: Sequence[Sequence[Fraction]], subsidies=None):
    n = instance.n
    w = instance.weights
    p = subsidies if subsidies is not None else [ZERO] * n
    own = [(vals[i][i] + p[i]) / w[i] for i in range(n)]
    return tuple(
        tuple(ZERO if i == j else (vals[i][j] + p[j]) / w[j] - own[i] for j in range(n))
        for i in range(n)
    )


def build_envy_graph(instance: Instance, allocation: Allocation) -> EnvyGraph:
    return EnvyGraph(cost_matrix(instance, instance.bundle_values(allocation)))


def _path(pred, i, j) -> list[int]:
    """Vertices of the recorded i -> j path, i first and j last."""
    out = [j]
    while j != i:
        j = pred[i][j]
        out.append(j)
    out.reverse()
    return out


def _positive_subcycle(graph: EnvyGraph, walk: list[int]) -> tuple[tuple[int, ...], Fraction]:
    """Split a closed walk into simple cycles and return the costliest one."""
    best: tuple[tuple[int, ...], Fraction] | None = None
    stack: list[int] = []
    pos: dict[int, int] = {}
    for v in walk:
        if v in pos:
            start = pos[v]
            cyc = tuple(stack[start:])
            for u in cyc:
                del pos[u]
            del stack[start:]
            c = graph.cycle_cost(cyc)
            if best is None or c > best[1]:
                best = (cyc, c)
        pos[v] = len(stack)
        stack.append(v)
    assert best is not None and best[1] > 0
    return best


def longest_paths(graph: EnvyGraph):
    """All-pairs longest path costs by max-plus Floyd-Warshall.

    Returns ``(dist, None)`` when no positive cycle exists, otherwise
    ``(None, (cycle, cost))`` with a witness found at the first moment a
    closed walk of positive cost appears.
    """
    n = graph.n
    d = [list(row) for row in graph.cost]
    pred = [[i] * n for i in range(n)]
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if i != k and dik + d[k][i] > 0:
                walk = _path(pred, i, k) + _path(pred, k, i)[1:]
                return None, _positive_subcycle(graph, walk)
            di = d[i]
            pi = pred[i]
            pk = pred[k]
            for j in range(n):
                c = dik + dk[j]
                if c > di[j]:
                    di[j] = c
                    pi[j] = pk[j]
    return d, None


def _max_assignment(a: Sequence[Sequence[Fraction]]) -> list[int]:
    """Exact Hungarian method; returns col[i] maximizing sum a[i][col[i]]."""
    n = len(a)
    INF = None  # sentinel: treat as +infinity
    u = [ZERO] * (n + 1)
    v = [ZERO] * (n + 1)
    match = [0] * (n + 1)  # match[j] = row assigned to column j (1-based)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv: list = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta = INF
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = -a[i0 - 1][j - 1] - u[i0] - v[j]
                if minv[j] is INF or cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if delta is INF or minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    col = [0] * n
    for j in range(1, n + 1):
        col[match[j] - 1] = j - 1
    return col


def _bellman_ford_levels(graph: EnvyGraph) -> tuple[Fraction, ...]:
    n = graph.n
    levels = []
    for s in range(n):
        dist = [None] * n
        dist[s] = ZERO
        for _ in range(n - 1):
            changed = False
            for i in range(n):
                if dist[i] is None:
                    continue
                for j in range(n):
                    c = dist[i] + graph.cost[i][j]
                    if dist[j] is None or c > dist[j]:
                        dist[j] = c
                        changed = True
            if not changed:
                break
        levels.append(max(dist))
    return tuple(levels)


def is_wefable(instance: Instance, allocation: Allocation, method: str = "cycle") -> WefabilityCertificate:
    graph = build_envy_graph(instance, allocation)
    if method == "cycle":
        return certify(graph)
    if method == "matching":
        n = instance.n
        vals = instance.bundle_values(allocation)
        a = [[vals[i][j] / instance.weights[j] for j in range(n)] for i in range(n)]
        col = _max_assignment(a)
        gain = sum((a[i][col[i]] - a[i][i] for i in range(n)), ZERO)
        if gain <= 0:
            return Stable(_bellman_ford_levels(graph))
        # some cycle of the better permutation must carry positive cost
        seen = [False] * n
        best = None
        for s in range(n):
            if seen[s]:
                continue
            cyc = []
            i = s
            while not seen[i]:
                seen[i] = True
                cyc.append(i)
                i = col[i]
            if len(cyc) > 1:
                c = graph.cycle_cost(cyc)
                if best is None or c > best[1]:
                    best = (tuple(cyc), c)
        return PositiveCycle(*best)
    raise ValueError(f"unknown method {method!r}; use 'cycle' or 'matching'")


def certify(graph: EnvyGraph) -> WefabilityCertificate:
    d, witness = longest_paths(graph)
    if witness is not None:
        return PositiveCycle(*witness)
    return Stable(tuple(max(row) for row in d))


def min_subsidy_vector(instance: Instance, allocation: Allocation) -> tuple[Fraction, ...]:
    """p*_i = w_i * l_i(X); raises NotWefable if some envy cycle is positive."""
    cert = is_wefable(instance, allocation)
    if isinstance(cert, PositiveCycle):
        raise NotWefable(cert.cycle, cert.cost)
    return tuple(w * l for w, l in zip(instance.weights, cert.levels))


def is_wef(instance: Instance, outcome: Outcome) -> bool:
    vals = instance.bundle_values(outcome.allocation)
    cost = cost_matrix(instance, vals, outcome.subsidies)
    return all(c <= 0 for row in cost for c in row)


def check_wef_xy(instance: Instance, allocation: Allocation, x, y) -> bool:
    """WEF(x, y): envy vanishes after moving at most one item's worth, scaled by x and y."""
    require_additive(instance.valuations)
    x, y = Fraction(x), Fraction(y)
    if not (0 <= x <= 1 and 0 <= y <= 1):
        raise ValueError("x and y must lie in [0, 1]")
    n, w = instance.n, instance.weights
    vals = instance.item_values()
    bundles = allocation.bundles()
    own = [sum((vals[i][o] for o in bundles[i]), ZERO) for i in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            other = sum((vals[i][o] for o in bundles[j]), ZERO)
            candidates = [ZERO] + [vals[i][o] for o in bundles[j]]
            if not any((own[i] + y * b) / w[i] >= (other - x * b) / w[j] for b in candidates):
                return False
    return True


def check_wwef1(instance: Instance, allocation: Allocation) -> bool:
    require_additive(instance.valuations)
    n, w = instance.n, instance.weights
    vals = instance.item_values()
    bundles = allocation.bundles()
    own = [sum((vals[i][o] for o in bundles[i]), ZERO) for i in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j or not bundles[j]:
                continue
            other = sum((vals[i][o] for o in bundles[j]), ZERO)
            ok = False
            for o in bundles[j]:
                v = vals[i][o]
                if own[i] / w[i] >= (other - v) / w[j] or (own[i] + v) / w[i] >= other / w[j]:
                    ok = True
                    break
            if not ok:
                return False
    return True
