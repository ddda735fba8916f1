"""Exact min-cost max-flow by successive shortest paths with potentials."""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction

ZERO = 0


@dataclass
class FlowNetwork:
    nodes: int
    source: int
    sink: int
    arcs: list[tuple[int, int, int, int | Fraction]] = field(default_factory=list)

    def add_arc(self, u: int, v: int, cap: int, cost=0) -> int:
        if u == v:
            raise ValueError("self-loops are not allowed")
        if cap < 0 or int(cap) != cap:
            raise ValueError("capacities must be non-negative integers")
        if not (0 <= u < self.nodes and 0 <= v < self.nodes):
            raise IndexError("arc endpoint out of range")
        # ints stay ints (much faster); anything else becomes an exact Fraction
        self.arcs.append((u, v, int(cap), cost if type(cost) is int else Fraction(cost)))
        return len(self.arcs) - 1


@dataclass(frozen=True)
class FlowResult:
    value: int
    flows: tuple[int, ...]
    cost: Fraction


def min_cost_max_flow(net: FlowNetwork) -> FlowResult:
    """Maximum flow of minimum cost. The network must not hold negative cycles.

    Arcs are scanned in insertion order and Dijkstra pops equal distances by
    lowest node index, so the result is a function of the arc list alone.
    """
    n, s, t = net.nodes, net.source, net.sink
    # residual arcs: 2k forward, 2k+1 backward
    to: list[int] = []
    cap: list[int] = []
    cost: list[Fraction] = []
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v, c, w in net.arcs:
        adj[u].append(len(to))
        to.append(v); cap.append(c); cost.append(w)
        adj[v].append(len(to))
        to.append(u); cap.append(0); cost.append(-w)

    # Bellman-Ford for initial potentials (arcs carry negative costs)
    pot: list[Fraction | None] = [None] * n
    pot[s] = ZERO
    for _ in range(n - 1):
        changed = False
        for u in range(n):
            if pot[u] is None:
                continue
            for e in adj[u]:
                if cap[e] > 0:
                    c = pot[u] + cost[e]
                    if pot[to[e]] is None or c < pot[to[e]]:
                        pot[to[e]] = c
                        changed = True
        if not changed:
            break
    potential = [p if p is not None else ZERO for p in pot]

    value = 0
    total = ZERO
    while True:
        dist: list[Fraction | None] = [None] * n
        via = [-1] * n
        dist[s] = ZERO
        heap = [(ZERO, s)]
        done = [False] * n
        while heap:
            d, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for e in adj[u]:
                if cap[e] <= 0:
                    continue
                v = to[e]
                if done[v]:
                    continue
                nd = d + cost[e] + potential[u] - potential[v]
                if dist[v] is None or nd < dist[v]:
                    dist[v] = nd
                    via[v] = e
                    heapq.heappush(heap, (nd, v))
        if dist[t] is None:
            break
        for v in range(n):
            if dist[v] is not None:
                potential[v] += dist[v]
        push = None
        v = t
        while v != s:
            e = via[v]
            push = cap[e] if push is None else min(push, cap[e])
            v = to[e ^ 1]
        v = t
        while v != s:
            e = via[v]
            cap[e] -= push
            cap[e ^ 1] += push
            total += push * cost[e]
            v = to[e ^ 1]
        value += push
    flows = tuple(cap[2 * k + 1] for k in range(len(net.arcs)))
    return FlowResult(value, flows, Fraction(total))
