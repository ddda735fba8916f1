"""Splitting a fixed subsidy budget so that only unenvied agents get paid.

With per-weight money r_i = p_i / w_i, every path cost in the subsidized
graph telescopes: a path from i to j costs L[i][j] + r_j - r_i, where L is
the unsubsidized longest-path table. So agent i's level is
max_j (L[i][j] + r_j) - r_i. While money flows into the leader set N* in
proportion to weight, every r_k with k in N* grows at rate 1/w(N*) per unit
of money, so each level is an upper envelope of lines in the poured amount.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .envy import build_envy_graph, cost_matrix, longest_paths
from .errors import NegativeBudget, NotWefable
from .model import Allocation, Instance

ZERO = Fraction(0)


@dataclass(frozen=True)
class BudgetedOutcome:
    subsidies: tuple[Fraction, ...]
    levels: tuple[Fraction, ...]
    events: tuple[tuple[Fraction, int], ...]  # (money spent so far, agent joining the leaders)
    requirement: Fraction  # budget that makes the allocation fully WEF

    @property
    def total(self) -> Fraction:
        return sum(self.subsidies, ZERO)


def _levels(L, rate):
    n = len(rate)
    return [max(L[i][j] + rate[j] for j in range(n)) - rate[i] for i in range(n)]


def _first_meeting(lines, top, slope):
    """Smallest x >= 0 with max(a + b*x for a, b in lines) >= top - slope*x, or None."""
    best = None
    for a, b in lines:
        if a >= top:
            return ZERO
        if b + slope > 0:
            x = (top - a) / (b + slope)
            if best is None or x < best:
                best = x
    return best


def distribute_budget(instance: Instance, allocation: Allocation, d) -> BudgetedOutcome:
    d = Fraction(d)
    if d < 0:
        raise NegativeBudget(f"budget must be non-negative, got {d}")
    n = instance.n
    w = instance.weights
    L, witness = longest_paths(build_envy_graph(instance, allocation))
    if witness is not None:
        raise NotWefable(*witness)
    ell = [max(row) for row in L]
    need = sum((wi * li for wi, li in zip(w, ell)), ZERO)

    if d >= need:
        surplus = d - need
        W = instance.W
        p = tuple(wi * li + surplus * wi / W for wi, li in zip(w, ell))
        lv = tuple(_levels(L, [pi / wi for pi, wi in zip(p, w)]))
        return BudgetedOutcome(p, lv, (), need)

    rate = [ZERO] * n
    top = max(ell)
    leaders = [i for i in range(n) if ell[i] == top]
    events = [(ZERO, i) for i in leaders]
    spent = ZERO
    while spent < d:
        inside = set(leaders)
        r = 1 / sum((w[i] for i in leaders), ZERO)
        # next moment an outside agent's envelope reaches the falling common level
        nxt = None
        joiners: list[int] = []
        for j in range(n):
            if j in inside:
                continue
            lines = [(L[j][k] + rate[k] - rate[j], r if k in inside else ZERO) for k in range(n)]
            x = _first_meeting(lines, top, r)
            if x is None:
                continue
            if nxt is None or x < nxt:
                nxt, joiners = x, [j]
            elif x == nxt:
                joiners.append(j)
        event = nxt is not None and spent + nxt < d
        step = nxt if event else d - spent
        for k in leaders:
            rate[k] += step * r
        top -= step * r
        spent += step
        if event:
            for j in joiners:
                leaders.append(j)
                events.append((spent, j))
    p = tuple(wi * ri for wi, ri in zip(w, rate))
    return BudgetedOutcome(p, tuple(_levels(L, rate)), tuple(events), need)


def subsidized_envy_costs(instance: Instance, allocation: Allocation, subsidies):
    return cost_matrix(instance, instance.bundle_values(allocation), subsidies)


def is_mwef(instance: Instance, allocation: Allocation, subsidies) -> bool:
    """Paid agents are never envied once subsidies are counted."""
    cost = subsidized_envy_costs(instance, allocation, subsidies)
    n = instance.n
    return all(cost[i][j] <= 0 for j in range(n) if subsidies[j] > 0 for i in range(n))
