"""Allocation procedures that guarantee WEF-ability with bounded subsidy."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from functools import reduce
from math import ceil, lcm
from typing import Sequence

from .envy import is_wef, min_subsidy_vector
from .errors import DuplicateValues, NotSuperadditive, TooLarge, ZeroTotalValue
from .flow import FlowNetwork, min_cost_max_flow
from .model import (
    Allocation,
    Capped,
    Instance,
    Outcome,
    Table,
    normalize_weights,
    require_additive,
    require_kind,
    vmax,
)

ZERO = Fraction(0)
MSW_MAX_ITEMS = 12


@dataclass(frozen=True)
class TransferPath:
    agents: tuple[int, ...]  # u first; the unallocated pool is implied after the last agent
    items: tuple[int, ...]  # items[k] moves to agents[k]

    def as_dict(self) -> dict:
        return {"agents": list(self.agents), "items": list(self.items)}


@dataclass(frozen=True)
class AllocatorReport:
    allocation: Allocation
    subsidies: tuple[Fraction, ...]
    theoretical_bound: Fraction
    trace: tuple[dict, ...] = ()
    per_agent_bounds: tuple[Fraction, ...] | None = None

    @property
    def total_subsidy(self) -> Fraction:
        return sum(self.subsidies, ZERO)


def _report(instance, allocation, bound, trace=(), per_agent=None) -> AllocatorReport:
    return AllocatorReport(
        allocation,
        min_subsidy_vector(instance, allocation),
        Fraction(bound),
        tuple(trace),
        None if per_agent is None else tuple(Fraction(b) for b in per_agent),
    )


def _vmax_or_zero(instance: Instance) -> Fraction:
    return vmax(instance) if instance.m else ZERO


def allocate_all_to_best(instance: Instance) -> AllocatorReport:
    """Give every item to the agent who values the grand bundle most."""
    n, m = instance.n, instance.m
    everything = range(m)
    totals = [instance.value(i, everything) for i in range(n)]
    best = max(range(n), key=lambda i: (totals[i], -i))
    alloc = Allocation((best,) * m, n)
    bound = (instance.W / instance.w_min - 1) * m * _vmax_or_zero(instance)
    return _report(instance, alloc, bound, [{"agent": best, "value": str(totals[best])}])


# --- welfare maximization and VCG ------------------------------------------


def social_welfare(instance: Instance, allocation: Allocation, agents=None) -> Fraction:
    bundles = allocation.bundles()
    idx = range(instance.n) if agents is None else agents
    return sum((instance.value(i, bundles[i]) for i in idx), ZERO)


def msw_bruteforce(instance: Instance, agents: Sequence[int] | None = None,
                   items: Sequence[int] | None = None) -> Allocation:
    """Welfare-maximizing split of ``items`` among ``agents``.

    Items outside ``items`` stay with their index-0 default owner only in the
    sense that they are not considered; the returned allocation places them on
    the first listed agent so it stays complete. Ties keep the
    lexicographically first owner vector.
    """
    n, m = instance.n, instance.m
    agents = list(range(n)) if agents is None else sorted(agents)
    items = list(range(m)) if items is None else sorted(items)
    if len(items) > MSW_MAX_ITEMS:
        raise TooLarge(f"welfare enumeration capped at {MSW_MAX_ITEMS} items, got {len(items)}")
    if not agents:
        raise ValueError("at least one agent is required")
    best = None
    best_owner = None
    for choice in product(agents, repeat=len(items)):
        bundles = {a: [] for a in agents}
        for o, a in zip(items, choice):
            bundles[a].append(o)
        sw = sum((instance.value(a, bundles[a]) for a in agents), ZERO)
        if best is None or sw > best:
            best, best_owner = sw, choice
    owners = [agents[0]] * m
    for o, a in zip(items, best_owner):
        owners[o] = a
    return Allocation(tuple(owners), n)


def is_superadditive(instance: Instance) -> bool:
    p = instance.valuations
    if p.additive:
        return True
    if isinstance(p, Capped):
        return all(k == 0 or k >= p.m for k in p.caps)
    if isinstance(p, Table):
        full = (1 << p.m) - 1
        for row in p.bundles:
            for a in range(1, full + 1):
                rest = full & ~a
                b = rest
                while b:
                    if b > a and row[a] + row[b] > row[a | b]:
                        return False
                    b = (b - 1) & rest
        return True
    raise NotImplementedError(p.kind)


@dataclass(frozen=True)
class VcgOutcome:
    outcome: Outcome
    payments: tuple[Fraction, ...]
    upfront: Fraction


def vcg_outcome(instance: Instance) -> VcgOutcome:
    """Welfare-maximizing allocation, VCG payments, and an up-front per-weight grant."""
    if not is_superadditive(instance):
        raise NotSuperadditive("valuations are not superadditive")
    n, m = instance.n, instance.m
    X = msw_bruteforce(instance)
    q = []
    for i in range(n):
        others = [a for a in range(n) if a != i]
        if not others:
            q.append(ZERO)
            continue
        Xi = msw_bruteforce(instance, agents=others)
        q.append(social_welfare(instance, Xi, others) - social_welfare(instance, X, others))
    C = m * _vmax_or_zero(instance) / instance.w_min
    p = tuple(C * w - qi for w, qi in zip(instance.weights, q))
    return VcgOutcome(Outcome(X, p), tuple(q), C)


# --- Algorithm 1: repeated weighted matching for additive valuations ---------


def alg1_additive(instance: Instance) -> AllocatorReport:
    require_additive(instance.valuations)
    n, m = instance.n, instance.m
    w = normalize_weights(instance.weights)
    Wn = sum(w)
    vals = instance.item_values()
    den = reduce(lcm, (x.denominator for r in vals for x in r), 1)
    cost = [[int(x * den) for x in r] for r in vals]  # exact integer rescaling
    owners = [0] * m
    trace = []
    remaining = list(range(m))
    rounds = ceil(m / Wn)
    for t in range(rounds):
        items = remaining
        slots = max(Wn, len(items))
        k = slots  # real items first, then zero-value dummies
        # nodes: 0 source, 1..n agents, n+1..n+k items, n+k+1 sink
        s, sink = 0, n + k + 1
        net = FlowNetwork(n + k + 2, s, sink)
        for i in range(n):
            net.add_arc(s, 1 + i, w[i], 0)
        item_arc = {}
        for i in range(n):
            for c in range(k):
                v = cost[i][items[c]] if c < len(items) else 0
                item_arc[net.add_arc(1 + i, n + 1 + c, 1, -v)] = (i, c)
        for c in range(k):
            net.add_arc(n + 1 + c, sink, 1, 0)
        res = min_cost_max_flow(net)
        taken = []
        got = {i: [] for i in range(n)}
        for a, (i, c) in item_arc.items():
            if res.flows[a] and c < len(items):
                owners[items[c]] = i
                taken.append(items[c])
                got[i].append(items[c])
        trace.append({"round": t, "matching": {str(i): got[i] for i in range(n)}})
        taken_set = set(taken)
        remaining = [o for o in items if o not in taken_set]
    assert not remaining
    V = _vmax_or_zero(instance)
    bound = (Wn - min(w)) * V
    return _report(instance, Allocation(tuple(owners), n), bound, trace, [wi * V for wi in w])


# --- Algorithm 2: identical additive valuations ----------------------------


def alg2_identical_additive(instance: Instance) -> AllocatorReport:
    require_kind(instance.valuations, "identical_additive")
    n, m = instance.n, instance.m
    w = instance.weights
    item = instance.valuations.items
    held = [ZERO] * n
    owners = []
    trace = []
    for o in range(m):
        # smallest ratio; ties to larger weight, then larger index
        u = min(range(n), key=lambda i: ((held[i] + item[o]) / w[i], -w[i], -i))
        held[u] += item[o]
        owners.append(u)
        trace.append({"item": o, "agent": u})
    V = _vmax_or_zero(instance)
    return _report(instance, Allocation(tuple(owners), n), (n - 1) * V, trace, [V] * n)


# --- Algorithm 3: binary valuations via transfer paths ---------------------


def _transfer_path(vals, owners, pool, u, n) -> TransferPath | None:
    """Shortest chain u -> ... -> pool along which items can shift by one."""
    def takes_from_pool(i):
        return next((o for o in pool if vals[i][o] == 1), None)

    parent = {u: None}
    queue = deque([u])
    while queue:
        i = queue.popleft()
        o = takes_from_pool(i)
        if o is not None:
            agents = []
            a = i
            while a is not None:
                agents.append(a)
                a = parent[a]
            agents.reverse()
            moved = []
            for a, b in zip(agents, agents[1:]):
                moved.append(min(x for x in range(len(owners)) if owners[x] == b and vals[a][x] == 1))
            moved.append(o)
            return TransferPath(tuple(agents), tuple(moved))
        for j in range(n):
            if j in parent:
                continue
            if any(owners[x] == j and vals[i][x] == 1 for x in range(len(owners))):
                parent[j] = i
                queue.append(j)
    return None


def alg3_binary(instance: Instance) -> AllocatorReport:
    require_kind(instance.valuations, "binary")
    n, m = instance.n, instance.m
    w = instance.weights
    vals = instance.valuations.matrix
    owners: list[int | None] = [None] * m
    size = [0] * n
    R = set(range(n))
    trace = []
    while True:
        paths = {}
        for i in sorted(R):
            pool = [o for o in range(m) if owners[o] is None]
            path = _transfer_path(vals, owners, pool, i, n)
            if path is None:
                R.discard(i)
            else:
                paths[i] = path
        if not R:
            break
        u = max(R, key=lambda i: (w[i] / (size[i] + 1), w[i], i))
        path = paths[u]
        for a, o in zip(path.agents, path.items):
            owners[o] = a
        size[u] += 1
        trace.append({"agent": u, "path": path.as_dict()})
    # anything still unallocated is worth 0 to every agent; park it with agent 0
    leftover = [o for o in range(m) if owners[o] is None]
    for o in leftover:
        owners[o] = 0
    if leftover:
        trace.append({"unvalued_items_to": 0, "items": leftover})
    wmin = min(w)
    if n >= 2:
        w2 = sorted(w)[1]
        W = instance.W
        bound = max((W - wmin) / w2, (W - w2) / wmin)
    else:
        bound = ZERO
    return _report(instance, Allocation(tuple(owners), n), bound, trace, [wi / wmin for wi in w])


# --- Algorithm 4 and the DP for identical items -----------------------------


def identical_items_order(per_agent: Sequence[Fraction], descending: bool) -> list[int]:
    idx = list(range(len(per_agent)))
    return sorted(idx, key=lambda i: -per_agent[i]) if descending else sorted(idx, key=lambda i: per_agent[i])


def alg4_identical_items(instance: Instance) -> AllocatorReport:
    require_kind(instance.valuations, "identical_items")
    n, m = instance.n, instance.m
    v = instance.valuations.per_agent
    order = identical_items_order(v, descending=True)
    ws = [instance.weights[a] for a in order]
    cnt = [0] * n  # by sorted position
    trace = []
    for o in range(m):
        pick = 0
        for i in range(1, n):
            if Fraction(1 + cnt[i]) / ws[i] <= Fraction(cnt[i - 1]) / ws[i - 1]:
                pick = i
        cnt[pick] += 1
        trace.append({"item": o, "agent": order[pick]})
    counts = [0] * n
    for pos, a in enumerate(order):
        counts[a] = cnt[pos]
    V = _vmax_or_zero(instance)
    per_agent = [ZERO] * n
    harmonic = ZERO
    for pos, a in enumerate(order):
        harmonic += 1 / ws[pos]
        per_agent[a] = V * ws[pos] * harmonic
    bound = sum((per_agent[a] for a in order[1:]), ZERO)
    trace.insert(0, {"order_descending_value": order})
    return _report(instance, Allocation.from_counts(counts), bound, trace, per_agent)


@dataclass(frozen=True)
class DPResult:
    counts: tuple[int, ...]
    total: Fraction
    order: tuple[int, ...]  # agents by ascending per-item value


def dp_identical_items_optimal(instance: Instance) -> DPResult:
    """Minimum total subsidy over all WEF-able count vectors.

    Agents are processed by ascending per-item value. T[i][j][k] is the least
    subsidy paid to the first i agents when they hold j items and agent i
    holds k of them.
    """
    require_kind(instance.valuations, "identical_items")
    n, m = instance.n, instance.m
    v = instance.valuations.per_agent
    if len(set(v)) != n:
        raise DuplicateValues("per-item values must be pairwise distinct")
    order = identical_items_order(v, descending=False)
    w = [instance.weights[a] for a in order]
    vs = [v[a] for a in order]
    prefix = [ZERO]
    for x in w:
        prefix.append(prefix[-1] + x)

    # layer 0
    T = {(m0, m0): (ZERO, None) for m0 in range(m + 1)}  # key (j, k)
    layers = [T]
    for i in range(1, n):
        nxt = {}
        for j in range(m + 1):
            for k in range(j + 1):
                if w[i] * j > prefix[i + 1] * k:
                    continue
                best = None
                lim = min(j - k, w[i - 1] * k / w[i])
                for kp in range(0, j - k + 1):
                    if kp > lim:
                        break
                    prev = T.get((j - k, kp))
                    if prev is None:
                        continue
                    c = prev[0] + prefix[i] * (Fraction(k) / w[i] - Fraction(kp) / w[i - 1]) * vs[i - 1]
                    if best is None or c < best[0]:
                        best = (c, kp)
                if best is not None:
                    nxt[(j, k)] = best
        T = nxt
        layers.append(T)

    finals = [(T[(m, k)][0], k) for k in range(m + 1) if (m, k) in T]
    total, k = min(finals)
    sorted_counts = [0] * n
    j = m
    for i in range(n - 1, -1, -1):
        sorted_counts[i] = k
        kp = layers[i][(j, k)][1]
        j -= k
        k = kp
    counts = [0] * n
    for pos, a in enumerate(order):
        counts[a] = sorted_counts[pos]
    return DPResult(tuple(counts), total, tuple(order))


# --- two agents: biased weighted adjusted winner ---------------------------


def biased_adjusted_winner(instance: Instance) -> AllocatorReport:
    require_additive(instance.valuations)
    if instance.n != 2:
        raise ValueError("the adjusted-winner procedure needs exactly two agents")
    m = instance.m
    raw = instance.item_values()
    sums = [sum(r, ZERO) for r in raw]
    if any(s == 0 for s in sums):
        raise ZeroTotalValue("each agent must value the item set positively")
    a = [x / sums[0] for x in raw[0]]
    b = [x / sums[1] for x in raw[1]]
    w1, w2 = instance.weights

    def rank(o):
        if a[o] == 0 and b[o] == 0:
            return (2, ZERO)
        if b[o] == 0:
            return (0, ZERO)
        return (1, -a[o] / b[o])

    order = sorted(range(m), key=rank)
    left = ZERO
    d = None
    for r, o in enumerate(order):
        right = 1 - left - a[o]
        if left / w1 < (right + a[o]) / w2 and (left + a[o]) / w1 >= right / w2:
            d = r
            break
        left += a[o]
    assert d is not None
    owners = [0] * m
    for o in order[d + 1:]:
        owners[o] = 1
    contested = order[d]
    owners[contested] = 0 if raw[0][contested] >= raw[1][contested] else 1
    trace = [{"order": order, "contested": contested, "to": owners[contested]}]
    bound = (instance.W / instance.w_min - 1) * m * _vmax_or_zero(instance)
    return _report(instance, Allocation(tuple(owners), 2), bound, trace)
