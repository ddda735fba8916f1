import random
from fractions import Fraction as F
from itertools import product

import pytest

from wefable.flow import FlowNetwork, min_cost_max_flow


def test_single_arc():
    net = FlowNetwork(2, 0, 1)
    net.add_arc(0, 1, 3, 0)
    res = min_cost_max_flow(net)
    assert res.value == 3 and res.cost == 0 and res.flows == (3,)


def test_rejects_self_loops_and_fractional_capacity():
    net = FlowNetwork(2, 0, 1)
    with pytest.raises(ValueError):
        net.add_arc(0, 0, 1)
    with pytest.raises(ValueError):
        net.add_arc(0, 1, 1.5)


def quota_network(vals, quotas):
    """source -> agent (quota) -> item (value) -> sink, as built for weighted matching."""
    n, m = len(vals), len(vals[0])
    net = FlowNetwork(n + m + 2, 0, n + m + 1)
    for i in range(n):
        net.add_arc(0, 1 + i, quotas[i], 0)
    arcs = {}
    for i in range(n):
        for o in range(m):
            arcs[net.add_arc(1 + i, 1 + n + o, 1, -vals[i][o])] = (i, o)
    for o in range(m):
        net.add_arc(1 + n + o, n + m + 1, 1, 0)
    return net, arcs


def best_quota_assignment(vals, quotas):
    """Exhaustive: every item to an agent or unassigned, quotas respected, max flow first."""
    n, m = len(vals), len(vals[0])
    best = None
    for owners in product(range(-1, n), repeat=m):
        load = [owners.count(i) for i in range(n)]
        if any(l > q for l, q in zip(load, quotas)):
            continue
        key = (sum(load), sum((vals[i][o] for o, i in enumerate(owners) if i >= 0), F(0)))
        if best is None or key > best:
            best = key
    return best


def check_flow(net, res):
    flows = res.flows
    for k, (u, v, cap, _) in enumerate(net.arcs):
        assert 0 <= flows[k] <= cap
    for node in range(net.nodes):
        if node in (net.source, net.sink):
            continue
        inflow = sum(f for f, a in zip(flows, net.arcs) if a[1] == node)
        outflow = sum(f for f, a in zip(flows, net.arcs) if a[0] == node)
        assert inflow == outflow


def test_matches_exhaustive_assignment():
    rng = random.Random(17)
    for _ in range(150):
        n, m = rng.randint(1, 3), rng.randint(1, 6)
        quotas = [rng.randint(1, 2) for _ in range(n)]
        vals = [[F(rng.randint(0, 9), rng.choice([1, 2, 3])) for _ in range(m)] for _ in range(n)]
        net, _ = quota_network(vals, quotas)
        res = min_cost_max_flow(net)
        check_flow(net, res)
        flow, value = best_quota_assignment(vals, quotas)
        assert res.value == flow
        assert -res.cost == value


def test_weighted_example_round():
    # agent 0 may take 1 item, agent 1 takes 10; nine zero-value fillers
    vals = [[5, 7] + [0] * 9, [10, 8] + [0] * 9]
    net, arcs = quota_network(vals, [1, 10])
    res = min_cost_max_flow(net)
    assert res.value == 11
    real = {o: i for a, (i, o) in arcs.items() if res.flows[a] and o < 2}
    assert real == {0: 1, 1: 1}


def test_deterministic():
    vals = [[1, 1, 1], [1, 1, 1]]
    a = min_cost_max_flow(quota_network(vals, [1, 2])[0]).flows
    b = min_cost_max_flow(quota_network(vals, [1, 2])[0]).flows
    assert a == b
