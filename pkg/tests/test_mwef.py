import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from helpers import rand_additive, rand_allocation, rand_any
from wefable.envy import is_wef, is_wefable, min_subsidy_vector
from wefable.errors import NegativeBudget, NotWefable
from wefable.model import Additive, Allocation, IdenticalAdditive, Instance, Outcome
from wefable.mwef import distribute_budget, is_mwef
from wefable.oracle import simulate_budget_discrete

HEAVY_GETS_ALL = Instance((1, F(7, 2)), IdenticalAdditive([1, 1, 1]))
ALL_TO_2 = Allocation((1, 1, 1), 2)


def wefable_cases(seed, count, maker=rand_any):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n, m = rng.randint(1, 4), rng.randint(0, 5)
        inst = maker(rng, n, m)
        X = rand_allocation(rng, n, m)
        if is_wefable(inst, X).wefable:
            out.append((inst, X))
    return out


def test_zero_budget_pays_nothing():
    res = distribute_budget(HEAVY_GETS_ALL, ALL_TO_2, 0)
    assert res.subsidies == (0, 0)
    assert res.requirement == F(6, 7)


def test_partial_budget_goes_to_the_envious():
    res = distribute_budget(HEAVY_GETS_ALL, ALL_TO_2, F(1, 2))
    assert res.subsidies == (F(1, 2), 0)
    assert is_mwef(HEAVY_GETS_ALL, ALL_TO_2, res.subsidies)


def test_full_requirement_gives_min_subsidy():
    res = distribute_budget(HEAVY_GETS_ALL, ALL_TO_2, F(6, 7))
    assert res.subsidies == min_subsidy_vector(HEAVY_GETS_ALL, ALL_TO_2)


def test_surplus_split_by_weight():
    res = distribute_budget(HEAVY_GETS_ALL, ALL_TO_2, F(6, 7) + 9)
    assert res.subsidies == (F(6, 7) + 2, 7)
    assert is_wef(HEAVY_GETS_ALL, Outcome(ALL_TO_2, res.subsidies))


def test_rejects_negative_budget_and_unwefable():
    with pytest.raises(NegativeBudget):
        distribute_budget(HEAVY_GETS_ALL, ALL_TO_2, -1)
    crossed = Instance((1, 10), Additive([[5, 7], [10, 8]]))
    with pytest.raises(NotWefable):
        distribute_budget(crossed, Allocation((0, 1), 2), 1)


def test_random_budgets_spend_exactly_and_stay_mwef():
    for inst, X in wefable_cases(5, 120):
        need = sum(min_subsidy_vector(inst, X), F(0))
        for d in [F(0), need / 3, need / 2, need, need + F(5, 3)]:
            res = distribute_budget(inst, X, d)
            assert res.total == d
            assert all(p >= 0 for p in res.subsidies)
            assert is_mwef(inst, X, res.subsidies)
            if d >= need:
                assert is_wef(inst, Outcome(X, res.subsidies))


def test_levels_fall_as_budget_grows():
    for inst, X in wefable_cases(6, 40):
        need = sum(min_subsidy_vector(inst, X), F(0))
        grid = [need * k / 8 for k in range(9)]
        prev = None
        for d in grid:
            top = max(distribute_budget(inst, X, d).levels)
            if prev is not None:
                assert top <= prev
            prev = top
        if need:
            assert prev == 0


def test_subsidies_grow_with_budget():
    for inst, X in wefable_cases(7, 40):
        need = sum(min_subsidy_vector(inst, X), F(0))
        prev = None
        for k in range(11):
            p = distribute_budget(inst, X, need * k / 10).subsidies
            if prev is not None:
                assert all(a >= b for a, b in zip(p, prev))
            prev = p


def test_matches_discrete_simulation():
    worst = F(0)
    for inst, X in wefable_cases(8, 25, rand_additive):
        need = sum(min_subsidy_vector(inst, X), F(0))
        if not need:
            continue
        d = need * F(2, 3)
        steps = 20000
        exact = distribute_budget(inst, X, d).subsidies
        approx = simulate_budget_discrete(inst, X, d, steps=steps)
        eps = d / steps
        dev = max(abs(a - b) for a, b in zip(exact, approx)) / eps
        worst = max(worst, dev)
    # within a few pour slices of the continuous answer
    assert worst <= 2


@given(st.integers(0, 30), st.integers(1, 6))
def test_single_pair_closed_form(a, b):
    # two agents, agent 1 holds everything: only agent 0 envies, so it absorbs the budget
    inst = Instance((1, 1), IdenticalAdditive([b] * 2))
    X = Allocation((1, 1), 2)
    d = F(a, 10)
    res = distribute_budget(inst, X, d)
    need = 2 * b
    if d <= need:
        assert res.subsidies == (d, 0)
    else:
        assert res.subsidies == (need + (d - need) / 2, (d - need) / 2)
