"""Seeded random instance builders shared by the test modules."""
from __future__ import annotations

import random
from fractions import Fraction as F
from itertools import product

from wefable.model import (
    Additive,
    Allocation,
    Binary,
    Capped,
    IdenticalAdditive,
    IdenticalItems,
    Instance,
    Table,
)

WEIGHT_CHOICES = [F(1), F(2), F(3), F(4), F(1, 2), F(3, 2), F(5, 3), F(7, 2)]


def rand_weights(rng: random.Random, n: int, integer: bool = False) -> list[F]:
    if integer:
        return [F(rng.randint(1, 5)) for _ in range(n)]
    return [rng.choice(WEIGHT_CHOICES) for _ in range(n)]


def rand_additive(rng, n, m, integer_weights=False, hi=6) -> Instance:
    mat = [[F(rng.randint(0, hi), rng.choice([1, 1, 2, 3])) for _ in range(m)] for _ in range(n)]
    return Instance(rand_weights(rng, n, integer_weights), Additive(mat))


def rand_binary(rng, n, m, integer_weights=False, q=0.5) -> Instance:
    mat = [[int(rng.random() < q) for _ in range(m)] for _ in range(n)]
    return Instance(rand_weights(rng, n, integer_weights), Binary(mat))


def rand_identical_additive(rng, n, m) -> Instance:
    return Instance(rand_weights(rng, n), IdenticalAdditive([F(rng.randint(0, 5), rng.choice([1, 2])) for _ in range(m)]))


def rand_identical_items(rng, n, m, distinct=False) -> Instance:
    if distinct:
        vals = [F(v) for v in rng.sample(range(1, 12), n)]
    else:
        vals = [F(rng.randint(1, 6)) for _ in range(n)]
    return Instance(rand_weights(rng, n), IdenticalItems(vals, m))


def rand_capped(rng, n, m) -> Instance:
    return Instance(rand_weights(rng, n), Capped([F(rng.randint(0, m)) for _ in range(n)], m))


def rand_monotone_table(rng, n, m) -> Instance:
    """Random monotone table: each bundle's value is at least every subset's."""
    rows = []
    for _ in range(n):
        row = [F(0)] * (1 << m)
        for mask in range(1, 1 << m):
            floor = max(row[mask & ~(1 << o)] for o in range(m) if mask >> o & 1)
            row[mask] = floor + rng.randint(0, 3)
        rows.append(row)
    return Instance(rand_weights(rng, n), Table(rows, m))


def rand_superadditive_table(rng, n, m) -> Instance:
    """Superadditive closure of random non-negative bundle values."""
    rows = []
    for _ in range(n):
        row = [F(0)] * (1 << m)
        for mask in sorted(range(1, 1 << m), key=lambda x: bin(x).count("1")):
            best = F(rng.randint(0, 4 * bin(mask).count("1")))
            sub = (mask - 1) & mask
            while sub:
                best = max(best, row[sub] + row[mask & ~sub])
                sub = (sub - 1) & mask
            row[mask] = best
        rows.append(row)
    return Instance(rand_weights(rng, n), Table(rows, m))


def rand_any(rng, n, m) -> Instance:
    kind = rng.choice(["additive", "binary", "identical_additive", "identical_items", "capped", "table"])
    return {
        "additive": rand_additive,
        "binary": rand_binary,
        "identical_additive": rand_identical_additive,
        "identical_items": rand_identical_items,
        "capped": rand_capped,
        "table": rand_monotone_table,
    }[kind](rng, n, m)


def rand_allocation(rng, n, m) -> Allocation:
    return Allocation(tuple(rng.randrange(n) for _ in range(m)), n)


def all_allocations(n, m):
    for owners in product(range(n), repeat=m):
        yield Allocation(owners, n)
