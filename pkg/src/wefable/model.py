"""Exact-arithmetic domain types.

Every number in the core is a :class:`fractions.Fraction`. Valuation profiles
are small immutable classes sharing one interface: ``value(agent, bundle)``,
plus ``item_value`` for the additive family.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import UnsupportedProfile

Rational = Fraction

TABLE_MAX_ITEMS = 20


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings. Floats are rejected."""
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


def _rtuple(xs) -> tuple[Fraction, ...]:
    return tuple(as_rational(x) for x in xs)


def _check_items(bundle: Iterable[int], m: int) -> tuple[int, ...]:
    items = tuple(bundle)
    for o in items:
        if not 0 <= o < m:
            raise IndexError(f"item {o} out of range for m={m}")
    return items


class Profile:
    kind = "abstract"
    additive = False
    n: int | None = None
    m: int = 0

    def value(self, agent: int, bundle: Iterable[int]) -> Fraction:
        raise NotImplementedError

    def _agent(self, agent: int, n: int | None = None) -> None:
        limit = self.n if n is None else n
        if agent < 0 or (limit is not None and agent >= limit):
            raise IndexError(f"agent {agent} out of range")


@dataclass(frozen=True)
class Additive(Profile):
    matrix: tuple[tuple[Fraction, ...], ...]
    kind = "additive"
    additive = True

    def __post_init__(self):
        rows = tuple(_rtuple(r) for r in self.matrix)
        object.__setattr__(self, "matrix", rows)
        if len({len(r) for r in rows}) > 1:
            raise ValueError("ragged valuation matrix")
        if any(x < 0 for r in rows for x in r):
            raise ValueError("item values must be non-negative")

    @property
    def n(self) -> int:
        return len(self.matrix)

    @property
    def m(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def item_value(self, agent: int, item: int) -> Fraction:
        return self.matrix[agent][item]

    def value(self, agent, bundle):
        self._agent(agent)
        row = self.matrix[agent]
        return sum((row[o] for o in _check_items(bundle, self.m)), Fraction(0))


@dataclass(frozen=True)
class Binary(Additive):
    kind = "binary"

    def __post_init__(self):
        super().__post_init__()
        if any(x not in (0, 1) for r in self.matrix for x in r):
            raise ValueError("binary valuations take values 0 or 1 only")


@dataclass(frozen=True)
class IdenticalAdditive(Profile):
    """One additive valuation shared by every agent."""

    items: tuple[Fraction, ...]
    kind = "identical_additive"
    additive = True

    def __post_init__(self):
        object.__setattr__(self, "items", _rtuple(self.items))
        if any(x < 0 for x in self.items):
            raise ValueError("item values must be non-negative")

    @property
    def m(self) -> int:
        return len(self.items)

    def item_value(self, agent, item):
        return self.items[item]

    def value(self, agent, bundle):
        self._agent(agent)
        return sum((self.items[o] for o in _check_items(bundle, self.m)), Fraction(0))


@dataclass(frozen=True)
class IdenticalItems(Profile):
    """All items are copies; agent i values each copy at per_agent[i]."""

    per_agent: tuple[Fraction, ...]
    count: int
    kind = "identical_items"
    additive = True

    def __post_init__(self):
        object.__setattr__(self, "per_agent", _rtuple(self.per_agent))
        if any(x < 0 for x in self.per_agent):
            raise ValueError("item values must be non-negative")
        if self.count < 0:
            raise ValueError("item count must be non-negative")

    @property
    def n(self) -> int:
        return len(self.per_agent)

    @property
    def m(self) -> int:
        return self.count

    def item_value(self, agent, item):
        return self.per_agent[agent]

    def value(self, agent, bundle):
        self._agent(agent)
        return self.per_agent[agent] * len(_check_items(bundle, self.m))


@dataclass(frozen=True)
class Capped(Profile):
    """v_i(A) = min(k_i, |A|): a uniform-matroid rank function."""

    caps: tuple[Fraction, ...]
    count: int

    kind = "capped"

    def __post_init__(self):
        object.__setattr__(self, "caps", _rtuple(self.caps))
        if any(k < 0 for k in self.caps):
            raise ValueError("caps must be non-negative")

    @property
    def n(self) -> int:
        return len(self.caps)

    @property
    def m(self) -> int:
        return self.count

    def value(self, agent, bundle):
        self._agent(agent)
        return min(self.caps[agent], Fraction(len(_check_items(bundle, self.m))))


@dataclass(frozen=True)
class Table(Profile):
    """Explicit valuations: bundles[i][mask] is agent i's value for the item set ``mask``."""

    bundles: tuple[tuple[Fraction, ...], ...]
    count: int
    kind = "table"

    def __post_init__(self):
        if self.count > TABLE_MAX_ITEMS:
            raise ValueError(f"table valuations support at most {TABLE_MAX_ITEMS} items")
        rows = tuple(_rtuple(r) for r in self.bundles)
        object.__setattr__(self, "bundles", rows)
        size = 1 << self.count
        for i, row in enumerate(rows):
            if len(row) != size:
                raise ValueError(f"agent {i}: expected {size} bundle values, got {len(row)}")
            if row[0] != 0:
                raise ValueError(f"agent {i}: value of the empty bundle must be 0")
            for mask in range(size):
                for o in range(self.count):
                    bit = 1 << o
                    if not mask & bit and row[mask] > row[mask | bit]:
                        raise ValueError(f"agent {i}: valuation is not monotone at bundle {mask}")

    @property
    def n(self) -> int:
        return len(self.bundles)

    @property
    def m(self) -> int:
        return self.count

    def value(self, agent, bundle):
        self._agent(agent)
        return self.bundles[agent][bundle_mask(_check_items(bundle, self.m))]

    @classmethod
    def from_function(cls, n: int, m: int, fn) -> "Table":
        rows = [[fn(i, mask_items(mask, m)) for mask in range(1 << m)] for i in range(n)]
        return cls(rows, m)


def bundle_mask(items: Iterable[int]) -> int:
    mask = 0
    for o in items:
        mask |= 1 << o
    return mask


def mask_items(mask: int, m: int) -> tuple[int, ...]:
    return tuple(o for o in range(m) if mask >> o & 1)


def value(profile: Profile, agent: int, bundle: Iterable[int]) -> Fraction:
    return profile.value(agent, bundle)


def require_additive(profile: Profile) -> None:
    if not profile.additive:
        raise UnsupportedProfile(profile.kind, "an additive profile")


def require_kind(profile: Profile, *kinds: str) -> None:
    if profile.kind not in kinds:
        raise UnsupportedProfile(profile.kind, " or ".join(repr(k) for k in kinds))


@dataclass(frozen=True)
class Instance:
    weights: tuple[Fraction, ...]
    valuations: Profile

    def __post_init__(self):
        w = _rtuple(self.weights)
        object.__setattr__(self, "weights", w)
        if not w:
            raise ValueError("an instance needs at least one agent")
        if any(x <= 0 for x in w):
            raise ValueError("weights must be positive")
        pn = self.valuations.n
        if pn is not None and pn != len(w):
            raise ValueError(f"{len(w)} weights but valuations for {pn} agents")

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def m(self) -> int:
        return self.valuations.m

    @property
    def W(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    @property
    def w_min(self) -> Fraction:
        return min(self.weights)

    @property
    def weights_sorted_ascending(self) -> bool:
        return all(a <= b for a, b in zip(self.weights, self.weights[1:]))

    def value(self, agent: int, bundle: Iterable[int]) -> Fraction:
        if not 0 <= agent < self.n:
            raise IndexError(f"agent {agent} out of range")
        return self.valuations.value(agent, bundle)

    def bundle_values(self, allocation: "Allocation") -> list[list[Fraction]]:
        """vals[i][j] = v_i(X_j)."""
        if allocation.n != self.n or allocation.m != self.m:
            raise ValueError(
                f"allocation is {allocation.n}x{allocation.m}, instance is {self.n}x{self.m}"
            )
        bundles = allocation.bundles()
        return [[self.value(i, b) for b in bundles] for i in range(self.n)]

    def item_values(self) -> list[list[Fraction]]:
        """n x m item-value matrix for additive profiles."""
        require_additive(self.valuations)
        p = self.valuations
        return [[p.item_value(i, o) for o in range(self.m)] for i in range(self.n)]


@dataclass(frozen=True)
class Allocation:
    """Complete allocation given by the owner of each item."""

    owners: tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "owners", tuple(int(a) for a in self.owners))
        if self.n < 1:
            raise ValueError("an allocation needs at least one agent")
        for o, a in enumerate(self.owners):
            if not 0 <= a < self.n:
                raise ValueError(f"item {o} has owner {a}, outside 0..{self.n - 1}")

    @property
    def m(self) -> int:
        return len(self.owners)

    def bundles(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for o, a in enumerate(self.owners):
            out[a].append(o)
        return tuple(tuple(b) for b in out)

    def bundle(self, agent: int) -> tuple[int, ...]:
        return tuple(o for o, a in enumerate(self.owners) if a == agent)

    def counts(self) -> tuple[int, ...]:
        c = [0] * self.n
        for a in self.owners:
            c[a] += 1
        return tuple(c)

    @classmethod
    def from_bundles(cls, bundles: Sequence[Iterable[int]], m: int | None = None) -> "Allocation":
        bundles = [list(b) for b in bundles]
        seen = sorted(o for b in bundles for o in b)
        if m is None:
            m = len(seen)
        if seen != list(range(m)):
            raise ValueError("bundles must partition the items 0..m-1")
        owners = [0] * m
        for a, b in enumerate(bundles):
            for o in b:
                owners[o] = a
        return cls(tuple(owners), len(bundles))

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> "Allocation":
        """Hand out items 0..m-1 in index order: agent 0 first, then agent 1, ..."""
        owners: list[int] = []
        for a, c in enumerate(counts):
            if c < 0:
                raise ValueError("counts must be non-negative")
            owners.extend([a] * c)
        return cls(tuple(owners), len(counts))


@dataclass(frozen=True)
class Outcome:
    allocation: Allocation
    subsidies: tuple[Fraction, ...]

    def __post_init__(self):
        p = _rtuple(self.subsidies)
        object.__setattr__(self, "subsidies", p)
        if len(p) != self.allocation.n:
            raise ValueError("one subsidy per agent required")
        if any(x < 0 for x in p):
            raise ValueError("subsidies must be non-negative")

    @property
    def total(self) -> Fraction:
        return sum(self.subsidies, Fraction(0))


def normalize_weights(weights: Sequence) -> tuple[int, ...]:
    """The unique coprime positive-integer vector proportional to ``weights``."""
    w = _rtuple(weights)
    if any(x <= 0 for x in w):
        raise ValueError("weights must be positive")
    den = reduce(lcm, (x.denominator for x in w), 1)
    ints = [int(x * den) for x in w]
    g = reduce(gcd, ints)
    return tuple(x // g for x in ints)


def vmax(instance: Instance) -> Fraction:
    """V = max over agents and nonempty bundles A of v_i(A)/|A|."""
    p = instance.valuations
    m = instance.m
    if m == 0:
        raise ValueError("V is undefined without items")
    if p.additive:
        return max(p.item_value(i, o) for i in range(instance.n) for o in range(m))
    if isinstance(p, Capped):
        # min(k, s)/s peaks at s = 1
        return max(min(k, Fraction(1)) for k in p.caps)
    if isinstance(p, Table):
        best = Fraction(0)
        for row in p.bundles:
            for mask in range(1, 1 << m):
                best = max(best, row[mask] / mask.bit_count())
        return best
    best = Fraction(0)
    for i in range(instance.n):
        for s in range(1, m + 1):
            for A in combinations(range(m), s):
                best = max(best, p.value(i, A) / s)
    return best
