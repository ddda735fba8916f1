"""Seeded random instances. Values are integers so all arithmetic stays exact."""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .model import Additive, Binary, IdenticalAdditive, IdenticalItems, Instance

DISTRIBUTIONS = ("discrete_uniform", "bernoulli", "identical_uniform", "per_agent_uniform")


def default_seed() -> int:
    return int(os.environ.get("WEF_SEED", "0"))


@dataclass(frozen=True)
class Distribution:
    name: str
    lo: int = 0
    hi: int = 1
    q: float = 0.5

    def __post_init__(self):
        if self.name not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.name!r}; choose from {', '.join(DISTRIBUTIONS)}")
        if self.name != "bernoulli" and self.lo > self.hi:
            raise ValueError("lo must not exceed hi")

    @property
    def max_value(self) -> int:
        return 1 if self.name == "bernoulli" else self.hi

    @classmethod
    def parse(cls, text: str) -> "Distribution":
        """'discrete_uniform(5,6)', 'bernoulli(0.5)', 'identical_uniform(1,2)'."""
        text = text.strip()
        name, _, rest = text.partition("(")
        args = [a.strip() for a in rest.rstrip(")").split(",") if a.strip()]
        name = name.strip()
        if name == "bernoulli":
            return cls(name, q=float(args[0]) if args else 0.5)
        if len(args) != 2:
            raise ValueError(f"{name} needs two integer bounds, e.g. {name}(5,6)")
        return cls(name, int(args[0]), int(args[1]))

    def __str__(self) -> str:
        if self.name == "bernoulli":
            return f"bernoulli({self.q})"
        return f"{self.name}({self.lo},{self.hi})"


def trial_rng(seed: int, *counter: int) -> np.random.Generator:
    """Independent stream per (seed, m, trial) so trials can run in any order."""
    return np.random.default_rng([seed, *counter])


def random_instance(dist: Distribution, n: int, m: int, rng: np.random.Generator,
                    weights=None) -> Instance:
    w = tuple(Fraction(x) for x in (weights if weights is not None else range(1, n + 1)))
    if dist.name == "discrete_uniform":
        prof = Additive(rng.integers(dist.lo, dist.hi + 1, size=(n, m)).tolist())
    elif dist.name == "bernoulli":
        prof = Binary((rng.random((n, m)) < dist.q).astype(int).tolist())
    elif dist.name == "identical_uniform":
        prof = IdenticalAdditive(rng.integers(dist.lo, dist.hi + 1, size=m).tolist())
    else:
        prof = IdenticalItems(rng.integers(dist.lo, dist.hi + 1, size=n).tolist(), m)
    return Instance(w, prof)


def generate(dist: Distribution, n: int, m: int, count: int, seed: int, weights=None) -> list[Instance]:
    return [random_instance(dist, n, m, trial_rng(seed, m, t), weights) for t in range(count)]
