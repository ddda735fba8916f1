"""Experiment tables: algorithm subsidy vs. exact minimum vs. worst-case bound."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import allocators
from .errors import TooLarge
from .generators import Distribution, generate
from .model import Instance, normalize_weights
from .oracle import ENUM_LIMIT, min_total_subsidy_exhaustive

ALGORITHMS: dict[str, Callable[[Instance], allocators.AllocatorReport]] = {
    "general": allocators.allocate_all_to_best,
    "alg1": allocators.alg1_additive,
    "alg2": allocators.alg2_identical_additive,
    "alg3": allocators.alg3_binary,
    "alg4": allocators.alg4_identical_items,
}

DEFAULT_DISTRIBUTION = {
    "general": "discrete_uniform(5,6)",
    "alg1": "discrete_uniform(5,6)",
    "alg2": "identical_uniform(1,2)",
    "alg3": "bernoulli(0.5)",
    "alg4": "per_agent_uniform(5,6)",
}


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    ms: tuple[int, ...]
    algorithm: str = "alg1"
    distribution: Distribution | None = None
    trials: int = 50
    seed: int = 0
    weights: tuple[Fraction, ...] | None = None
    exact: str = "off"  # off | feasible | strict

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.exact not in ("off", "feasible", "strict"):
            raise ValueError("exact must be off, feasible or strict")
        if self.distribution is None:
            object.__setattr__(self, "distribution", Distribution.parse(DEFAULT_DISTRIBUTION[self.algorithm]))
        w = self.weights if self.weights is not None else range(1, self.n + 1)
        object.__setattr__(self, "weights", tuple(Fraction(x) for x in w))
        if len(self.weights) != self.n:
            raise ValueError("one weight per agent required")


@dataclass(frozen=True)
class BenchRow:
    m: int
    algorithm_mean: Fraction
    exact_mean: Fraction | None
    bound: Fraction
    trials: int
    exact_trials: int
    violations: tuple[str, ...] = field(default=())


def bound_column(cfg: ExperimentConfig, m: int) -> Fraction:
    """The distribution-level worst-case guarantee printed next to the means."""
    V = Fraction(cfg.distribution.max_value)
    w = cfg.weights
    W, wmin = sum(w), min(w)
    if cfg.algorithm == "alg1":
        wn = normalize_weights(w)
        return (sum(wn) - min(wn)) * V
    if cfg.algorithm == "alg2":
        return (cfg.n - 1) * V
    if cfg.algorithm == "alg3":
        return W / wmin - 1
    if cfg.algorithm == "alg4":
        total, harmonic = Fraction(0), Fraction(0)
        for i, wi in enumerate(w):
            harmonic += 1 / wi
            if i:
                total += wi * harmonic
        return V * total
    return (W / wmin - 1) * m * V


def run_bench(cfg: ExperimentConfig) -> list[BenchRow]:
    run = ALGORITHMS[cfg.algorithm]
    rows = []
    for m in cfg.ms:
        feasible = cfg.n ** m <= ENUM_LIMIT
        if cfg.exact == "strict" and not feasible:
            raise TooLarge(f"exact minimum for n={cfg.n}, m={m} exceeds the enumeration guard")
        want_exact = cfg.exact != "off" and feasible
        column = bound_column(cfg, m)
        alg_sum, exact_sum = Fraction(0), Fraction(0)
        problems = []
        for t, inst in enumerate(generate(cfg.distribution, cfg.n, m, cfg.trials, cfg.seed, cfg.weights)):
            rep = run(inst)
            got = rep.total_subsidy
            alg_sum += got
            if got > rep.theoretical_bound:
                problems.append(f"trial {t}: subsidy {got} above instance bound {rep.theoretical_bound}")
            if got > column:
                problems.append(f"trial {t}: subsidy {got} above column bound {column}")
            if want_exact:
                best = min_total_subsidy_exhaustive(inst).total
                exact_sum += best
                if best > got:
                    problems.append(f"trial {t}: exact minimum {best} above algorithm {got}")
        rows.append(BenchRow(
            m,
            alg_sum / cfg.trials,
            exact_sum / cfg.trials if want_exact else None,
            column,
            cfg.trials,
            cfg.trials if want_exact else 0,
            tuple(problems),
        ))
    return rows


def _dec(x: Fraction | None, places: int = 4) -> str:
    if x is None:
        return ""
    q = round(Fraction(x), places)
    text = f"{float(q):.{places}f}" if q.denominator != 1 else str(q.numerator)
    return text


HEADER = ("m", "algorithm_mean", "exact_mean", "bound", "trials", "violations")


def rows_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(HEADER)
    for r in rows:
        out.writerow((r.m, _dec(r.algorithm_mean), _dec(r.exact_mean), _dec(r.bound), r.trials, len(r.violations)))
    return buf.getvalue()


def rows_to_text(rows: list[BenchRow]) -> str:
    table = [HEADER] + [
        (str(r.m), _dec(r.algorithm_mean), _dec(r.exact_mean) or "-", _dec(r.bound), str(r.trials), str(len(r.violations)))
        for r in rows
    ]
    widths = [max(len(row[k]) for row in table) for k in range(len(HEADER))]
    return "\n".join("  ".join(c.rjust(wd) for c, wd in zip(row, widths)) for row in table) + "\n"
