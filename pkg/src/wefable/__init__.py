"""Weighted envy-freeable allocations of indivisible items with subsidies."""
from .allocators import (
    AllocatorReport,
    alg1_additive,
    alg2_identical_additive,
    alg3_binary,
    alg4_identical_items,
    allocate_all_to_best,
    biased_adjusted_winner,
    dp_identical_items_optimal,
    msw_bruteforce,
    vcg_outcome,
)
from .envy import (
    build_envy_graph,
    check_wef_xy,
    check_wwef1,
    is_wef,
    is_wefable,
    min_subsidy_vector,
)
from .model import (
    Additive,
    Allocation,
    Binary,
    Capped,
    IdenticalAdditive,
    IdenticalItems,
    Instance,
    Outcome,
    Table,
    normalize_weights,
    value,
    vmax,
)
from .mwef import distribute_budget
from .oracle import min_total_subsidy_exhaustive

__version__ = "0.1.0"
