"""Command-line entry point: ``wef <verb> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import allocators, bench, envy, io as wio, lpfile, mwef, oracle
from .errors import WefError
from .generators import DISTRIBUTIONS, Distribution, default_seed, generate
from .model import Allocation, Instance, as_rational, vmax

SOLVERS = {
    "general": allocators.allocate_all_to_best,
    "alg1": allocators.alg1_additive,
    "alg2": allocators.alg2_identical_additive,
    "alg3": allocators.alg3_binary,
    "alg4": allocators.alg4_identical_items,
    "aw2": allocators.biased_adjusted_winner,
}


def _r(xs):
    return [str(x) for x in xs]


def _emit(payload: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
        return
    if fmt == "csv":
        out.write("key,value\n")
        for k, v in payload.items():
            out.write(f"{k},{json.dumps(v) if not isinstance(v, str) else v}\n")
        return
    width = max((len(k) for k in payload), default=0)
    for k, v in payload.items():
        out.write(f"{k.ljust(width)}  {v if isinstance(v, str) else json.dumps(v)}\n")


def _given_allocation_bound(inst: Instance) -> Fraction:
    if inst.m == 0:
        return Fraction(0)
    return (inst.W / inst.w_min - 1) * inst.m * vmax(inst)


def cmd_check(args) -> int:
    inst = wio.read_instance(args.instance)
    alloc = wio.read_allocation(args.allocation, inst)
    cert = envy.is_wefable(inst, alloc)
    payload: dict = {"wefable": cert.wefable}
    if isinstance(cert, envy.PositiveCycle):
        payload["positive_cycle"] = list(cert.cycle)
        payload["cycle_cost"] = str(cert.cost)
    else:
        p = [w * l for w, l in zip(inst.weights, cert.levels)]
        total = sum(p, Fraction(0))
        bound = _given_allocation_bound(inst)
        payload.update(subsidies=_r(p), total=str(total), bound=str(bound), within_bound=total <= bound)
    if inst.valuations.additive:
        payload["wef_0_1"] = envy.check_wef_xy(inst, alloc, 0, 1)
        payload["wef_1_0"] = envy.check_wef_xy(inst, alloc, 1, 0)
        payload["wef_1_1"] = envy.check_wef_xy(inst, alloc, 1, 1)
        payload["wwef1"] = envy.check_wwef1(inst, alloc)
    _emit(payload, args.format)
    return 0 if cert.wefable else 1


def _report_payload(rep: allocators.AllocatorReport, trace: bool) -> dict:
    out = {
        "owners": list(rep.allocation.owners),
        "bundles": [list(b) for b in rep.allocation.bundles()],
        "subsidies": _r(rep.subsidies),
        "total_subsidy": str(rep.total_subsidy),
        "theoretical_bound": str(rep.theoretical_bound),
    }
    if trace:
        out["trace"] = list(rep.trace)
    return out


def cmd_solve(args) -> int:
    inst = wio.read_instance(args.instance)
    algo = args.algorithm
    if algo in SOLVERS:
        payload = _report_payload(SOLVERS[algo](inst), args.trace)
    elif algo == "dp":
        res = allocators.dp_identical_items_optimal(inst)
        p = envy.min_subsidy_vector(inst, Allocation.from_counts(res.counts))
        payload = {"counts": list(res.counts), "subsidies": _r(p), "total_subsidy": str(res.total)}
        if args.trace:
            payload["trace"] = [{"ascending_value_order": list(res.order)}]
    else:  # vcg
        res = allocators.vcg_outcome(inst)
        payload = {
            "owners": list(res.outcome.allocation.owners),
            "bundles": [list(b) for b in res.outcome.allocation.bundles()],
            "payments": _r(res.payments),
            "upfront_per_weight": str(res.upfront),
            "subsidies": _r(res.outcome.subsidies),
            "total_subsidy": str(res.outcome.total),
        }
    _emit(payload, args.format)
    return 0


def cmd_min_subsidy(args) -> int:
    inst = wio.read_instance(args.instance)
    if not args.exact:
        raise SystemExit("min-subsidy needs --exact (the only supported method is exhaustive search)")
    res = oracle.min_total_subsidy_exhaustive(inst, engine=args.engine)
    _emit({
        "owners": list(res.allocation.owners),
        "bundles": [list(b) for b in res.allocation.bundles()],
        "subsidies": _r(res.subsidies),
        "total": str(res.total),
        "enumerated": res.enumerated,
        "wefable_count": res.wefable_count,
        "optimal_count": res.optimal_count,
        "engine": res.engine,
    }, args.format)
    return 0


def cmd_mwef(args) -> int:
    inst = wio.read_instance(args.instance)
    alloc = wio.read_allocation(args.allocation, inst)
    out = mwef.distribute_budget(inst, alloc, as_rational(args.budget))
    _emit({
        "subsidies": _r(out.subsidies),
        "total": str(out.total),
        "wef_requirement": str(out.requirement),
        "levels": _r(out.levels),
        "events": [{"spent": str(s), "agent": a} for s, a in out.events],
    }, args.format)
    return 0


def cmd_export_lp(args) -> int:
    inst = wio.read_instance(args.instance)
    text = lpfile.export_lp(inst)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return 0


def _weights(text):
    return None if text is None else [as_rational(x) for x in text.split(",")]


def cmd_gen(args) -> int:
    dist = Distribution.parse(args.distribution)
    seed = default_seed() if args.seed is None else args.seed
    insts = generate(dist, args.n, args.m, args.count, seed, _weights(args.weights))
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    for t, inst in enumerate(insts):
        wio.write_instance(outdir / f"instance_n{args.n}_m{args.m}_{t:03d}.json", inst)
    print(f"wrote {len(insts)} instances to {outdir}")
    return 0


def cmd_bench(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    ms = [int(x) for x in args.ms.split(",")] if args.ms else [args.n * k for k in range(1, 6)]
    exact = "strict" if args.exact else ("feasible" if args.exact_where_feasible else "off")
    cfg = bench.ExperimentConfig(
        n=args.n,
        ms=tuple(ms),
        algorithm=args.algorithm,
        distribution=Distribution.parse(args.distribution) if args.distribution else None,
        trials=args.trials,
        seed=seed,
        weights=_weights(args.weights),
        exact=exact,
    )
    rows = bench.run_bench(cfg)
    if args.format == "csv":
        sys.stdout.write(bench.rows_to_csv(rows))
    elif args.format == "json":
        sys.stdout.write(json.dumps([{
            "m": r.m, "algorithm_mean": str(r.algorithm_mean),
            "exact_mean": None if r.exact_mean is None else str(r.exact_mean),
            "bound": str(r.bound), "trials": r.trials, "violations": list(r.violations),
        } for r in rows], indent=2) + "\n")
    else:
        sys.stdout.write(bench.rows_to_text(rows))
    return 1 if any(r.violations for r in rows) else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wef", description="Weighted envy-freeable allocations with subsidies.")
    sub = ap.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")
        p.set_defaults(fn=fn)
        return p

    p = verb("check", cmd_check, "certify an allocation and print its minimal subsidies")
    p.add_argument("instance")
    p.add_argument("allocation")

    p = verb("solve", cmd_solve, "run an allocation algorithm")
    p.add_argument("instance")
    p.add_argument("--algorithm", "-a", required=True,
                   choices=("general", "alg1", "alg2", "alg3", "alg4", "dp", "aw2", "vcg"))
    p.add_argument("--trace", action="store_true")

    p = verb("min-subsidy", cmd_min_subsidy, "exact minimum total subsidy by enumeration")
    p.add_argument("instance")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--engine", choices=("numba", "numpy", "exact"))

    p = verb("mwef", cmd_mwef, "split a fixed budget among unenvied agents")
    p.add_argument("instance")
    p.add_argument("allocation")
    p.add_argument("--budget", required=True, help="rational, e.g. 3/7")

    p = verb("export-lp", cmd_export_lp, "write the minimum-subsidy MILP as an LP file")
    p.add_argument("instance")
    p.add_argument("out", nargs="?")

    p = verb("gen", cmd_gen, "generate random instances")
    p.add_argument("--distribution", "-d", required=True, help=f"one of {', '.join(DISTRIBUTIONS)}, e.g. bernoulli(0.5)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--weights", help="comma-separated, default 1,2,...,n")
    p.add_argument("--out-dir", default=".")

    p = verb("bench", cmd_bench, "experiment table: algorithm vs exact minimum vs bound")
    p.set_defaults(format="text")
    p.add_argument("--algorithm", "-a", default="alg1", choices=tuple(bench.ALGORITHMS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ms", help="comma-separated item counts, default n,2n,...,5n")
    p.add_argument("--distribution", "-d")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int)
    p.add_argument("--weights")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true", help="exact minimum for every row; fails beyond the guard")
    g.add_argument("--exact-where-feasible", action="store_true", help="exact minimum only within the guard")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except WefError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
