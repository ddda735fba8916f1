"""JSON instance and allocation files.

Rationals are written as strings ("7/2", "3"). Table valuations map a bitmask
string (decimal, or "0b..." binary) to a value; bit o set means item o is in
the bundle.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import InstanceFormatError
from .model import (
    Additive,
    Allocation,
    Binary,
    Capped,
    IdenticalAdditive,
    IdenticalItems,
    Instance,
    Profile,
    Table,
    as_rational,
)


def rstr(x: Fraction) -> str:
    return str(Fraction(x))


def profile_to_json(p: Profile) -> dict:
    if isinstance(p, Binary):
        return {"type": "binary", "matrix": [[int(x) for x in r] for r in p.matrix]}
    if isinstance(p, Additive):
        return {"type": "additive", "matrix": [[rstr(x) for x in r] for r in p.matrix]}
    if isinstance(p, IdenticalAdditive):
        return {"type": "identical_additive", "items": [rstr(x) for x in p.items]}
    if isinstance(p, IdenticalItems):
        return {"type": "identical_items", "per_agent": [rstr(x) for x in p.per_agent], "m": p.m}
    if isinstance(p, Capped):
        return {"type": "capped", "caps": [rstr(x) for x in p.caps], "m": p.m}
    if isinstance(p, Table):
        return {
            "type": "table",
            "m": p.m,
            "bundles": [{str(mask): rstr(v) for mask, v in enumerate(r)} for r in p.bundles],
        }
    raise TypeError(f"cannot serialize {type(p).__name__}")


def instance_to_json(inst: Instance) -> dict:
    return {"weights": [rstr(w) for w in inst.weights], "valuations": profile_to_json(inst.valuations)}


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_to_json(inst), indent=2) + "\n"


def _rat(x, where: str) -> Fraction:
    try:
        return as_rational(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InstanceFormatError(f"{where}: {exc}") from None


def _need(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise InstanceFormatError(f"{where}: missing key {key!r}")
    return obj[key]


def _mask(key: str, where: str) -> int:
    try:
        return int(key, 0) if key.lower().startswith("0b") else int(key)
    except ValueError:
        raise InstanceFormatError(f"{where}: bad bitmask {key!r}") from None


def profile_from_json(obj: dict, n: int) -> Profile:
    where = "valuations"
    kind = _need(obj, "type", where)
    try:
        if kind in ("additive", "binary"):
            rows = _need(obj, "matrix", where)
            mat = [[_rat(x, f"{where}.matrix[{i}][{o}]") for o, x in enumerate(r)] for i, r in enumerate(rows)]
            return Binary(mat) if kind == "binary" else Additive(mat)
        if kind == "identical_additive":
            return IdenticalAdditive([_rat(x, f"{where}.items[{o}]") for o, x in enumerate(_need(obj, "items", where))])
        if kind == "identical_items":
            vals = [_rat(x, f"{where}.per_agent[{i}]") for i, x in enumerate(_need(obj, "per_agent", where))]
            return IdenticalItems(vals, int(_need(obj, "m", where)))
        if kind == "capped":
            caps = [_rat(x, f"{where}.caps[{i}]") for i, x in enumerate(_need(obj, "caps", where))]
            return Capped(caps, int(_need(obj, "m", where)))
        if kind == "table":
            m = int(_need(obj, "m", where))
            rows = []
            for i, r in enumerate(_need(obj, "bundles", where)):
                row = [None] * (1 << m)
                for key, v in r.items():
                    mask = _mask(key, f"{where}.bundles[{i}]")
                    if not 0 <= mask < len(row):
                        raise InstanceFormatError(f"{where}.bundles[{i}]: bitmask {key} outside {m} items")
                    row[mask] = _rat(v, f"{where}.bundles[{i}][{key}]")
                if any(x is None for x in row):
                    raise InstanceFormatError(f"{where}.bundles[{i}]: expected all {1 << m} bundles")
                rows.append(row)
            return Table(rows, m)
    except ValueError as exc:
        raise InstanceFormatError(f"{where}: {exc}") from None
    raise InstanceFormatError(f"{where}: unknown valuation type {kind!r}")


def instance_from_json(obj: dict) -> Instance:
    weights = [_rat(x, f"weights[{i}]") for i, x in enumerate(_need(obj, "weights", "instance"))]
    prof = profile_from_json(_need(obj, "valuations", "instance"), len(weights))
    try:
        return Instance(weights, prof)
    except ValueError as exc:
        raise InstanceFormatError(f"instance: {exc}") from None


def _load_json(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if text.splitlines() else ""
        raise InstanceFormatError(
            f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {line}\n    {' ' * (exc.colno - 1)}^"
        ) from None


def loads_instance(text: str, source: str = "<string>") -> Instance:
    return instance_from_json(_load_json(text, source))


def read_instance(path) -> Instance:
    path = Path(path)
    return loads_instance(path.read_text(), str(path))


def write_instance(path, inst: Instance) -> None:
    Path(path).write_text(dumps_instance(inst))


def allocation_to_json(alloc: Allocation) -> dict:
    return {"owners": list(alloc.owners), "bundles": [list(b) for b in alloc.bundles()]}


def allocation_from_json(obj: dict, inst: Instance) -> Allocation:
    try:
        if "owners" in obj:
            return Allocation(tuple(obj["owners"]), inst.n)
        if "bundles" in obj:
            return Allocation.from_bundles(obj["bundles"], inst.m)
        if "counts" in obj:
            return Allocation.from_counts(obj["counts"])
    except ValueError as exc:
        raise InstanceFormatError(f"allocation: {exc}") from None
    raise InstanceFormatError("allocation: expected 'owners', 'bundles' or 'counts'")


def read_allocation(path, inst: Instance) -> Allocation:
    path = Path(path)
    return allocation_from_json(_load_json(path.read_text(), str(path)), inst)
