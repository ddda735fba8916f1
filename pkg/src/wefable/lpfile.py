"""CPLEX-LP export of the minimum-subsidy mixed integer program.

Variables x_i_o (agent i holds item o, binary) and p_i (subsidy). One WEF
row per ordered pair of agents, one assignment row per item.
"""
from __future__ import annotations

from fractions import Fraction

from .model import Instance, require_additive


def _terminates(q: Fraction) -> int | None:
    """Digits after the point if q has a finite decimal expansion."""
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    return max(twos, fives) if d == 1 else None


def format_coefficient(q: Fraction) -> tuple[str, bool]:
    """Decimal text for |q| and whether it is exact."""
    q = abs(Fraction(q))
    digits = _terminates(q)
    if digits is not None:
        scaled = q.numerator * 10**digits // q.denominator
        whole, frac = divmod(scaled, 10**digits)
        text = str(whole) if digits == 0 else f"{whole}.{frac:0{digits}d}".rstrip("0").rstrip(".")
        return text, True
    return f"{float(q):.12g}", False


def _terms(coeffs: list[tuple[Fraction, str]], notes: list[str]) -> str:
    parts = []
    for c, var in coeffs:
        if c == 0:
            continue
        text, exact = format_coefficient(c)
        if not exact:
            notes.append(f"{var} {c}")
        sign = "-" if c < 0 else "+"
        parts.append(f"{sign} {text} {var}")
    if not parts:
        return "0 " + coeffs[0][1] if coeffs else "0"
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else out


def export_lp(instance: Instance) -> str:
    require_additive(instance.valuations)
    n, m = instance.n, instance.m
    w = instance.weights
    v = instance.item_values()
    lines = [
        "\\ minimum total subsidy over allocations made weighted envy-free",
        f"\\ agents {n}, items {m}",
        "Minimize",
        " obj: " + " + ".join(f"p_{i}" for i in range(n)),
        "Subject To",
    ]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            coeffs = [(v[i][o] / w[i], f"x_{i}_{o}") for o in range(m)]
            coeffs.append((1 / w[i], f"p_{i}"))
            coeffs += [(-v[i][o] / w[j], f"x_{j}_{o}") for o in range(m)]
            coeffs.append((-1 / w[j], f"p_{j}"))
            notes: list[str] = []
            row = _terms(coeffs, notes)
            for note in notes:
                lines.append(f"\\ exact {note}")
            lines.append(f" wef_{i}_{j}: {row} >= 0")
    for o in range(m):
        lines.append(f" assign_{o}: " + " + ".join(f"x_{i}_{o}" for i in range(n)) + " = 1")
    lines.append("Bounds")
    lines += [f" p_{i} >= 0" for i in range(n)]
    if m:
        lines.append("Binaries")
        lines += [" " + " ".join(f"x_{i}_{o}" for o in range(m)) for i in range(n)]
    lines.append("End")
    return "\n".join(lines) + "\n"
