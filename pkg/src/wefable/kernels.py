"""Integer kernels for the exhaustive searches.

Two interchangeable backends compute the same thing: compiled loops via
numba, or batched numpy arrays. ``WEF_BACKEND=numpy`` forces the latter;
numba is used by default when importable.

Values arrive pre-scaled to int64 so that every envy-edge cost is an exact
integer: cost(i, j) = V[i, j] * (L / w_j) - V[i, i] * (L / w_i) with L the
lcm of the integer weights.
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


MODE_ADDITIVE = 0  # item_vals[i, o]
MODE_TABLE = 1  # item_vals[i, mask]
MODE_CAPPED = 2  # item_vals[i] = (cap, value of one item)

NEG = np.iinfo(np.int64).min // 4


def backend() -> str:
    choice = os.environ.get("WEF_BACKEND", "").strip().lower()
    if choice == "numpy" or not HAVE_NUMBA:
        return "numpy"
    if choice not in ("", "numba"):
        raise ValueError(f"WEF_BACKEND must be 'numba' or 'numpy', got {choice!r}")
    return "numba"


# --- exhaustive minimum subsidy --------------------------------------------


@njit(cache=True)
def _bundle_value(mode, vals, i, mask, count, addsum):
    if mode == MODE_ADDITIVE:
        return addsum
    if mode == MODE_TABLE:
        return vals[i, mask]
    c = count * vals[i, 1]
    cap = vals[i, 0]
    return c if c < cap else cap


@njit(cache=True)
def _search_numba(mode, vals, w, scale, n, m, lo, hi):
    """Scan owner vectors with rank in [lo, hi) in lexicographic order.

    Returns (best_total, best_rank, n_wefable, n_best).
    """
    owner = np.zeros(m, np.int64)
    r = lo
    for pos in range(m - 1, -1, -1):
        owner[pos] = r % n
        r //= n
    masks = np.zeros(n, np.int64)
    counts = np.zeros(n, np.int64)
    add = np.zeros((n, n), np.int64)  # add[i, j] = additive v_i(X_j)
    for o in range(m):
        a = owner[o]
        masks[a] |= 1 << o
        counts[a] += 1
        if mode == MODE_ADDITIVE:
            for i in range(n):
                add[i, a] += vals[i, o]
    bv = np.zeros((n, n), np.int64)
    d = np.zeros((n, n), np.int64)
    best = -1
    best_rank = -1
    n_ok = 0
    n_best = 0
    rank = lo
    while rank < hi:
        for i in range(n):
            for j in range(n):
                bv[i, j] = _bundle_value(mode, vals, i, masks[j], counts[j], add[i, j])
        for i in range(n):
            own = bv[i, i] * scale[i]
            for j in range(n):
                d[i, j] = 0 if i == j else bv[i, j] * scale[j] - own
        positive = False
        for k in range(n):
            for i in range(n):
                dik = d[i, k]
                for j in range(n):
                    c = dik + d[k, j]
                    if c > d[i, j]:
                        d[i, j] = c
            if d[k, k] > 0:
                positive = True
                break
        if not positive:
            for i in range(n):
                if d[i, i] > 0:
                    positive = True
                    break
        if not positive:
            n_ok += 1
            total = 0
            for i in range(n):
                li = 0
                for j in range(n):
                    if d[i, j] > li:
                        li = d[i, j]
                total += w[i] * li
            if best < 0 or total < best:
                best = total
                best_rank = rank
                n_best = 1
            elif total == best:
                n_best += 1
        # odometer step
        rank += 1
        if rank >= hi:
            break
        pos = m - 1
        while True:
            a = owner[pos]
            b = a + 1
            if b == n:
                b = 0
            owner[pos] = b
            bit = 1 << pos
            masks[a] &= ~bit
            masks[b] |= bit
            counts[a] -= 1
            counts[b] += 1
            if mode == MODE_ADDITIVE:
                for i in range(n):
                    add[i, a] -= vals[i, pos]
                    add[i, b] += vals[i, pos]
            if b != 0:
                break
            pos -= 1
    return best, best_rank, n_ok, n_best


def _search_numpy(mode, vals, w, scale, n, m, lo, hi, batch=1 << 14):
    best = -1
    best_rank = -1
    n_ok = 0
    n_best = 0
    place = n ** np.arange(m - 1, -1, -1, dtype=np.int64)
    for start in range(lo, hi, batch):
        ranks = np.arange(start, min(hi, start + batch), dtype=np.int64)
        owner = (ranks[:, None] // place[None, :]) % n  # (B, m)
        onehot = owner[:, None, :] == np.arange(n)[None, :, None]  # (B, n, m)
        if mode == MODE_ADDITIVE:
            bv = np.einsum("io,bjo->bij", vals, onehot.astype(np.int64))
        elif mode == MODE_TABLE:
            masks = (onehot.astype(np.int64) << np.arange(m, dtype=np.int64)).sum(axis=2)  # (B, n)
            bv = vals[np.arange(n)[None, :, None], masks[:, None, :]]
        else:
            counts = onehot.sum(axis=2)
            bv = np.minimum(counts[:, None, :] * vals[None, :, 1:2], vals[None, :, 0:1])
        own = (np.einsum("bii->bi", bv) * scale)[:, :, None]
        d = bv * scale[None, None, :] - own
        idx = np.arange(n)
        d[:, idx, idx] = 0
        for k in range(n):
            d = np.maximum(d, d[:, :, k:k + 1] + d[:, k:k + 1, :])
        ok = (np.einsum("bii->bi", d) <= 0).all(axis=1)
        if not ok.any():
            continue
        totals = (d.max(axis=2) * w[None, :]).sum(axis=1)
        totals = np.where(ok, totals, np.iinfo(np.int64).max)
        n_ok += int(ok.sum())
        i = int(np.argmin(totals))
        t = int(totals[i])
        if best < 0 or t < best:
            best, best_rank = t, int(ranks[i])
            n_best = int((totals == t).sum())
        elif t == best:
            n_best += int((totals == t).sum())
    return best, best_rank, n_ok, n_best


def exhaustive_search(mode, vals, w, scale, n, m, which=None):
    which = which or backend()
    vals = np.ascontiguousarray(vals, dtype=np.int64)
    w = np.ascontiguousarray(w, dtype=np.int64)
    scale = np.ascontiguousarray(scale, dtype=np.int64)
    total = n ** m
    if which == "numba":
        return tuple(int(x) for x in _search_numba(mode, vals, w, scale, n, m, 0, total))
    return _search_numpy(mode, vals, w, scale, n, m, 0, total)


# --- discrete water-filling simulation --------------------------------------


@njit(cache=True)
def _simulate_numba(L, rate, inc, steps):
    """Pour ``steps`` equal slices of money, each into the agents at the top level.

    ``rate[i]`` is money per unit weight already held by agent i and L[i, j]
    the unsubsidized longest-path table, all in one common integer unit, so
    agent i's level is max_j(L[i, j] + rate[j]) - rate[i]. When the leaders
    form bitmask ``mask`` each of them gains inc[mask] per step (the slice
    split in proportion to weight).
    """
    n = rate.shape[0]
    lev = np.zeros(n, np.int64)
    for _ in range(steps):
        top = NEG
        for i in range(n):
            best = L[i, i] + rate[i]
            for j in range(n):
                c = L[i, j] + rate[j]
                if c > best:
                    best = c
            lev[i] = best - rate[i]
            if lev[i] > top:
                top = lev[i]
        mask = 0
        for i in range(n):
            if lev[i] == top:
                mask |= 1 << i
        step = inc[mask]
        for i in range(n):
            if mask >> i & 1:
                rate[i] += step
    return rate


def _simulate_py(L, rate, inc, steps):
    n = len(rate)
    L = [[int(x) for x in r] for r in L]
    rate = [int(x) for x in rate]
    inc = [int(x) for x in inc]
    for _ in range(steps):
        lev = [max(L[i][j] + rate[j] for j in range(n)) - rate[i] for i in range(n)]
        top = max(lev)
        mask = sum(1 << i for i in range(n) if lev[i] == top)
        for i in range(n):
            if mask >> i & 1:
                rate[i] += inc[mask]
    return rate


def simulate(L, rate, inc, steps, which=None):
    which = which or backend()
    if which == "numba":
        return [int(x) for x in _simulate_numba(
            np.asarray(L, np.int64), np.asarray(rate, np.int64).copy(),
            np.asarray(inc, np.int64), steps)]
    return _simulate_py(L, rate, inc, steps)
