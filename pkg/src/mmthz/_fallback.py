"""Numpy implementations of the hot kernels.

Same signatures and arithmetic as the compiled ``_speedups`` module; used when
the extension is not built or ``MMTHZ_PURE_PYTHON`` is set.
"""

import numpy as np


def rect_blocked(trial, cx, cy, half_l, half_w, cos_a, sin_a, d, n_trials, clear_receiver):
    """Per-trial flag: does any rectangle cross the segment (0,0)-(d,0)?

    Rectangle ``k`` belongs to trial ``trial[k]``, is centred at
    ``(cx, cy)`` with half extents ``half_l`` along its axis ``(cos_a, sin_a)``
    and ``half_w`` across it. With ``clear_receiver`` rectangles covering the
    receiver at the origin are discarded before the test.
    """
    out = np.zeros(n_trials, dtype=np.uint8)
    if len(trial) == 0:
        return out
    # receiver (origin) in local coordinates
    u0 = (0.0 - cx) * cos_a + (0.0 - cy) * sin_a
    v0 = -(0.0 - cx) * sin_a + (0.0 - cy) * cos_a
    du = d * cos_a
    dv = -(d * sin_a)
    tmin = np.zeros(len(trial))
    tmax = np.ones(len(trial))
    ok = np.ones(len(trial), dtype=bool)
    for start, step, half in ((u0, du, half_l), (v0, dv, half_w)):
        flat = step == 0.0
        ok &= ~(flat & (np.abs(start) > half))
        with np.errstate(divide="ignore", invalid="ignore"):
            t1 = (-half - start) / step
            t2 = (half - start) / step
        lo = np.where(flat, -np.inf, np.minimum(t1, t2))
        hi = np.where(flat, np.inf, np.maximum(t1, t2))
        tmin = np.maximum(tmin, lo)
        tmax = np.minimum(tmax, hi)
    hit = ok & (tmin <= tmax)
    if clear_receiver:
        covers = (np.abs(u0) <= half_l) & (np.abs(v0) <= half_w)
        hit &= ~covers
    np.maximum.at(out, trial[hit], 1)
    return out


def disc_blocked(trial, cx, cy, radius, d, n_trials, clear_receiver):
    """Per-trial flag: does any disc of ``radius`` touch the segment (0,0)-(d,0)?"""
    out = np.zeros(n_trials, dtype=np.uint8)
    if len(trial) == 0:
        return out
    r2 = radius * radius
    px = np.minimum(np.maximum(cx, 0.0), d)
    dist2 = (cx - px) * (cx - px) + cy * cy
    hit = dist2 <= r2
    if clear_receiver:
        hit &= ~(cx * cx + cy * cy <= r2)
    np.maximum.at(out, trial[hit], 1)
    return out


def grouped_argmax(group, values, n_groups):
    """Index of the first maximal value within each group, -1 for empty groups.

    ``group`` must be sorted in non-decreasing order.
    """
    out = np.full(n_groups, -1, dtype=np.int64)
    if len(group) == 0:
        return out
    order = np.lexsort((-values, group))
    g = group[order]
    first = np.ones(len(g), dtype=bool)
    first[1:] = g[1:] != g[:-1]
    out[g[first]] = order[first]
    return out


def segmented_lsq(cnt, s, ss, k_segments, tol):
    """Optimal partition of ordered weighted points into contiguous segments.

    ``cnt``, ``s``, ``ss`` are prefix sums (length m + 1) of the weights,
    weighted values and weighted squares of ``m`` ordered groups. Returns
    ``(cost, ends)`` where ``ends[k]`` is the exclusive end index of segment
    ``k``. Ties within ``tol`` prefer earlier breakpoints.
    """
    m = len(cnt) - 1
    inf = np.inf
    best = np.full((k_segments + 1, m + 1), inf)
    arg = np.zeros((k_segments + 1, m + 1), dtype=np.int64)
    best[0, 0] = 0.0
    for k in range(1, k_segments + 1):
        for j in range(k, m + 1):
            i = np.arange(k - 1, j)
            n = cnt[j] - cnt[i]
            sm = s[j] - s[i]
            cost = (ss[j] - ss[i]) - sm * sm / n
            cost = np.maximum(cost, 0.0)
            cand = best[k - 1, i] + cost
            # first index within tolerance of the minimum
            c_min = cand.min()
            pick = int(np.argmax(cand <= c_min + tol))
            best[k, j] = cand[pick]
            arg[k, j] = i[pick]
    ends = np.zeros(k_segments, dtype=np.int64)
    j = m
    for k in range(k_segments, 0, -1):
        ends[k - 1] = j
        j = arg[k, j]
    return float(best[k_segments, m]), ends
