# cython: language_level=3
"""Compiled versions of the hot kernels in ``mmthz._fallback``."""

import numpy as np
from libc.math cimport fabs, INFINITY


def rect_blocked(const long long[:] trial, const double[:] cx, const double[:] cy,
                 const double[:] half_l, const double[:] half_w,
                 const double[:] cos_a, const double[:] sin_a,
                 double d, Py_ssize_t n_trials, bint clear_receiver):
    out_arr = np.zeros(n_trials, dtype=np.uint8)
    cdef unsigned char[:] out = out_arr
    cdef Py_ssize_t k, n = trial.shape[0]
    cdef double u0, v0, du, dv, tmin, tmax, t1, t2, lo, hi
    cdef bint ok
    with nogil:
        for k in range(n):
            if out[trial[k]]:
                continue
            u0 = (0.0 - cx[k]) * cos_a[k] + (0.0 - cy[k]) * sin_a[k]
            v0 = -(0.0 - cx[k]) * sin_a[k] + (0.0 - cy[k]) * cos_a[k]
            if clear_receiver and fabs(u0) <= half_l[k] and fabs(v0) <= half_w[k]:
                continue
            du = d * cos_a[k]
            dv = -(d * sin_a[k])
            tmin = 0.0
            tmax = 1.0
            ok = True
            if du == 0.0:
                if fabs(u0) > half_l[k]:
                    ok = False
            else:
                t1 = (-half_l[k] - u0) / du
                t2 = (half_l[k] - u0) / du
                lo = t1 if t1 < t2 else t2
                hi = t2 if t1 < t2 else t1
                if lo > tmin:
                    tmin = lo
                if hi < tmax:
                    tmax = hi
            if dv == 0.0:
                if fabs(v0) > half_w[k]:
                    ok = False
            else:
                t1 = (-half_w[k] - v0) / dv
                t2 = (half_w[k] - v0) / dv
                lo = t1 if t1 < t2 else t2
                hi = t2 if t1 < t2 else t1
                if lo > tmin:
                    tmin = lo
                if hi < tmax:
                    tmax = hi
            if ok and tmin <= tmax:
                out[trial[k]] = 1
    return out_arr


def disc_blocked(const long long[:] trial, const double[:] cx, const double[:] cy,
                 double radius, double d, Py_ssize_t n_trials, bint clear_receiver):
    out_arr = np.zeros(n_trials, dtype=np.uint8)
    cdef unsigned char[:] out = out_arr
    cdef Py_ssize_t k, n = trial.shape[0]
    cdef double r2 = radius * radius, px, dist2
    with nogil:
        for k in range(n):
            if out[trial[k]]:
                continue
            if clear_receiver and cx[k] * cx[k] + cy[k] * cy[k] <= r2:
                continue
            px = cx[k]
            if px < 0.0:
                px = 0.0
            elif px > d:
                px = d
            dist2 = (cx[k] - px) * (cx[k] - px) + cy[k] * cy[k]
            if dist2 <= r2:
                out[trial[k]] = 1
    return out_arr


def grouped_argmax(const long long[:] group, const double[:] values, Py_ssize_t n_groups):
    out_arr = np.full(n_groups, -1, dtype=np.int64)
    cdef long long[:] out = out_arr
    cdef Py_ssize_t k, n = group.shape[0]
    cdef long long g
    with nogil:
        for k in range(n):
            g = group[k]
            if out[g] < 0 or values[k] > values[out[g]]:
                out[g] = k
    return out_arr


def segmented_lsq(const double[:] cnt, const double[:] s, const double[:] ss,
                  Py_ssize_t k_segments, double tol):
    cdef Py_ssize_t m = cnt.shape[0] - 1
    best_arr = np.full((k_segments + 1, m + 1), np.inf)
    arg_arr = np.zeros((k_segments + 1, m + 1), dtype=np.int64)
    cdef double[:, :] best = best_arr
    cdef long long[:, :] arg = arg_arr
    cdef Py_ssize_t k, i, j, pick
    cdef double n, sm, cost, cand, c_min
    best[0, 0] = 0.0
    with nogil:
        for k in range(1, k_segments + 1):
            for j in range(k, m + 1):
                c_min = INFINITY
                for i in range(k - 1, j):
                    n = cnt[j] - cnt[i]
                    sm = s[j] - s[i]
                    cost = (ss[j] - ss[i]) - sm * sm / n
                    if cost < 0.0:
                        cost = 0.0
                    cand = best[k - 1, i] + cost
                    if cand < c_min:
                        c_min = cand
                pick = -1
                for i in range(k - 1, j):
                    n = cnt[j] - cnt[i]
                    sm = s[j] - s[i]
                    cost = (ss[j] - ss[i]) - sm * sm / n
                    if cost < 0.0:
                        cost = 0.0
                    cand = best[k - 1, i] + cost
                    if cand <= c_min + tol:
                        pick = i
                        break
                best[k, j] = best[k - 1, pick] + cost
                arg[k, j] = pick
    ends_arr = np.zeros(k_segments, dtype=np.int64)
    cdef long long[:] ends = ends_arr
    j = m
    for k in range(k_segments, 0, -1):
        ends[k - 1] = j
        j = arg[k, j]
    return float(best[k_segments, m]), ends_arr
