# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. ``_fallback.py`` documents the contracts."""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY, NAN
from libc.stdint cimport uint64_t

cnp.import_array()

# bit ``m`` of PATTERN[v] is bit ``v`` of ``m`` for the 64 masks sharing one word
cdef uint64_t[6] PATTERN
PATTERN[:] = [0xAAAAAAAAAAAAAAAA, 0xCCCCCCCCCCCCCCCC, 0xF0F0F0F0F0F0F0F0,
              0xFF00FF00FF00FF00, 0xFFFF0000FFFF0000, 0xFFFFFFFF00000000]


def structure_table(const signed char[::1] kind, const cnp.int64_t[::1] ptr,
                    const cnp.int64_t[::1] idx, const cnp.int64_t[::1] var, int n_vars):
    """Bit-parallel: each node value is a 64-bit word covering 64 consecutive masks."""
    cdef Py_ssize_t n_nodes = kind.shape[0]
    cdef cnp.int64_t n_masks = (<cnp.int64_t>1) << n_vars
    cdef cnp.int64_t n_words = (n_masks + 63) // 64
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out_arr = np.zeros(n_masks, dtype=np.uint8)
    cdef unsigned char[::1] out = out_arr
    cdef uint64_t[::1] val = np.zeros(n_nodes, dtype=np.uint64)
    cdef cnp.int64_t w, j, m, base
    cdef Py_ssize_t i
    cdef uint64_t acc, word
    cdef int v
    for w in range(n_words):
        for i in range(n_nodes):
            if kind[i] == 0:
                v = <int>var[i]
                if v < 6:
                    val[i] = PATTERN[v]
                else:
                    val[i] = <uint64_t>0 - <uint64_t>((w >> (v - 6)) & 1)
            elif kind[i] == 1:
                acc = ~(<uint64_t>0)
                for j in range(ptr[i], ptr[i + 1]):
                    acc &= val[idx[j]]
                val[i] = acc
            else:
                acc = 0
                for j in range(ptr[i], ptr[i + 1]):
                    acc |= val[idx[j]]
                val[i] = acc
        word = val[n_nodes - 1]
        base = w * 64
        for m in range(min(64, n_masks - base)):
            out[base + m] = (word >> m) & 1
    return out_arr


def cutset_probability(const unsigned char[::1] table, probs):
    """Product weights of all masks by doubling, then a masked sum."""
    cdef const double[::1] p = np.ascontiguousarray(probs, dtype=np.float64)
    cdef Py_ssize_t n_vars = p.shape[0]
    cdef cnp.int64_t n_masks = table.shape[0]
    cdef double[::1] weight = np.empty(n_masks, dtype=np.float64)
    cdef cnp.int64_t k, size = 1
    cdef Py_ssize_t v
    cdef double q, r, total = 0.0
    weight[0] = 1.0
    for v in range(n_vars):
        q = p[v]
        r = 1.0 - q
        for k in range(size):
            weight[k + size] = weight[k] * q
            weight[k] = weight[k] * r
        size *= 2
    for k in range(n_masks):
        if table[k]:
            total += weight[k]
    return total


def level_extremes(xv, xb, yv, yb, int op, int n_cuts):
    """Every pair is evaluated; y is grouped by level so the inner loops are plain reductions."""
    x_np = np.ascontiguousarray(xv, dtype=np.float64)
    bx_np = np.minimum(np.ascontiguousarray(xb, dtype=np.int64), n_cuts)
    by_np = np.minimum(np.ascontiguousarray(yb, dtype=np.int64), n_cuts)
    order = np.argsort(-by_np, kind="stable")
    ys_np = np.ascontiguousarray(np.asarray(yv, dtype=np.float64)[order])
    bys_np = np.ascontiguousarray(by_np[order])
    starts_np = np.flatnonzero(np.r_[True, bys_np[1:] != bys_np[:-1]]).astype(np.int64)
    ends_np = np.r_[starts_np[1:], bys_np.shape[0]].astype(np.int64)

    cdef const double[::1] x = x_np
    cdef const cnp.int64_t[::1] bx = bx_np
    cdef const double[::1] y = ys_np
    cdef const cnp.int64_t[::1] by = bys_np
    cdef const cnp.int64_t[::1] starts = starts_np
    cdef const cnp.int64_t[::1] ends = ends_np
    cdef cnp.ndarray[double, ndim=1] lo_arr = np.full(n_cuts, INFINITY)
    cdef cnp.ndarray[double, ndim=1] hi_arr = np.full(n_cuts, -INFINITY)
    cdef double[::1] lo = lo_arr
    cdef double[::1] hi = hi_arr
    cdef Py_ssize_t i, g, n_groups = starts.shape[0], nx = x.shape[0]
    cdef cnp.int64_t j, b
    cdef double xi, v, gmin, gmax
    if by.shape[0] == 0:
        n_groups = 0
    for i in range(nx):
        if bx[i] <= 0:
            continue
        xi = x[i]
        for g in range(n_groups):
            b = by[starts[g]]
            if b <= 0:
                break
            if bx[i] < b:
                b = bx[i]
            gmin = INFINITY
            gmax = -INFINITY
            if op == 0:
                for j in range(starts[g], ends[g]):
                    v = xi + y[j]
                    gmin = v if v < gmin else gmin
                    gmax = v if v > gmax else gmax
            elif op == 1:
                for j in range(starts[g], ends[g]):
                    v = xi - y[j]
                    gmin = v if v < gmin else gmin
                    gmax = v if v > gmax else gmax
            else:
                for j in range(starts[g], ends[g]):
                    v = xi * y[j]
                    gmin = v if v < gmin else gmin
                    gmax = v if v > gmax else gmax
            if gmin < lo[b - 1]:
                lo[b - 1] = gmin
            if gmax > hi[b - 1]:
                hi[b - 1] = gmax
    for i in range(n_cuts - 2, -1, -1):
        if lo[i + 1] < lo[i]:
            lo[i] = lo[i + 1]
        if hi[i + 1] > hi[i]:
            hi[i] = hi[i + 1]
    for i in range(n_cuts):
        if lo[i] > hi[i]:
            lo[i] = NAN
            hi[i] = NAN
    return lo_arr, hi_arr
