# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of py_backend: best-split scan and batch tree routing.

The arithmetic mirrors the numpy fallback exactly (same accumulation
order, same comparisons) so both backends grow identical trees.
"""

import numpy as np

NAME = "compiled"


def scan_split(double[::1] x_sorted, double[::1] t_sorted, double[::1] w_sorted,
               int min_leaf):
    cdef Py_ssize_t n = x_sorted.shape[0]
    if n < 2 * min_leaf:
        return -np.inf, -1
    cdef double wt = 0.0
    cdef double gt = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        wt += w_sorted[i]
        gt += w_sorted[i] * t_sorted[i]
    if wt <= 0.0:
        return -np.inf, -1
    cdef double parent = gt * gt / wt
    cdef double wl = 0.0, gl = 0.0, wr, gr, gain
    cdef double best_gain = -np.inf
    cdef Py_ssize_t best_pos = -1
    cdef Py_ssize_t pos
    for i in range(n - 1):
        wl += w_sorted[i]
        gl += w_sorted[i] * t_sorted[i]
        pos = i + 1
        if x_sorted[i] >= x_sorted[pos]:
            continue
        if pos < min_leaf or n - pos < min_leaf:
            continue
        wr = wt - wl
        gr = gt - gl
        if wl <= 0.0 or wr <= 0.0:
            continue
        gain = gl * gl / wl + gr * gr / wr - parent
        if gain > best_gain:
            best_gain = gain
            best_pos = i
    return best_gain, best_pos


def predict_tree(int[::1] feature, double[::1] threshold, int[::1] left,
                 int[::1] right, double[::1] value, double[:, ::1] X):
    cdef Py_ssize_t n = X.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    cdef int node, f
    for i in range(n):
        node = 0
        f = feature[node]
        while f >= 0:
            if X[i, f] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
            f = feature[node]
        out[i] = value[node]
    return out_arr


def predict_forest(int[::1] feature, double[::1] threshold, int[::1] left,
                   int[::1] right, double[::1] value, int[::1] offsets,
                   double[:, ::1] X):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t n_trees = offsets.shape[0] - 1
    out_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, k
    cdef int node, f
    cdef double acc
    for i in range(n):
        acc = 0.0
        for k in range(n_trees):
            node = offsets[k]
            f = feature[node]
            while f >= 0:
                if X[i, f] <= threshold[node]:
                    node = left[node]
                else:
                    node = right[node]
                f = feature[node]
            acc += value[node]
        out[i] = acc
    return out_arr
