"""Pure numpy fallback for the hot tree kernels.

Kept expression-for-expression identical to the compiled kernel so the
two backends produce bitwise-equal trees; the parity test in the suite
pins that.
"""

from __future__ import annotations

import numpy as np

NAME = "python"


def scan_split(x_sorted, t_sorted, w_sorted, min_leaf):
    """Best weighted-SSE split of a sorted column.

    Returns (gain, i) where the split separates [0..i] from [i+1..];
    (-inf, -1) when no position is valid. Targets are expected centered
    by the caller so gains are numerically exact at zero.
    """
    n = x_sorted.shape[0]
    if n < 2 * min_leaf:
        return -np.inf, -1
    cw = np.cumsum(w_sorted)
    cwt = np.cumsum(w_sorted * t_sorted)
    wt = cw[-1]
    gt = cwt[-1]
    if wt <= 0.0:
        return -np.inf, -1
    wl = cw[:-1]
    gl = cwt[:-1]
    wr = wt - wl
    gr = gt - gl
    valid = (x_sorted[:-1] < x_sorted[1:])
    pos = np.arange(1, n)
    valid &= (pos >= min_leaf) & (n - pos >= min_leaf)
    valid &= (wl > 0.0) & (wr > 0.0)
    if not valid.any():
        return -np.inf, -1
    with np.errstate(divide="ignore", invalid="ignore"):
        gains = gl * gl / wl + gr * gr / wr - gt * gt / wt
    gains[~valid] = -np.inf
    best = int(np.argmax(gains))
    return float(gains[best]), best


def predict_tree(feature, threshold, left, right, value, X):
    """Route every row of X to its leaf value."""
    n = X.shape[0]
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        node = 0
        f = feature[node]
        while f >= 0:
            node = left[node] if X[i, f] <= threshold[node] else right[node]
            f = feature[node]
        out[i] = value[node]
    return out


def predict_forest(feature, threshold, left, right, value, offsets, X):
    """Sum of leaf values over a packed ensemble for every row of X.
    `offsets[k]` is the root index of tree k; len(offsets) = n_trees + 1."""
    n = X.shape[0]
    n_trees = len(offsets) - 1
    out = np.zeros(n, dtype=np.float64)
    for i in range(n):
        acc = 0.0
        for k in range(n_trees):
            node = offsets[k]
            f = feature[node]
            while f >= 0:
                node = left[node] if X[i, f] <= threshold[node] else right[node]
                f = feature[node]
            acc += value[node]
        out[i] = acc
    return out
