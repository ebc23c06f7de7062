"""Independent brute-force reference computations used by the tests.

Everything here is written with explicit loops and set operations so it
shares no code with the library paths it checks.
"""

from itertools import combinations, product

import numpy as np


def face_product_bruteforce(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n, ma = a.shape
    _, mb = b.shape
    out = np.zeros((n, ma * mb))
    for i in range(n):
        col = 0
        for ja in range(ma):
            for jb in range(mb):
                out[i, col] = a[i, ja] * b[i, jb]
                col += 1
    return out


def chain_bruteforce(ms) -> np.ndarray:
    """Every column of the chained product, computed entry by entry."""
    ms = [np.asarray(m, dtype=float) for m in ms]
    n = ms[0].shape[0]
    col_sets = list(product(*[range(m.shape[1]) for m in ms]))
    out = np.zeros((n, len(col_sets)))
    for i in range(n):
        for col, choice in enumerate(col_sets):
            value = 1.0
            for m, j in zip(ms, choice):
                value *= m[i, j]
            out[i, col] = value
    return out


def intersection_incidence(bins: np.ndarray, order: int) -> np.ndarray:
    """Dense incidence of all order-way hyperedge intersections, from sets.

    Hyperedges of the base structure are (feature, bin-value) membership
    sets; columns enumerate feature combinations lexicographically and bin
    tuples with the first feature most significant.
    """
    n, m = bins.shape
    lo, hi = int(bins.min()), int(bins.max())
    members = {
        (j, t): {i for i in range(n) if bins[i, j] == t}
        for j in range(m)
        for t in range(lo, hi + 1)
    }
    cols = []
    for combo in combinations(range(m), order):
        for ts in product(range(lo, hi + 1), repeat=order):
            common = set(range(n))
            for j, t in zip(combo, ts):
                common &= members[(j, t)]
            col = np.zeros(n)
            col[sorted(common)] = 1.0
            cols.append(col)
    return np.column_stack(cols)


def dense_weight_columns(incidence: np.ndarray, labels: np.ndarray):
    """Per-hyperedge class proportions, row-normalised; empty columns dropped.

    Returns (nonzero column indices, weight rows) with rows aligned to the
    indices. `labels` are 1-based.
    """
    n_classes = int(labels.max())
    class_sizes = np.array(
        [(labels == k).sum() for k in range(1, n_classes + 1)], dtype=float
    )
    proportions = np.stack(
        [
            incidence[labels == k].sum(axis=0) / class_sizes[k - 1]
            for k in range(1, n_classes + 1)
        ],
        axis=1,
    )
    nonzero = np.flatnonzero(proportions.sum(axis=1) > 0)
    rows = proportions[nonzero]
    return nonzero, rows / rows.sum(axis=1, keepdims=True)
