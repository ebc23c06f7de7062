"""Pure-numpy implementations of the hot kernels.

Fallback backend used when the compiled extension is unavailable (or forced
via ``HYPERVOTE_BACKEND=python``). Both backends must produce bit-identical
results: counts are exact integers, and weight-row summation walks the
per-unit keys in the same fixed order.
"""

from __future__ import annotations

import numpy as np


def encode_keys(bins, combos, bin_min, n_bins):
    """Encode each unit's hyperedge keys as integers.

    ``bins`` is (n, m) integer bin indices, ``combos`` is (K, order) feature
    index combinations. A key is ``combo_rank * n_bins**order + local`` where
    ``local`` stacks the combo's bin offsets big-endian (first feature most
    significant) — exactly the column index of the dense incidence expansion.
    Keys touching any bin outside ``[bin_min, bin_min + n_bins)`` encode as -1.
    """
    bins = np.ascontiguousarray(bins, dtype=np.int64)
    combos = np.ascontiguousarray(combos, dtype=np.int64)
    order = combos.shape[1]
    rel = bins - bin_min
    sel = rel[:, combos]  # (n, K, order)
    valid = ((sel >= 0) & (sel < n_bins)).all(axis=2)
    powers = n_bins ** np.arange(order - 1, -1, -1, dtype=np.int64)
    local = sel @ powers
    block = np.int64(n_bins) ** order
    keys = np.arange(combos.shape[0], dtype=np.int64) * block + local
    return np.where(valid, keys, np.int64(-1))


def count_class_incidence(keys, labels, n_classes):
    """Per-key class incidence counts over a training set.

    ``keys`` is (n, K) with no -1 entries, ``labels`` is (n,) 0-based class
    indices. Returns the sorted unique keys and a (U, n_classes) float count
    matrix aligned with them.
    """
    keys = np.ascontiguousarray(keys, dtype=np.int64)
    labels = np.ascontiguousarray(labels, dtype=np.int64)
    n, per_unit = keys.shape
    uniq, inv = np.unique(keys.ravel(), return_inverse=True)
    counts = np.zeros((uniq.size, n_classes))
    np.add.at(counts, (inv, np.repeat(labels, per_unit)), 1.0)
    return uniq, counts


def sum_weight_rows(keys, model_keys, weights, n_classes):
    """Sum stored weight rows over each unit's keys.

    Keys absent from ``model_keys`` (including the -1 out-of-range sentinel)
    contribute a uniform ``1/n_classes`` to every class. Accumulation order is
    fixed (per-unit key order) so results match the compiled backend bit for
    bit.
    """
    keys = np.ascontiguousarray(keys, dtype=np.int64)
    model_keys = np.ascontiguousarray(model_keys, dtype=np.int64)
    weights = np.ascontiguousarray(weights, dtype=float)
    nu, per_unit = keys.shape
    total = np.zeros((nu, n_classes))
    uniform = 1.0 / n_classes
    n_stored = model_keys.size
    for k in range(per_unit):
        col = keys[:, k]
        if n_stored:
            pos = np.searchsorted(model_keys, col)
            pos_c = np.minimum(pos, n_stored - 1)
            hit = (col >= 0) & (pos < n_stored) & (model_keys[pos_c] == col)
            total += np.where(hit[:, None], weights[pos_c], uniform)
        else:
            total += uniform
    return total
