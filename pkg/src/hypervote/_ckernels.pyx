# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled hot kernels: hyperedge key encoding, counting and scoring.

Mirrors :mod:`hypervote._pykernels` bit for bit; see there for the contracts.
"""

import numpy as np

cimport numpy as cnp
from cython.operator cimport dereference as deref
from cython.operator cimport preincrement as inc
from libc.stdint cimport int64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

cnp.import_array()


def encode_keys(bins, combos, long long bin_min, long long n_bins):
    cdef const int64_t[:, ::1] bv = np.ascontiguousarray(bins, dtype=np.int64)
    cdef const int64_t[:, ::1] cv = np.ascontiguousarray(combos, dtype=np.int64)
    cdef Py_ssize_t n = bv.shape[0]
    cdef Py_ssize_t n_combos = cv.shape[0]
    cdef Py_ssize_t order = cv.shape[1]
    cdef long long block = 1
    cdef Py_ssize_t e
    for e in range(order):
        block *= n_bins
    out_arr = np.empty((n, n_combos), dtype=np.int64)
    cdef int64_t[:, ::1] out = out_arr
    cdef Py_ssize_t i, kk
    cdef long long key, rel
    cdef bint ok
    for i in range(n):
        for kk in range(n_combos):
            key = 0
            ok = True
            for e in range(order):
                rel = bv[i, cv[kk, e]] - bin_min
                if rel < 0 or rel >= n_bins:
                    ok = False
                    break
                key = key * n_bins + rel
            if ok:
                out[i, kk] = kk * block + key
            else:
                out[i, kk] = -1
    return out_arr


def count_class_incidence(keys, labels, int n_classes):
    cdef const int64_t[:, ::1] kv = np.ascontiguousarray(keys, dtype=np.int64)
    cdef const int64_t[::1] lv = np.ascontiguousarray(labels, dtype=np.int64)
    cdef Py_ssize_t n = kv.shape[0]
    cdef Py_ssize_t per_unit = kv.shape[1]
    cdef unordered_map[int64_t, Py_ssize_t] index
    cdef unordered_map[int64_t, Py_ssize_t].iterator it
    cdef vector[double] counts
    cdef Py_ssize_t i, kk, slot, c0
    cdef int64_t key
    cdef long long lab
    index.reserve(n * per_unit)
    counts.reserve(n * per_unit)
    for i in range(n):
        lab = lv[i]
        for kk in range(per_unit):
            key = kv[i, kk]
            it = index.find(key)
            if it == index.end():
                slot = <Py_ssize_t> index.size()
                index[key] = slot
                for c0 in range(n_classes):
                    counts.push_back(0.0)
            else:
                slot = deref(it).second
            counts[slot * n_classes + lab] += 1.0
    cdef Py_ssize_t n_keys = <Py_ssize_t> index.size()
    uniq_arr = np.empty(n_keys, dtype=np.int64)
    counts_arr = np.empty((n_keys, n_classes), dtype=np.float64)
    cdef int64_t[::1] uv = uniq_arr
    cdef double[:, ::1] cw = counts_arr
    cdef Py_ssize_t c
    it = index.begin()
    while it != index.end():
        slot = deref(it).second
        uv[slot] = deref(it).first
        for c in range(n_classes):
            cw[slot, c] = counts[slot * n_classes + c]
        inc(it)
    order_arr = np.argsort(uniq_arr)
    return uniq_arr[order_arr], counts_arr[order_arr]


def sum_weight_rows(keys, model_keys, weights, int n_classes):
    cdef const int64_t[:, ::1] kv = np.ascontiguousarray(keys, dtype=np.int64)
    cdef const int64_t[::1] mk = np.ascontiguousarray(model_keys, dtype=np.int64)
    cdef const double[:, ::1] wv = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t nu = kv.shape[0]
    cdef Py_ssize_t per_unit = kv.shape[1]
    cdef Py_ssize_t n_stored = mk.shape[0]
    out_arr = np.zeros((nu, n_classes), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double uniform = 1.0 / n_classes
    cdef Py_ssize_t u, kk, lo, hi, mid, c
    cdef int64_t key
    cdef bint hit
    for u in range(nu):
        for kk in range(per_unit):
            key = kv[u, kk]
            hit = False
            lo = 0
            if key >= 0 and n_stored > 0:
                hi = n_stored
                while lo < hi:
                    mid = (lo + hi) // 2
                    if mk[mid] < key:
                        lo = mid + 1
                    else:
                        hi = mid
                if lo < n_stored and mk[lo] == key:
                    hit = True
            if hit:
                for c in range(n_classes):
                    out[u, c] += wv[lo, c]
            else:
                for c in range(n_classes):
                    out[u, c] += uniform
    return out_arr
