# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled array kernels; see _kernels_py for the reference semantics."""

import numpy as np


def column_repeat(const long long[:, ::1] cells, long long S):
    cdef Py_ssize_t F = cells.shape[0]
    cdef Py_ssize_t K = cells.shape[1]
    cdef Py_ssize_t f, k
    cdef long long v
    last = np.full(S + 1, -1, dtype=np.int64)
    stamp = np.full(S + 1, -1, dtype=np.int64)
    cdef long long[::1] last_v = last
    cdef long long[::1] stamp_v = stamp
    for k in range(K):
        for f in range(F):
            v = cells[f, k]
            if v == 0:
                continue
            if stamp_v[v] == k:
                return (v, k, last_v[v], f)
            stamp_v[v] = k
            last_v[v] = f
    return None


def pair_scan(const long long[:, ::1] cells, const long long[::1] ptr,
              const long long[::1] rows, const long long[::1] cols):
    cdef Py_ssize_t s, a, b, lo, hi
    cdef long long f1, k1, f2, k2
    for s in range(1, ptr.shape[0]):
        lo = ptr[s - 1]
        hi = ptr[s]
        for a in range(lo, hi):
            f1 = rows[a]
            k1 = cols[a]
            for b in range(a + 1, hi):
                f2 = rows[b]
                k2 = cols[b]
                if f1 == f2 or k1 == k2:
                    return (1, s, f1, k1, f2, k2)
                if cells[f1, k2] != 0 or cells[f2, k1] != 0:
                    return (2, s, f1, k1, f2, k2)
    return None


def row_counts(const long long[:, ::1] cells, const long long[::1] ptr,
               const long long[::1] rows, const long long[::1] cols):
    out = np.zeros(rows.shape[0], dtype=np.int64)
    cdef long long[::1] out_v = out
    cdef Py_ssize_t s, a, b, lo, hi
    cdef long long f, c
    for s in range(1, ptr.shape[0]):
        lo = ptr[s - 1]
        hi = ptr[s]
        for a in range(lo, hi):
            f = rows[a]
            c = 0
            for b in range(lo, hi):
                if cells[f, cols[b]] != 0:
                    c += 1
            out_v[a] = c
    return out


def relabel(const long long[:, ::1] cells, long long S1, long long group):
    cdef Py_ssize_t F = cells.shape[0]
    cdef Py_ssize_t K = cells.shape[1]
    cdef Py_ssize_t f, k
    cdef long long v
    out = np.zeros((F, K), dtype=np.int64)
    seen = np.zeros(S1 + 1, dtype=np.int64)
    cdef long long[:, ::1] out_v = out
    cdef long long[::1] seen_v = seen
    for f in range(F):
        for k in range(K):
            v = cells[f, k]
            if v != 0:
                out_v[f, k] = v + (seen_v[v] // group) * S1
                seen_v[v] += 1
    return out
