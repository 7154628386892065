# cython: language_level=3
"""Compiled implementations of the hot scoring kernels.

Signature-compatible with ``_scoring_py``; see that module for the contract
of each function.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log

cnp.import_array()


def labeled_neighbor_counts(cnp.int64_t[::1] tag_indptr,
                            cnp.int32_t[::1] tag_lefts,
                            cnp.int64_t[::1] cands,
                            cnp.uint8_t[::1] pos_flag,
                            cnp.uint8_t[::1] neg_flag):
    cdef Py_ssize_t n = cands.shape[0]
    pos_out = np.zeros(n, dtype=np.int64)
    neg_out = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] pos_v = pos_out
    cdef cnp.int64_t[::1] neg_v = neg_out
    cdef Py_ssize_t i, e
    cdef cnp.int64_t c, p, q
    cdef cnp.int32_t u
    for i in range(n):
        c = cands[i]
        p = 0
        q = 0
        for e in range(tag_indptr[c], tag_indptr[c + 1]):
            u = tag_lefts[e]
            p += pos_flag[u]
            q += neg_flag[u]
        pos_v[i] = p
        neg_v[i] = q
    return pos_out, neg_out


def cooccurrence_degrees(cnp.int64_t[::1] cands,
                         cnp.int64_t[::1] tag_indptr,
                         cnp.int32_t[::1] tag_lefts,
                         cnp.int64_t[::1] left_indptr,
                         cnp.int32_t[::1] left_tags,
                         cnp.uint8_t[::1] active):
    cdef Py_ssize_t n = cands.shape[0]
    cdef Py_ssize_t n_tags = tag_indptr.shape[0] - 1
    out = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] out_v = out
    stamp = np.full(n_tags, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] stamp_v = stamp
    cdef Py_ssize_t i, e, f
    cdef cnp.int64_t c, count
    cdef cnp.int32_t u, v
    for i in range(n):
        c = cands[i]
        count = 0
        for e in range(tag_indptr[c], tag_indptr[c + 1]):
            u = tag_lefts[e]
            if active[u] == 0:
                continue
            for f in range(left_indptr[u], left_indptr[u + 1]):
                v = left_tags[f]
                if v != c and stamp_v[v] != i:
                    stamp_v[v] = i
                    count += 1
        out_v[i] = count
    return out


def sgns_train(cnp.float64_t[:, ::1] w_in,
               cnp.float64_t[:, ::1] w_out,
               cnp.int32_t[::1] centers,
               cnp.int32_t[::1] contexts,
               cnp.int32_t[:, ::1] negatives,
               double lr):
    cdef Py_ssize_t n_pairs = centers.shape[0]
    cdef Py_ssize_t dim = w_in.shape[1]
    cdef Py_ssize_t k = negatives.shape[1]
    grad_arr = np.zeros(dim, dtype=np.float64)
    cdef cnp.float64_t[::1] grad = grad_arr
    cdef Py_ssize_t t, j, d
    cdef cnp.int32_t c, o, nn
    cdef double x, f, g, loss = 0.0
    for t in range(n_pairs):
        c = centers[t]
        o = contexts[t]
        for d in range(dim):
            grad[d] = 0.0
        x = 0.0
        for d in range(dim):
            x += w_in[c, d] * w_out[o, d]
        f = 1.0 / (1.0 + exp(-x))
        g = (1.0 - f) * lr
        for d in range(dim):
            grad[d] += g * w_out[o, d]
            w_out[o, d] += g * w_in[c, d]
        loss -= log(f if f > 1e-12 else 1e-12)
        for j in range(k):
            nn = negatives[t, j]
            if nn == o:
                continue
            x = 0.0
            for d in range(dim):
                x += w_in[c, d] * w_out[nn, d]
            f = 1.0 / (1.0 + exp(-x))
            g = -f * lr
            for d in range(dim):
                grad[d] += g * w_out[nn, d]
                w_out[nn, d] += g * w_in[c, d]
            loss -= log(1.0 - f if 1.0 - f > 1e-12 else 1e-12)
        for d in range(dim):
            w_in[c, d] += grad[d]
    return loss
