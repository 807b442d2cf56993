# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: FNV-1a hashing, signed accumulation, distance scans.

Must stay semantically identical to _purekernels.py; keep strict IEEE
float64 arithmetic (no fast-math) so both backends agree on hashed
embeddings bit for bit.
"""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport uint8_t, uint64_t

cnp.import_array()

cdef uint64_t FNV_OFFSET_C = 0xCBF29CE484222325UL
cdef uint64_t FNV_PRIME_C = 0x100000001B3UL

FNV_OFFSET = FNV_OFFSET_C
FNV_PRIME = FNV_PRIME_C


cdef uint64_t _fnv1a64(const uint8_t* data, Py_ssize_t n) nogil:
    cdef uint64_t h = FNV_OFFSET_C
    cdef Py_ssize_t i
    for i in range(n):
        h ^= data[i]
        h *= FNV_PRIME_C
    return h


def fnv1a64(bytes data):
    """FNV-1a 64-bit hash of a byte string."""
    return _fnv1a64(<const uint8_t*> data, len(data))


def accumulate_tokens(list tokens, int dim):
    """Signed feature-hash accumulation (unnormalized), +-1.0 per token."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] acc = np.zeros(dim, dtype=np.float64)
    cdef double[::1] out = acc
    cdef uint64_t h
    cdef bytes raw
    for token in tokens:
        raw = (<str> token).encode("utf-8")
        h = _fnv1a64(<const uint8_t*> raw, len(raw))
        if (h >> 63) & 1:
            out[<Py_ssize_t> (h % <uint64_t> dim)] -= 1.0
        else:
            out[<Py_ssize_t> (h % <uint64_t> dim)] += 1.0
    return acc


def nearest_centroid(cnp.ndarray[cnp.float64_t, ndim=1] point,
                     cnp.ndarray[cnp.float64_t, ndim=2] centroids):
    """Index and value of the smallest 1 - dot(point, row); first wins ties."""
    cdef const double[::1] p = np.ascontiguousarray(point)
    cdef const double[:, ::1] c = np.ascontiguousarray(centroids)
    cdef Py_ssize_t rows = c.shape[0]
    cdef Py_ssize_t dim = c.shape[1]
    cdef Py_ssize_t i, j, best = 0
    cdef double dot, dist, best_dist = 2.0
    if rows == 0:
        raise ValueError("no centroids")
    with nogil:
        for i in range(rows):
            dot = 0.0
            for j in range(dim):
                dot += c[i, j] * p[j]
            dist = 1.0 - dot
            if i == 0 or dist < best_dist:
                best_dist = dist
                best = i
    return best, best_dist


def distances_to(cnp.ndarray[cnp.float64_t, ndim=2] vectors,
                 cnp.ndarray[cnp.float64_t, ndim=1] centroid):
    """Cosine distances 1 - dot(row, centroid) for unit-norm rows."""
    cdef const double[:, ::1] v = np.ascontiguousarray(vectors)
    cdef const double[::1] c = np.ascontiguousarray(centroid)
    cdef Py_ssize_t rows = v.shape[0]
    cdef Py_ssize_t dim = v.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(rows, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j
    cdef double dot
    with nogil:
        for i in range(rows):
            dot = 0.0
            for j in range(dim):
                dot += v[i, j] * c[j]
            o[i] = 1.0 - dot
    return out
