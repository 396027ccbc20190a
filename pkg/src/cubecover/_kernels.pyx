# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: BFS distance tables and median-axiom scans over bitsets."""
import numpy as np

from libc.stdint cimport int32_t, uint64_t
from libc.stdlib cimport free, malloc


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


def all_pairs_bfs(int n, const int32_t[::1] indptr, const int32_t[::1] indices):
    out = np.full((n, n), -1, dtype=np.int32)
    cdef int32_t[:, ::1] dist = out
    cdef int32_t* queue = <int32_t*> malloc(max(n, 1) * sizeof(int32_t))
    cdef int s, head, tail, u, w, j
    if queue == NULL:
        raise MemoryError()
    try:
        with nogil:
            for s in range(n):
                dist[s, s] = 0
                queue[0] = s
                head = 0
                tail = 1
                while head < tail:
                    u = queue[head]
                    head += 1
                    for j in range(indptr[u], indptr[u + 1]):
                        w = indices[j]
                        if dist[s, w] < 0:
                            dist[s, w] = dist[s, u] + 1
                            queue[tail] = w
                            tail += 1
    finally:
        free(queue)
    return out


cdef uint64_t* _interval_bits(const int32_t[:, ::1] d, int n, int words) except NULL:
    cdef uint64_t* bits = <uint64_t*> malloc(<size_t> n * n * words * sizeof(uint64_t))
    cdef int a, b, z
    cdef size_t base
    if bits == NULL:
        raise MemoryError()
    with nogil:
        for a in range(n):
            for b in range(n):
                base = (<size_t> a * n + b) * words
                for z in range(words):
                    bits[base + z] = 0
                for z in range(n):
                    if d[a, z] + d[z, b] == d[a, b]:
                        bits[base + (z >> 6)] |= (<uint64_t> 1) << (z & 63)
    return bits


def median_violation(const int32_t[:, ::1] d):
    """First triple whose interval triple-intersection is not a singleton, or None."""
    cdef int n = d.shape[0]
    cdef int words = (n + 63) >> 6
    cdef uint64_t* bits = _interval_bits(d, n, words)
    cdef int x, y, z, k, count, bad_x = -1, bad_y = -1, bad_z = -1, bad_count = 0
    cdef size_t bxy, byz, bxz
    try:
        with nogil:
            for x in range(n):
                for y in range(x, n):
                    bxy = (<size_t> x * n + y) * words
                    for z in range(y, n):
                        byz = (<size_t> y * n + z) * words
                        bxz = (<size_t> x * n + z) * words
                        count = 0
                        for k in range(words):
                            count += __builtin_popcountll(bits[bxy + k] & bits[byz + k] & bits[bxz + k])
                        if count != 1:
                            bad_x = x
                            bad_y = y
                            bad_z = z
                            bad_count = count
                            break
                    if bad_x >= 0:
                        break
                if bad_x >= 0:
                    break
    finally:
        free(bits)
    if bad_x < 0:
        return None
    return (bad_x, bad_y, bad_z, bad_count)


def median_table(const int32_t[:, ::1] d):
    """Table m[x, y, z] of medians; -1 where the triple intersection is not a singleton."""
    cdef int n = d.shape[0]
    cdef int words = (n + 63) >> 6
    out = np.full((n, n, n), -1, dtype=np.int32)
    cdef int32_t[:, :, ::1] m = out
    cdef uint64_t* bits = _interval_bits(d, n, words)
    cdef int x, y, z, k, count, where
    cdef uint64_t word
    cdef size_t bxy, byz, bxz
    try:
        with nogil:
            for x in range(n):
                for y in range(n):
                    bxy = (<size_t> x * n + y) * words
                    for z in range(n):
                        byz = (<size_t> y * n + z) * words
                        bxz = (<size_t> x * n + z) * words
                        count = 0
                        where = -1
                        for k in range(words):
                            word = bits[bxy + k] & bits[byz + k] & bits[bxz + k]
                            if word:
                                count += __builtin_popcountll(word)
                                where = (k << 6) + __builtin_ctzll(word)
                        if count == 1:
                            m[x, y, z] = where
    finally:
        free(bits)
    return out
