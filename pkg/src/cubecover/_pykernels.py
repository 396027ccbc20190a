"""Pure-Python versions of the compiled kernels (same signatures and results)."""
from collections import deque

import numpy as np


def all_pairs_bfs(n, indptr, indices):
    indptr = [int(i) for i in indptr]
    indices = [int(i) for i in indices]
    out = np.full((n, n), -1, dtype=np.int32)
    for s in range(n):
        row = [-1] * n
        row[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = row[u] + 1
            for j in range(indptr[u], indptr[u + 1]):
                w = indices[j]
                if row[w] < 0:
                    row[w] = du
                    queue.append(w)
        out[s] = row
    return out


def _interval_bits(d):
    n = d.shape[0]
    rows = d.tolist()
    bits = [[0] * n for _ in range(n)]
    for a in range(n):
        ra = rows[a]
        for b in range(a, n):
            rb = rows[b]
            dab = ra[b]
            mask = 0
            for z in range(n):
                if ra[z] + rb[z] == dab:
                    mask |= 1 << z
            bits[a][b] = bits[b][a] = mask
    return bits


def median_violation(d):
    n = d.shape[0]
    bits = _interval_bits(d)
    for x in range(n):
        bx = bits[x]
        for y in range(x, n):
            bxy = bx[y]
            by = bits[y]
            for z in range(y, n):
                count = (bxy & by[z] & bx[z]).bit_count()
                if count != 1:
                    return (x, y, z, count)
    return None


def median_table(d):
    n = d.shape[0]
    bits = _interval_bits(d)
    out = np.full((n, n, n), -1, dtype=np.int32)
    for x in range(n):
        for y in range(n):
            bxy = bits[x][y]
            for z in range(n):
                word = bxy & bits[y][z] & bits[x][z]
                if word and not word & (word - 1):
                    out[x, y, z] = word.bit_length() - 1
    return out
