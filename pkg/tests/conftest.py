"""Shared fixtures and brute-force oracles.

The oracles here use only plain dicts/sets built from the edge list, never the
library's own distance tables, walls or bitsets.
"""
import itertools
from collections import deque

import pytest

from cubecover import build_graph
from cubecover.generators import grid, staircase, tree, tree_product


def bfs_dist(n, edges):
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    dist = {}
    for s in range(n):
        seen = {s: 0}
        q = deque([s])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen[w] = seen[u] + 1
                    q.append(w)
        for t, d in seen.items():
            dist[s, t] = d
    return dist


def brute_interval(dist, n, a, b):
    return {z for z in range(n) if dist[a, z] + dist[z, b] == dist[a, b]}


def brute_medians(dist, n, x, y, z):
    return (brute_interval(dist, n, x, y) & brute_interval(dist, n, y, z)
            & brute_interval(dist, n, z, x))


def brute_walls(n, edges, dist):
    """Djokovic-Winkler splits: each edge uv gives ``{w : d(w,u) < d(w,v)}``; dedupe up to complement."""
    everything = frozenset(range(n))
    walls = set()
    for u, v in edges:
        side = frozenset(w for w in range(n) if dist[w, u] < dist[w, v])
        walls.add(side if 0 in side else everything - side)
    return sorted(walls, key=sorted)


def brute_crossing(n, a, b):
    everything = frozenset(range(n))
    return all(p & q for p in (a, everything - a) for q in (b, everything - b))


def brute_dimension(n, walls):
    best = 0 if not walls else 1
    k = 2
    while True:
        found = any(
            all(brute_crossing(n, a, b) for a, b in itertools.combinations(c, 2))
            for c in itertools.combinations(walls, k)
        )
        if not found:
            return best
        best = k
        k += 1


def brute_normal_path(n, edges, x, y):
    """Greedy cube steps straight from the definition, on edge/split data only."""
    dist = bfs_dist(n, edges)
    walls = brute_walls(n, edges, dist)
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)

    def sep(a, b):
        return {i for i, w in enumerate(walls) if (a in w) != (b in w)}

    cur, verts = x, [x]
    while cur != y:
        step = set()
        for w in adj[cur]:
            step |= sep(cur, w) & sep(cur, y)
        # the opposite corner of the cube: the unique vertex separated from cur by exactly `step`
        nxt = [v for v in range(n) if sep(cur, v) == step]
        assert len(nxt) == 1
        cur = nxt[0]
        verts.append(cur)
    return verts


def small_family():
    """Instance family of the acceptance criteria, keyed by name."""
    out = {}
    for n in (1, 2, 5, 10, 20, 30):
        for seed in (0, 1, 2):
            out[f"tree-{n}-s{seed}"] = tree(n, seed)
    for a in range(1, 6):
        for b in range(a, 6):
            out[f"grid-{a}x{b}"] = grid(a, b)
    for dims in ((2, 2, 2), (2, 2, 3), (3, 3, 3)):
        out["grid-" + "x".join(map(str, dims))] = grid(*dims)
    for sizes in ((2, 2), (3, 4), (5, 5), (6, 6), (2, 3, 4), (3, 3, 3)):
        for seed in (0, 1):
            out[f"tree_product-{'x'.join(map(str, sizes))}-s{seed}"] = tree_product(sizes, seed)
    for dims in ((3, 3), (4, 4), (5, 5), (4, 6)):
        for seed in (0, 1, 2):
            g = staircase(dims, seed)
            if g.n <= 25:
                out[f"staircase-{dims[0]}x{dims[1]}-s{seed}"] = g
    return out


_FAMILY = None


def family():
    global _FAMILY
    if _FAMILY is None:
        _FAMILY = small_family()
    return _FAMILY


@pytest.fixture(scope="session")
def instances():
    return family()


@pytest.fixture
def grid33():
    return grid(3, 3)


@pytest.fixture
def square():
    return build_graph([(0, 1), (1, 2), (2, 3), (3, 0)])


def path_graph(n):
    return build_graph([(i, i + 1) for i in range(n - 1)], n=n)


def cube_graph():
    verts = list(itertools.product((0, 1), repeat=3))
    idx = {v: i for i, v in enumerate(verts)}
    edges = [(idx[a], idx[b]) for a, b in itertools.combinations(verts, 2)
             if sum(x != y for x, y in zip(a, b)) == 1]
    return build_graph(edges)


def gv(i, j, width=3):
    """Vertex id of grid coordinate ``(i, j)`` (lexicographic numbering)."""
    return i * width + j


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for num in sorted(results):
            terminalreporter.write_line(results[num])
