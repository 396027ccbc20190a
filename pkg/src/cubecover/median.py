"""Finite CAT(0) cube complexes represented by their median 1-skeleta.

Vertices are dense ids ``0..n-1``; every vertex set is an int bitset (see
:mod:`cubecover.bits`).  Distances are the edge metric.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .bits import from_bool, has, iter_bits, members, single
from .clique import max_clique

DEFAULT_VALIDATION_CAP = 400


class GraphError(ValueError):
    """Malformed or non-median input."""


class DisconnectedGraphError(GraphError):
    pass


class NotMedianError(GraphError):
    def __init__(self, triple, intersection):
        self.triple = tuple(triple)
        self.intersection = tuple(intersection)
        super().__init__(
            f"median axiom fails at {self.triple}: "
            f"[x,y]∩[y,z]∩[z,x] = {sorted(self.intersection)}"
        )


class NotValidatedError(GraphError):
    pass


@dataclass(frozen=True)
class Hyperplane:
    """A wall: the complementary halfspaces it bounds and the edges dual to it.

    ``minus_side`` is the halfspace containing vertex 0.
    """

    id: int
    minus_side: int
    plus_side: int
    edges: tuple[tuple[int, int], ...] = field(repr=False)

    def side_of(self, v):
        """Bitset of the halfspace containing ``v``."""
        return self.minus_side if has(self.minus_side, v) else self.plus_side

    def separates(self, x, y):
        return has(self.minus_side, x) != has(self.minus_side, y)


class MedianGraph:
    """An immutable connected graph with its all-pairs distance table.

    Queries cache intervals and walls internally; the caches only ever receive
    values that are pure functions of the graph, so sharing is harmless.
    """

    def __init__(self, n, edges, dist, *, validated=False, labels=None, meta=None):
        self.n = n
        self.edges = tuple(edges)
        self.dist = dist
        self.validated = validated
        self.labels = dict(labels or {})
        self.meta = dict(meta or {})
        nbrs = [[] for _ in range(n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        self.neighbors = tuple(tuple(sorted(a)) for a in nbrs)
        self._rows = dist.tolist()
        self._intervals = {}
        self._walls = None
        self.cache = {}

    @property
    def vertex_count(self):
        return self.n

    @property
    def all_vertices(self):
        return (1 << self.n) - 1

    def d(self, x, y):
        return self._rows[x][y]

    def row(self, x):
        return self._rows[x]

    def interval_mask(self, a, b):
        key = (a, b) if a <= b else (b, a)
        mask = self._intervals.get(key)
        if mask is None:
            dist = self.dist
            mask = from_bool(dist[a] + dist[b] == dist[a, b])
            self._intervals[key] = mask
        return mask

    def ball_mask(self, x, r):
        return from_bool(self.dist[x] <= r)

    def label(self, v):
        return self.labels.get(v, str(v))

    # walls ---------------------------------------------------------------
    @property
    def hyperplanes(self):
        if self._walls is None:
            self._walls = _extract_walls(self)
        return self._walls.walls

    def wall_between(self, u, v):
        self.hyperplanes
        return self._walls.edge_wall[(u, v) if u < v else (v, u)]

    def neighbor_walls(self, v):
        """Mapping ``neighbour -> id of the wall dual to the edge``."""
        self.hyperplanes
        return self._walls.nbr_wall[v]

    def signature(self, v):
        """Bitset of walls having ``v`` on their plus side."""
        self.hyperplanes
        return self._walls.signature[v]

    def separating(self, x, y):
        """Bitset of the walls separating ``x`` from ``y``."""
        self.hyperplanes
        sig = self._walls.signature
        return sig[x] ^ sig[y]

    @property
    def crossing_adj(self):
        self.hyperplanes
        return self._walls.cross_adj

    # serialisation ---------------------------------------------------------
    def to_dict(self):
        out = {
            "vertices": self.n,
            "edges": [list(e) for e in sorted(self.edges)],
            "validated": self.validated,
        }
        if self.labels:
            out["labels"] = {str(k): v for k, v in sorted(self.labels.items())}
        if self.meta:
            out["meta"] = self.meta
        return out

    @classmethod
    def from_dict(cls, data, validate=True, cap=DEFAULT_VALIDATION_CAP):
        try:
            n = int(data["vertices"])
            edges = [(int(u), int(v)) for u, v in data["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"malformed graph JSON: {exc}") from exc
        labels = {int(k): v for k, v in (data.get("labels") or {}).items()}
        trusted = bool(data.get("validated")) and n > cap
        g = build_graph(
            edges,
            validate=validate and not trusted,
            n=n,
            labels=labels,
            meta=data.get("meta"),
            cap=cap,
        )
        if trusted:
            g.validated = True
        return g

    def __repr__(self):
        return f"MedianGraph(n={self.n}, edges={len(self.edges)}, validated={self.validated})"


@dataclass
class _Walls:
    walls: list
    edge_wall: dict
    nbr_wall: list
    signature: list
    cross_adj: list


@dataclass(frozen=True)
class IntervalView:
    """The interval ``[a, b]`` with its separating walls ordered from ``a``.

    ``h <= k`` iff the halfspace of ``h`` containing ``a`` is inside that of ``k``.
    """

    a: int
    b: int
    mask: int
    walls: tuple[int, ...]
    near_sides: dict = field(repr=False, compare=False)

    @property
    def members(self):
        return frozenset(iter_bits(self.mask))

    def __contains__(self, v):
        return has(self.mask, v)

    def leq(self, h, k):
        sh, sk = self.near_sides[h], self.near_sides[k]
        return sh & ~sk == 0

    def lt(self, h, k):
        return h != k and self.leq(h, k)

    def comparable(self, h, k):
        return self.leq(h, k) or self.leq(k, h)


def build_graph(edge_list, validate=True, *, n=None, labels=None, meta=None,
                cap=DEFAULT_VALIDATION_CAP):
    """Ingest an edge list into a :class:`MedianGraph`.

    With ``validate`` the median axiom is checked over all vertex triples and a
    :class:`NotMedianError` names a witnessing triple on failure.
    """
    edges = set()
    for u, v in edge_list:
        if u == v:
            raise GraphError(f"self-loop at {u}")
        if u < 0 or v < 0:
            raise GraphError("vertex ids must be non-negative")
        e = (u, v) if u < v else (v, u)
        if e in edges:
            raise GraphError(f"duplicate edge {e}")
        edges.add(e)
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    if n < 1:
        raise GraphError("graph must have at least one vertex")
    if edges and max(max(e) for e in edges) >= n:
        raise GraphError("edge endpoint outside 0..n-1")
    edges = sorted(edges)

    degree = np.zeros(n + 1, dtype=np.int64)
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    for v in range(n):
        degree[v + 1] = len(adj[v])
    indptr = np.cumsum(degree).astype(np.int32)
    indices = np.array([w for a in adj for w in sorted(a)], dtype=np.int32)
    dist = kernels.all_pairs_bfs(n, indptr, indices)
    if (dist[0] < 0).any():
        missing = int(np.flatnonzero(dist[0] < 0)[0])
        raise DisconnectedGraphError(f"vertex {missing} is unreachable from 0")

    g = MedianGraph(n, edges, dist, labels=labels, meta=meta)
    if validate:
        if n > cap:
            raise GraphError(f"{n} vertices exceed the validation cap {cap}")
        bad = kernels.median_violation(dist)
        if bad is not None:
            x, y, z, _ = bad
            inter = g.interval_mask(x, y) & g.interval_mask(y, z) & g.interval_mask(z, x)
            raise NotMedianError((x, y, z), members(inter))
        g.validated = True
        g.hyperplanes  # walls double as a convexity self-check
    return g


def _require_validated(g):
    if not g.validated:
        raise NotValidatedError("operation needs a validated median graph")


def median(g, x, y, z):
    """The unique vertex of ``[x,y] ∩ [y,z] ∩ [z,x]``."""
    _require_validated(g)
    m = single(g.interval_mask(x, y) & g.interval_mask(y, z) & g.interval_mask(z, x))
    if m is None:
        raise NotMedianError((x, y, z), members(
            g.interval_mask(x, y) & g.interval_mask(y, z) & g.interval_mask(z, x)))
    return m


def interval(g, a, b):
    mask = g.interval_mask(a, b)
    sep = g.separating(a, b)
    walls = g.hyperplanes
    near = {h: walls[h].side_of(a) for h in iter_bits(sep)}
    return IntervalView(a, b, mask, tuple(sorted(near)), near)


def hyperplanes(g):
    _require_validated(g)
    return list(g.hyperplanes)


def crossing(h, k):
    """True iff all four quarter intersections of the two walls are nonempty."""
    return bool(
        h.minus_side & k.minus_side
        and h.minus_side & k.plus_side
        and h.plus_side & k.minus_side
        and h.plus_side & k.plus_side
    )


def dimension(g, region=None, cap=64):
    """Largest number of pairwise crossing walls, over ``H(a, b)`` if ``region=(a, b)``."""
    _require_validated(g)
    if region is None:
        cand = (1 << len(g.hyperplanes)) - 1
        key = None
    else:
        a, b = region
        cand = g.separating(a, b)
        key = ("dim", cand)
        hit = g.cache.get(key)
        if hit is not None:
            return hit
    if cand.bit_count() <= 1:
        dim = cand.bit_count()
    else:
        dim = len(max_clique(g.crossing_adj, cand, cap=cap))
    if key is not None:
        g.cache[key] = dim
    return dim


def is_convex(g, mask):
    """Interval-closure test for a vertex set.

    A set fails convexity exactly when some boundary edge ``x -> w`` (``x`` in,
    ``w`` out) starts a geodesic from ``x`` to another member.
    """
    dist = g.dist
    inside = np.zeros(g.n, dtype=bool)
    inside[members(mask)] = True
    for x in iter_bits(mask):
        for w in g.neighbors[x]:
            if not inside[w]:
                if np.any(inside & (dist[w] == dist[x] - 1)):
                    return False
    return True


def _extract_walls(g):
    n = g.n
    dist = g.dist
    full = (1 << n) - 1
    by_split = {}
    walls = []
    edge_wall = {}
    for u, v in g.edges:
        side_u = from_bool(dist[:, u] < dist[:, v])
        minus = side_u if has(side_u, 0) else full ^ side_u
        wid = by_split.get(minus)
        if wid is None:
            wid = len(walls)
            by_split[minus] = wid
            walls.append([minus, []])
        walls[wid][1].append((u, v))
        edge_wall[(u, v)] = wid

    out = []
    for wid, (minus, edges) in enumerate(walls):
        plus = full ^ minus
        if not minus or not plus:
            raise GraphError(f"wall {wid} has an empty side")
        for side in (minus, plus):
            if not is_convex(g, side):
                raise GraphError(f"halfspace of wall {wid} is not convex; input is not median")
        out.append(Hyperplane(wid, minus, plus, tuple(edges)))

    nbr_wall = [dict() for _ in range(n)]
    for (u, v), wid in edge_wall.items():
        nbr_wall[u][v] = wid
        nbr_wall[v][u] = wid
    signature = [0] * n
    for h in out:
        for v in iter_bits(h.plus_side):
            signature[v] |= 1 << h.id
    cross_adj = [0] * len(out)
    for i, h in enumerate(out):
        for k in out[i + 1:]:
            if crossing(h, k):
                cross_adj[h.id] |= 1 << k.id
                cross_adj[k.id] |= 1 << h.id
    return _Walls(out, edge_wall, nbr_wall, signature, cross_adj)
