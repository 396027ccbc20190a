"""Seeded families of median graphs: random trees, grids, tree products, staircases.

Product vertices are numbered lexicographically in their coordinates, so the
same spec and seed always produce the same graph.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import asdict, dataclass

from .median import DEFAULT_VALIDATION_CAP, GraphError, build_graph

KINDS = ("tree", "grid", "tree_product", "staircase")


class BudgetError(ValueError):
    pass


@dataclass(frozen=True)
class GenSpec:
    kind: str
    dims: tuple[int, ...] = ()
    n: int = 0
    sizes: tuple[int, ...] = ()
    seed: int = 0
    budget: int = DEFAULT_VALIDATION_CAP

    def to_dict(self):
        d = asdict(self)
        d["dims"] = list(self.dims)
        d["sizes"] = list(self.sizes)
        return d


def random_tree_edges(n, rng):
    """Uniform attachment: vertex ``i`` hangs off a uniformly chosen earlier vertex."""
    return [(rng.randrange(i), i) for i in range(1, n)]


def path_edges(n):
    return [(i, i + 1) for i in range(n - 1)]


def product_edges(factors):
    """Cartesian product of factor graphs given as ``(size, edges)`` pairs."""
    sizes = [s for s, _ in factors]
    coords = list(itertools.product(*(range(s) for s in sizes)))
    index = {c: i for i, c in enumerate(coords)}
    nbrs = []
    for _, edges in factors:
        adj = {}
        for u, v in edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        nbrs.append(adj)
    edges = []
    for c in coords:
        for axis, adj in enumerate(nbrs):
            for w in adj.get(c[axis], ()):
                if w > c[axis]:
                    d = c[:axis] + (w,) + c[axis + 1:]
                    edges.append((index[c], index[d]))
    return coords, edges


def staircase_cells(dims, rng):
    """Lower set of a random monotone lattice path in a ``a x b`` box.

    Column ``i`` keeps heights ``0..h_i-1`` with ``b >= h_0 >= h_1 >= ... >= 1``.
    """
    if len(dims) != 2:
        raise GraphError("staircases are defined for two-dimensional grids")
    a, b = dims
    heights = sorted((rng.randint(1, b) for _ in range(a)), reverse=True)
    return [(i, j) for i in range(a) for j in range(heights[i])]


def generate(spec):
    """Build and validate the median graph described by ``spec``."""
    if spec.kind not in KINDS:
        raise GraphError(f"unknown kind {spec.kind!r}; expected one of {KINDS}")
    rng = random.Random(spec.seed)
    labels = {}
    if spec.kind == "tree":
        if spec.n < 1:
            raise GraphError("tree needs n >= 1")
        _check_budget(spec.n, spec)
        n, edges = spec.n, random_tree_edges(spec.n, rng)
    elif spec.kind == "grid":
        if not spec.dims or min(spec.dims) < 1:
            raise GraphError("grid needs positive dims")
        _check_budget(_prod(spec.dims), spec)
        coords, edges = product_edges([(s, path_edges(s)) for s in spec.dims])
        n = len(coords)
        labels = {i: ",".join(map(str, c)) for i, c in enumerate(coords)}
    elif spec.kind == "tree_product":
        if not spec.sizes or min(spec.sizes) < 1:
            raise GraphError("tree_product needs positive factor sizes")
        _check_budget(_prod(spec.sizes), spec)
        factors = [(s, random_tree_edges(s, rng)) for s in spec.sizes]
        coords, edges = product_edges(factors)
        n = len(coords)
        labels = {i: ",".join(map(str, c)) for i, c in enumerate(coords)}
    else:
        if not spec.dims or min(spec.dims) < 1:
            raise GraphError("staircase needs positive dims")
        cells = staircase_cells(spec.dims, rng)
        _check_budget(len(cells), spec)
        index = {c: i for i, c in enumerate(cells)}
        edges = []
        for (i, j), v in index.items():
            for c in ((i + 1, j), (i, j + 1)):
                if c in index:
                    edges.append((v, index[c]))
        n = len(cells)
        labels = {v: f"{i},{j}" for (i, j), v in index.items()}
    meta = {"kind": spec.kind, "spec": spec.to_dict()}
    return build_graph(edges, validate=True, n=n, labels=labels, meta=meta,
                       cap=spec.budget)


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def _check_budget(size, spec):
    if size > spec.budget:
        raise BudgetError(f"{spec.kind} with {size} vertices exceeds budget {spec.budget}")


def tree(n, seed=0):
    return generate(GenSpec("tree", n=n, seed=seed))


def grid(*dims):
    return generate(GenSpec("grid", dims=tuple(dims)))


def tree_product(sizes, seed=0):
    return generate(GenSpec("tree_product", sizes=tuple(sizes), seed=seed))


def staircase(dims, seed=0):
    return generate(GenSpec("staircase", dims=tuple(dims), seed=seed))
