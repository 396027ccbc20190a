"""Normal cube paths, the normal metric and the geometry of normal spheres."""
from __future__ import annotations

from dataclasses import dataclass

from .bits import has, iter_bits
from .median import _require_validated, dimension


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class NormalPath:
    """Cubes (as wall-id sets) and vertices ``v_0 .. v_len`` from source to target."""

    source: int
    target: int
    cubes: tuple[frozenset, ...]
    vertices: tuple[int, ...]

    def __len__(self):
        return len(self.cubes)

    def vertex(self, k):
        """The ``k``-th vertex; the path rests at its target past the end."""
        return self.vertices[min(k, len(self.cubes))]

    def to_dict(self):
        return {
            "source": self.source,
            "target": self.target,
            "cubes": [sorted(c) for c in self.cubes],
            "vertices": list(self.vertices),
        }


@dataclass(frozen=True)
class SpherePart:
    wall: int
    corner: int  # closest point to the basepoint in the part
    mask: int  # the interval [corner, gate]


@dataclass(frozen=True)
class SphereDecomposition:
    basepoint: int
    apex: int
    radius: int
    gate: int
    parts: tuple[SpherePart, ...]

    @property
    def union(self):
        out = 0
        for p in self.parts:
            out |= p.mask
        return out


def normal_cube_path(g, x, y):
    """The normal cube path from ``x`` to ``y``.

    Each step takes every wall separating the current vertex from ``y`` that is
    dual to an edge at the current vertex; those walls span one cube and the
    path moves to the opposite corner.
    """
    _require_validated(g)
    paths = g.cache.setdefault("normal_paths", {})
    hit = paths.get((x, y))
    if hit is not None:
        return hit
    dy = g.row(y)
    cross = g.crossing_adj
    cur = x
    cubes = []
    verts = [x]
    while cur != y:
        step = 0
        for w, wall in g.neighbor_walls(cur).items():
            if dy[w] < dy[cur]:
                step |= 1 << wall
        for h in iter_bits(step):
            others = step & ~(1 << h)
            if others & ~cross[h]:
                raise AssertionError(f"walls at vertex {cur} toward {y} do not span a cube")
        v = cur
        remaining = step
        while remaining:
            for w, wall in g.neighbor_walls(v).items():
                if has(remaining, wall) and dy[w] < dy[v]:
                    v = w
                    remaining &= ~(1 << wall)
                    break
            else:
                raise AssertionError(f"cube at {cur} could not be traversed")
        cubes.append(frozenset(iter_bits(step)))
        verts.append(v)
        cur = v
    path = NormalPath(x, y, tuple(cubes), tuple(verts))
    paths[(x, y)] = path
    return path


def longest_chain(g, x, y):
    """Length of the longest strict chain in the separation poset of ``(x, y)``."""
    walls = g.hyperplanes
    near = sorted(
        (walls[h].side_of(x) for h in iter_bits(g.separating(x, y))),
        key=int.bit_count,
    )
    sizes = [s.bit_count() for s in near]
    best = []
    for i, s in enumerate(near):
        top = 0
        for j in range(i):
            # equal cardinality never gives strict containment
            if sizes[j] < sizes[i] and near[j] & ~s == 0 and best[j] > top:
                top = best[j]
        best.append(top + 1)
    return max(best, default=0)


def normal_distance(g, x, y, mode="path"):
    if mode == "path":
        return len(normal_cube_path(g, x, y))
    if mode == "chain":
        return longest_chain(g, x, y)
    raise ValueError(f"unknown mode {mode!r}")


def normal_distances_from(g, x):
    """List of ``d_nor(x, y)`` over all ``y``; memoised per source."""
    table = g.cache.setdefault("normal_rows", {})
    row = table.get(x)
    if row is None:
        row = [len(normal_cube_path(g, x, y)) for y in range(g.n)]
        table[x] = row
    return row


def normal_ball_sphere(g, x, n):
    """Bitsets of the normal ball and normal sphere of radius ``n`` about ``x``."""
    if n < 0:
        raise PreconditionError("radius must be non-negative")
    row = normal_distances_from(g, x)
    ball = sphere = 0
    for y, dn in enumerate(row):
        if dn <= n:
            ball |= 1 << y
            if dn == n:
                sphere |= 1 << y
    return ball, sphere


def gate_vertex(g, x0, x, n, check=False):
    """The ``n``-th vertex of the normal path from ``x0`` to ``x``.

    With ``check`` it is re-derived as the unique point of ``[x0, x]`` inside
    the normal ball of radius ``n`` farthest from ``x0``.
    """
    path = normal_cube_path(g, x0, x)
    if not 0 <= n <= len(path):
        raise PreconditionError(f"n={n} exceeds d_nor({x0},{x})={len(path)}")
    v = path.vertices[n]
    if check:
        alt = farthest_in_ball(g, x0, x, n)
        if alt != v:
            raise AssertionError(f"gate mismatch: path gives {v}, ball maximiser {alt}")
    return v


def farthest_in_ball(g, x0, x, n):
    ball, _ = normal_ball_sphere(g, x0, n)
    region = g.interval_mask(x0, x) & ball
    row = g.row(x0)
    best = max(row[v] for v in iter_bits(region))
    top = [v for v in iter_bits(region) if row[v] == best]
    if len(top) != 1:
        raise AssertionError(f"farthest point of [x0,x]∩B_nor not unique: {top}")
    return top[0]


def sphere_decomposition(g, x0, x, n, check=True):
    """Split ``[x0, x] ∩ S_nor(x0, n)`` into intervals ``[x_h, v]``.

    ``h`` ranges over the walls of the ``n``-th cube of the normal path, ``v``
    is the gate vertex and ``x_h`` the point of ``F_h`` nearest ``x0``.
    """
    path = normal_cube_path(g, x0, x)
    if not 1 <= n <= len(path):
        raise PreconditionError(f"need 1 <= n <= d_nor(x0,x)={len(path)}, got {n}")
    walls = g.hyperplanes
    v = path.vertices[n]
    row = g.row(x0)
    to_gate = g.interval_mask(x0, v)
    parts = []
    for h in sorted(path.cubes[n - 1]):
        far = walls[h].plus_side if has(walls[h].minus_side, x0) else walls[h].minus_side
        f_h = to_gate & far
        low = min(row[w] for w in iter_bits(f_h))
        corners = [w for w in iter_bits(f_h) if row[w] == low]
        if len(corners) != 1:
            raise AssertionError(f"F_{h} has no unique nearest point: {corners}")
        xh = corners[0]
        part_mask = g.interval_mask(xh, v)
        if check and part_mask != f_h:
            raise AssertionError(f"F_{h} is not the interval [{xh},{v}]")
        parts.append(SpherePart(h, xh, part_mask))
    dec = SphereDecomposition(x0, x, n, v, tuple(parts))
    if check:
        _check_decomposition(g, dec)
    return dec


def _check_decomposition(g, dec):
    x0, x, n = dec.basepoint, dec.apex, dec.radius
    _, sphere = normal_ball_sphere(g, x0, n)
    if dec.union != g.interval_mask(x0, x) & sphere:
        raise AssertionError("parts do not cover [x0,x] ∩ S_nor(x0,n) exactly")
    top = dimension(g, (x0, x))
    for p in dec.parts:
        if dimension(g, (p.corner, dec.gate)) >= top:
            raise AssertionError(f"no dimension drop on part of wall {p.wall}")
        if corner_witnesses(g, x0, n, p.wall) != [p.corner]:
            raise AssertionError(f"x_h for wall {p.wall} fails its characterisation")


def corner_witnesses(g, x0, n, h):
    """Points of ``B_nor(x0, n)`` beyond ``h`` that no wall crossing ``h`` separates from ``x0``."""
    ball, _ = normal_ball_sphere(g, x0, n)
    wall = g.hyperplanes[h]
    cross = g.crossing_adj[h]
    out = []
    for w in iter_bits(ball):
        if wall.separates(x0, w) and not g.separating(x0, w) & cross:
            out.append(w)
    return out


def sphere_membership_tests(g, x0, x, n):
    """The three equivalent tests for ``w in [x0,x] ∩ S_nor(x0,n)``, per ``w``.

    Returns ``{w: (by_distance, by_last_cube, by_gate)}`` over ``[x0, x]``.
    """
    path = normal_cube_path(g, x0, x)
    hn = 0
    for h in path.cubes[n - 1]:
        hn |= 1 << h
    v = path.vertices[n]
    to_gate = g.interval_mask(x0, v)
    row = normal_distances_from(g, x0)
    out = {}
    for w in iter_bits(g.interval_mask(x0, x)):
        pw = normal_cube_path(g, x0, w)
        last = 0
        if pw.cubes:
            for h in pw.cubes[-1]:
                last |= 1 << h
        out[w] = (
            row[w] == n,
            bool(last & hn),
            bool(g.separating(x0, w) & hn) and has(to_gate, w),
        )
    return out


def h_map(g, x0, l, x):
    """The ``3l``-th vertex on the normal path from ``x`` to ``x0``, else ``x0``."""
    if l < 1:
        raise PreconditionError("l must be >= 1")
    path = normal_cube_path(g, x, x0)
    if len(path) >= 3 * l:
        return path.vertices[3 * l]
    return x0


__all__ = [
    "NormalPath",
    "SphereDecomposition",
    "SpherePart",
    "PreconditionError",
    "normal_cube_path",
    "normal_distance",
    "normal_distances_from",
    "normal_ball_sphere",
    "gate_vertex",
    "farthest_in_ball",
    "sphere_decomposition",
    "sphere_membership_tests",
    "corner_witnesses",
    "longest_chain",
    "h_map",
]
