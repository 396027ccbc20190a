"""Separated nets in intervals and the explicit bounded covers built from them."""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .asdim import Cover, FiniteMetricSpace, SSystem, s_system_to_cover
from .bits import has, iter_bits
from .median import _require_validated, dimension
from .normal import (
    PreconditionError,
    h_map,
    normal_cube_path,
    normal_distances_from,
    sphere_decomposition,
)


class NetConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class Constants:
    rank: int
    K: int
    M: int
    N: int

    @property
    def three_m(self):
        return 3 * self.M

    @property
    def three_m_alt(self):
        return 3 * self.K + 9 * self.rank + 9

    @property
    def displacement_proved(self):
        # per-level displacement sums eta*l on top of the lower level, so the
        # induction actually closes at eta*(eta+1)/2, one level above K
        return self.rank * (self.rank + 1) // 2

    def radius(self, l):
        return self.M * l


def constants(eta):
    if eta < 1:
        raise ValueError("rank must be >= 1")
    K = (eta - 1) * eta // 2
    M = 3 * eta + 3 + K
    return Constants(eta, K, M, (3 * M) ** eta * factorial(eta))


@dataclass(frozen=True)
class Net:
    base: int
    apex: int
    scale: int
    dim: int
    C: frozenset
    p: dict

    @property
    def members(self):
        return frozenset(self.p)


class NetBuilder:
    """Builds and memoises nets ``(C, p)`` for one graph and one scale ``l``.

    Nets are keyed by ``(base, apex)``; sub-nets on sphere parts are shared
    between apexes.
    """

    def __init__(self, g, l, eta=None):
        _require_validated(g)
        if l < 1:
            raise ValueError("l must be >= 1")
        self.g = g
        self.l = l
        self.eta = dimension(g) if eta is None else eta
        self._nets = {}

    def net(self, base, apex):
        return self._build(base, apex, 0)

    def _build(self, a, b, depth):
        hit = self._nets.get((a, b))
        if hit is not None:
            return hit
        if depth > self.eta:
            raise NetConstructionError(
                f"recursion depth {depth} exceeds rank {self.eta}: dimension did not drop"
            )
        g, l = self.g, self.l
        dim = dimension(g, (a, b))
        if dim <= 1:
            net = self._base_case(a, b, dim)
        else:
            net = self._recursive(a, b, dim, depth)
        self._nets[(a, b)] = net
        return net

    def _base_case(self, a, b, dim):
        g, l = self.g, self.l
        row = g.row(a)
        span = g.interval_mask(a, b)
        C = frozenset(y for y in iter_bits(span) if row[y] % l == 0)
        by_dist = {row[y]: y for y in iter_bits(span)}
        p = {z: frozenset((by_dist[l * (row[z] // l)],)) for z in iter_bits(span)}
        return Net(a, b, l, dim, C, p)

    def _recursive(self, a, b, dim, depth):
        g, l = self.g, self.l
        dn = normal_distances_from(g, a)
        levels = {}
        C = {a}
        for n in range(1, dn[b] // l + 1):
            dec = sphere_decomposition(g, a, b, n * l, check=False)
            subs = []
            for part in dec.parts:
                sub = self._build(part.corner, dec.gate, depth + 1)
                if sub.dim >= dim:
                    raise NetConstructionError(f"part [{part.corner},{dec.gate}] has no dimension drop")
                C.update(sub.C)
                subs.append((part, sub))
            levels[n] = subs
        p = {}
        for z in iter_bits(g.interval_mask(a, b)):
            n = dn[z] // l
            if n == 0:
                p[z] = frozenset((a,))
                continue
            zt = normal_cube_path(g, a, z).vertices[n * l]
            image = set()
            for part, sub in levels[n]:
                if has(part.mask, zt):
                    image.update(sub.p[zt])
            if not image:
                raise NetConstructionError(f"p({z}) is empty in net ({a},{b})")
            p[z] = frozenset(image)
        return Net(a, b, l, dim, frozenset(C), p)


def build_net(g, base, apex, l, builder=None):
    builder = builder or NetBuilder(g, l)
    return builder.net(base, apex)


class NetSSystem(SSystem):
    """S-system from nets and h-maps, anchored at a basepoint."""


def s_set(g, x0, x, k, l, nets=None):
    """``S(x, k, l)``: the union of ``p_x`` over the h-image of ``B(x, k)``."""
    if not 1 <= k <= 3 * l:
        raise PreconditionError(f"k must lie in 1..{3 * l}")
    nets = nets or NetBuilder(g, l)
    net = nets.net(x0, x)
    row = g.row(x)
    shadow = {h_map(g, x0, l, y) for y in range(g.n) if row[y] <= k}
    escaped = [z for z in shadow if z not in net.p]
    if escaped:
        raise NetConstructionError(f"h-images {sorted(escaped)} fall outside [{x0},{x}]")
    out = set()
    for z in shadow:
        out.update(net.p[z])
    return frozenset(out)


def net_s_system(g, x0, l, nets=None):
    """All ``S(x, k, l)`` for ``k = 1..3l``, built incrementally in ``k``."""
    nets = nets or NetBuilder(g, l)
    const = constants(max(nets.eta, 1))
    images = [h_map(g, x0, l, y) for y in range(g.n)]
    sets = {}
    for x in range(g.n):
        net = nets.net(x0, x)
        row = g.row(x)
        acc = set()
        order = sorted(range(g.n), key=row.__getitem__)
        i = 0
        for k in range(1, 3 * l + 1):
            while i < len(order) and row[order[i]] <= k:
                z = images[order[i]]
                if z not in net.p:
                    raise NetConstructionError(f"h-image {z} falls outside [{x0},{x}]")
                acc.update(net.p[z])
                i += 1
            sets[(x, k)] = frozenset(acc)
    return NetSSystem(l, sets, const.radius(l), g_bound=const.N, basepoint=x0)


def build_cover(g, x0, l, nets=None):
    """The cover ``U_l = {A_h}`` with mesh, multiplicity and ``l``-multiplicity attached."""
    S = net_s_system(g, x0, l, nets)
    space = FiniteMetricSpace.from_graph(g)
    cover = s_system_to_cover(space, S, l)
    cover.metrics["max_S_2l"] = S.max_size(2 * l)
    return cover


def cover_to_dict(cover, basepoint, l):
    return cover.to_dict(basepoint=basepoint, l=l)


__all__ = [
    "Constants",
    "Cover",
    "Net",
    "NetBuilder",
    "NetConstructionError",
    "NetSSystem",
    "constants",
    "build_net",
    "s_set",
    "net_s_system",
    "build_cover",
    "cover_to_dict",
]
