"""Cover statistics and S-systems on finite metric spaces.

Distances may be ints or :class:`fractions.Fraction`; every comparison is exact.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple

from .bits import from_ids
from .clique import CliqueCapExceeded, maximal_cliques


class NotACoverError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class FiniteMetricSpace:
    """Points ``0..n-1`` with a symmetric distance table."""

    def __init__(self, dist, check=True):
        self.dist = tuple(tuple(r) for r in dist)
        self.n = len(self.dist)
        if check:
            self._check()

    def _check(self):
        d, n = self.dist, self.n
        for x in range(n):
            if len(d[x]) != n or d[x][x] != 0:
                raise ValueError("distance table must be square with zero diagonal")
            for y in range(n):
                if d[x][y] != d[y][x] or (x != y and d[x][y] <= 0):
                    raise ValueError(f"bad distance at ({x},{y})")
        for x, y, z in itertools.product(range(n), repeat=3):
            if d[x][z] > d[x][y] + d[y][z]:
                raise ValueError(f"triangle inequality fails at ({x},{y},{z})")

    @classmethod
    def from_graph(cls, g):
        return cls(g.dist.tolist(), check=False)

    def ball(self, x, r):
        row = self.dist[x]
        return frozenset(y for y in range(self.n) if row[y] <= r)

    def diameter(self, pts):
        pts = list(pts)
        return max((self.dist[a][b] for a in pts for b in pts), default=0)

    def interval(self, x, y):
        d = self.dist
        return frozenset(z for z in range(self.n) if d[x][z] + d[z][y] == d[x][y])

    def distance_values(self):
        return sorted({v for row in self.dist for v in row if v > 0})

    def to_dict(self):
        return {"points": self.n, "dist": [list(r) for r in self.dist]}

    @classmethod
    def from_dict(cls, data):
        return cls(data["dist"])


@dataclass
class Cover:
    """Named subsets of a space; ``metrics`` is filled in by the builders."""

    sets: dict[str, frozenset]
    metrics: dict = field(default_factory=dict)

    @classmethod
    def of(cls, subsets, prefix="U"):
        return cls({f"{prefix}{i}": frozenset(s) for i, s in enumerate(subsets)})

    @property
    def elements(self):
        return [self.sets[k] for k in sorted(self.sets, key=_name_key)]

    def covers(self, n):
        seen = set()
        for s in self.sets.values():
            seen |= s
        return len(seen) == n and all(0 <= p < n for p in seen)

    def to_dict(self, **extra):
        out = dict(extra)
        out["sets"] = {k: sorted(self.sets[k]) for k in sorted(self.sets, key=_name_key)}
        out["metrics"] = {k: _plain(v) for k, v in self.metrics.items()}
        return out


def _name_key(name):
    head = name.rstrip("0123456789")
    tail = name[len(head):]
    return (head, int(tail) if tail else -1, name)


def _plain(v):
    return v if isinstance(v, (int, bool, str, type(None))) else str(v)


class CoverMetrics(NamedTuple):
    mesh: object
    m: int
    m_r: int


def _require_cover(s, u):
    if not u.covers(s.n):
        raise NotACoverError("the family does not cover the space")


def multiplicity(s, u):
    count = [0] * s.n
    for el in u.sets.values():
        for p in el:
            count[p] += 1
    return max(count, default=0)


def r_multiplicity(s, u, r):
    """Largest number of elements met by a closed ball of radius ``r``."""
    els = [from_ids(e) for e in u.sets.values()]
    best = 0
    for x in range(s.n):
        ball = from_ids(s.ball(x, r))
        best = max(best, sum(1 for e in els if e & ball))
    return best


def cover_metrics(s, u, r):
    _require_cover(s, u)
    if r <= 0:
        raise ValueError("r must be positive")
    mesh = max((s.diameter(e) for e in u.sets.values()), default=0)
    return CoverMetrics(mesh, multiplicity(s, u), r_multiplicity(s, u, r))


def lebesgue_number(s, u, mode="exact", budget=200_000):
    """Largest attained distance ``t`` such that every set of diameter ``<= t`` fits in one element.

    ``exact`` checks every maximal such set (maximal cliques of the ``d <= t``
    graph); ``ball_bound`` only asks each closed ball of radius ``t`` to fit,
    which is a lower bound for the exact value.
    """
    _require_cover(s, u)
    els = [from_ids(e) for e in u.sets.values()]

    def fits(mask):
        return any(mask & ~e == 0 for e in els)

    best = 0
    for t in s.distance_values():
        if mode == "exact":
            adj = [
                from_ids(y for y in range(s.n) if y != x and s.dist[x][y] <= t)
                for x in range(s.n)
            ]
            try:
                ok = all(fits(c) for c in maximal_cliques(adj, budget=budget))
            except CliqueCapExceeded as exc:
                raise BudgetExceeded(str(exc)) from exc
        elif mode == "ball_bound":
            ok = all(fits(from_ids(s.ball(x, t))) for x in range(s.n))
        else:
            raise ValueError(f"unknown mode {mode!r}")
        if not ok:
            break
        best = t
    return best


def inner_neighborhood(s, u, lam):
    """Shrink every element to ``{x : B(x, lam) ⊆ U}``.

    ``metrics["covers"]`` records whether the result still covers.  Failure to
    cover is only an error when every ball of radius ``lam`` fits inside one
    element, since that is exactly what guarantees the shrunken family covers.
    """
    if lam < 0:
        raise ValueError("lam must be non-negative")
    shrunk = {}
    for name, el in u.sets.items():
        shrunk[name] = frozenset(x for x in range(s.n) if s.ball(x, lam) <= el)
    out = Cover(shrunk)
    covered = out.covers(s.n)
    out.metrics["covers"] = covered
    if not covered and u.covers(s.n) and lebesgue_number(s, u, "ball_bound") >= lam:
        raise AssertionError("inner neighbourhood lost covering despite ball Lebesgue bound")
    return out


def fatten(s, u, lam):
    """Grow every element to its closed ``lam``-neighbourhood."""
    grown = {}
    for name, el in u.sets.items():
        grown[name] = frozenset(
            x for x in range(s.n) if any(s.dist[x][y] <= lam for y in el)
        )
    return Cover(grown)


class SSystem:
    """The family ``S(x, k, l)`` for one scale ``l`` and ``k = 1..3l``.

    ``radius`` is the bound ``S_l`` with ``S(x, k, l) ⊆ B(x, S_l)``; ``g_bound``
    is the cardinality bound the construction promises, when it promises one.
    """

    def __init__(self, scale, sets, radius, g_bound=None, basepoint=None):
        self.scale = scale
        self.sets = sets
        self.radius = radius
        self.g_bound = g_bound
        self.basepoint = basepoint

    def __call__(self, x, k):
        return self.sets[(x, k)]

    @property
    def ks(self):
        return range(1, 3 * self.scale + 1)

    def max_size(self, k=None):
        return max(
            (len(v) for (x, kk), v in self.sets.items() if k is None or kk == k),
            default=0,
        )

    def without(self, x, k, point):
        """Copy with ``point`` removed from ``S(x, k)`` only."""
        sets = dict(self.sets)
        sets[(x, k)] = sets[(x, k)] - {point}
        return SSystem(self.scale, sets, self.radius, self.g_bound, self.basepoint)


def representatives(u, rep_rule="min"):
    if callable(rep_rule):
        return {name: rep_rule(el) for name, el in u.sets.items()}
    if rep_rule == "min":
        return {name: min(el) for name, el in u.sets.items() if el}
    raise ValueError(f"unknown representative rule {rep_rule!r}")


def cover_to_s_system(s, u, l, rep_rule="min"):
    """``S(x,k,l)`` = representatives of the elements meeting ``B(x, k)``."""
    if l < 1:
        raise ValueError("l must be >= 1")
    reps = representatives(u, rep_rule)
    els = [(from_ids(u.sets[name]), rep) for name, rep in reps.items()]
    sets = {}
    for x in range(s.n):
        for k in range(1, 3 * l + 1):
            ball = from_ids(s.ball(x, k))
            sets[(x, k)] = frozenset(rep for e, rep in els if e & ball)
    mesh = max((s.diameter(e) for e in u.sets.values()), default=0)
    return SSystem(l, sets, 3 * l + mesh, g_bound=r_multiplicity(s, u, 3 * l))


def s_system_to_cover(s, S, l):
    """The cover ``{A_h}`` with ``A_h = {y : h ∈ S(y, l, l)}``."""
    owners = {}
    for y in range(s.n):
        sy = S(y, l)
        if not sy:
            raise ValueError(f"S({y},{l},{l}) is empty")
        for h in sy:
            owners.setdefault(h, set()).add(y)
    cover = Cover({f"A_{h}": frozenset(ys) for h, ys in sorted(owners.items())})
    met = cover_metrics(s, cover, l)
    cover.metrics.update(mesh=met.mesh, m=met.m, m_l=met.m_r, l=l)
    return cover


@dataclass
class Check:
    name: str
    passed: bool
    witness: object = None
    info: dict = field(default_factory=dict)

    def to_dict(self):
        out = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.info:
            out["info"] = {k: _jsonable(v) for k, v in self.info.items()}
        return out


def _jsonable(v):
    if isinstance(v, (frozenset, set)):
        return sorted(_jsonable(x) for x in v)
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return _plain(v)


@dataclass
class SSystemReport:
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failed(self):
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def verify_s_system(s, S, l, g_bound, strict_pairs=False):
    """Check radius, monotonicity, shift and cardinality conditions; report first witnesses."""
    n, d = s.n, s.dist
    ks = range(1, 3 * l + 1)
    checks = []

    def first(pred, domain):
        for item in domain:
            if not pred(*item):
                return item
        return None

    bad = first(
        lambda x, k: all(d[x][p] <= S.radius for p in S(x, k)),
        itertools.product(range(n), ks),
    )
    checks.append(Check("radius", bad is None, bad, {"radius": S.radius}))

    bad = first(lambda x, k: S(x, k) <= S(x, k + 1), itertools.product(range(n), ks[:-1]))
    checks.append(Check("monotone", bad is None, bad))

    edges = [(x, y) for x in range(n) for y in range(n) if d[x][y] == 1]
    bad = first(
        lambda x, y, k: S(y, k) <= S(x, k + 1),
        ((x, y, k) for x, y in edges for k in ks[:-1]),
    )
    checks.append(Check("edge_shift", bad is None, bad))

    if strict_pairs:
        pairs = [(x, y) for x in range(n) for y in range(n) if x != y and d[x][y] <= l]
        bad = first(
            lambda x, y, k: S(x, k - d[x][y]) <= S(x, k) & S(y, k),
            ((x, y, k) for x, y in pairs for k in ks if k > d[x][y]),
        )
        checks.append(Check("pair_shift_lower", bad is None, bad))
        bad = first(
            lambda x, y, k: S(x, k) | S(y, k) <= S(x, k + d[x][y]),
            ((x, y, k) for x, y in pairs for k in ks if k + d[x][y] <= 3 * l),
        )
        checks.append(Check("pair_shift_upper_union", bad is None, bad))
        bad = first(
            lambda x, y, k: S(x, k) & S(y, k) <= S(x, k + d[x][y]),
            ((x, y, k) for x, y in pairs for k in ks if k + d[x][y] <= 3 * l),
        )
        checks.append(Check("pair_shift_upper_intersection", bad is None, bad))

    biggest = S.max_size()
    bad = first(lambda x, k: len(S(x, k)) <= g_bound, itertools.product(range(n), ks))
    checks.append(Check("cardinality", bad is None, bad, {"max": biggest, "bound": g_bound}))
    at_2l = S.max_size(2 * l)
    checks.append(Check(
        "cardinality_2l_plus_one", at_2l <= g_bound + 1, None,
        {"max_at_2l": at_2l, "bound": g_bound + 1},
    ))
    return SSystemReport(checks)


def candidate_pool(s, pool_rule, mesh_bound):
    if pool_rule == "balls":
        radii = [0] + s.distance_values()
        raw = {s.ball(x, r) for x in range(s.n) for r in radii}
    elif pool_rule == "intervals":
        raw = {s.interval(x, y) for x in range(s.n) for y in range(x, s.n)}
    elif pool_rule == "subsets":
        raw = {
            frozenset(c)
            for size in range(1, s.n + 1)
            for c in itertools.combinations(range(s.n), size)
        }
    else:
        raise ValueError(f"unknown pool rule {pool_rule!r}")
    return sorted(
        (c for c in raw if s.diameter(c) <= mesh_bound),
        key=lambda c: (-len(c), sorted(c)),
    )


def ad_oracle(s, lam, mesh_bound, pool_rule="intervals", budget=12):
    """Exact ``min m_lam(U) - 1`` over covers by pool sets of diameter ``<= mesh_bound``."""
    if s.n > budget:
        raise BudgetExceeded(f"{s.n} points exceed the oracle budget {budget}")
    pool = candidate_pool(s, pool_rule, mesh_bound)
    balls = [from_ids(s.ball(x, lam)) for x in range(s.n)]
    # touch[c] = centres whose lam-ball meets c
    cands = []
    for c in pool:
        cm = from_ids(c)
        touch = [x for x in range(s.n) if balls[x] & cm]
        cands.append((cm, touch))
    full = (1 << s.n) - 1
    best = [None]
    meet = [0] * s.n

    def search(covered, worst):
        if covered == full:
            if best[0] is None or worst < best[0]:
                best[0] = worst
            return
        if best[0] is not None and worst >= best[0]:
            return
        p = (~covered & full & -(~covered & full)).bit_length() - 1
        for cm, touch in cands:
            if not cm >> p & 1:
                continue
            new_worst = worst
            for x in touch:
                meet[x] += 1
                if meet[x] > new_worst:
                    new_worst = meet[x]
            if best[0] is None or new_worst < best[0]:
                search(covered | cm, new_worst)
            for x in touch:
                meet[x] -= 1

    search(0, 0)
    if best[0] is None:
        raise ValueError("no cover exists within the pool and mesh bound")
    return best[0] - 1


__all__ = [
    "FiniteMetricSpace",
    "Cover",
    "CoverMetrics",
    "SSystem",
    "SSystemReport",
    "Check",
    "NotACoverError",
    "BudgetExceeded",
    "cover_metrics",
    "multiplicity",
    "r_multiplicity",
    "lebesgue_number",
    "inner_neighborhood",
    "fatten",
    "cover_to_s_system",
    "s_system_to_cover",
    "verify_s_system",
    "candidate_pool",
    "ad_oracle",
]
