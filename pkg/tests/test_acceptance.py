"""Acceptance criteria 1-11, one test each.

Every test records a one-line verdict in ``RESULTS``; ``conftest`` prints them
after the run, and ``python tests/test_acceptance.py`` prints them directly.
Statements are checked exactly as given. Where a literal statement fails, the
verdict line also reports the corrected form next to it.
"""
import itertools
import random
import sys
import time

import numpy as np
import pytest

from cubecover import kernels
from cubecover.asdim import (
    Cover,
    FiniteMetricSpace,
    ad_oracle,
    candidate_pool,
    cover_to_s_system,
    fatten,
    inner_neighborhood,
    lebesgue_number,
    multiplicity,
    r_multiplicity,
    s_system_to_cover,
    verify_s_system,
)
from cubecover.generators import grid, tree
from cubecover.median import dimension
from cubecover.nets import NetBuilder, constants, net_s_system
from cubecover.verify import (
    check_ball_convexity,
    check_fellow_traveller,
    check_gates,
    check_h_maps,
    check_interval_lemma,
    check_median_axioms,
    check_nets,
    check_normal_metric,
    check_normal_modes,
    check_sphere_decompositions,
    check_weakly_modular,
)

from conftest import bfs_dist, brute_medians, family

RESULTS = {}


def record(num, passed, detail):
    RESULTS[num] = f"[criterion {num:>2}] {'PASS' if passed else 'FAIL'}: {detail}"
    print(RESULTS[num])
    return passed


def upto(limit):
    return {k: g for k, g in family().items() if g.n <= limit}


def first_failure(instances, check):
    """Run ``check(g)`` (returning Check or list) over instances; first failing (name, check)."""
    for name, g in instances.items():
        out = check(g)
        for c in out if isinstance(out, list) else [out]:
            if not c.passed:
                return name, c
    return None


def test_criterion_01_median_axioms():
    inst = family()
    bad = first_failure(inst, lambda g: check_median_axioms(g) + [
        check_interval_lemma(g), check_weakly_modular(g)])
    # the median table itself against the set-based oracle on the smaller instances
    oracle_bad = None
    for name, g in inst.items():
        if g.n > 16:
            continue
        dist = bfs_dist(g.n, g.edges)
        table = np.asarray(kernels.median_table(g.dist))
        for x, y, z in itertools.combinations_with_replacement(range(g.n), 3):
            if {int(table[x, y, z])} != brute_medians(dist, g.n, x, y, z):
                oracle_bad = (name, x, y, z)
                break
    ok = bad is None and oracle_bad is None
    assert record(1, ok, f"{len(inst)} instances, M1-M3 + interval lemma + weak modularity"
                  + ("" if ok else f"; failure {bad or oracle_bad}"))


def test_criterion_02_normal_metric():
    inst = family()
    bad = first_failure(inst, lambda g: [check_normal_modes(g)] + check_normal_metric(g))
    assert record(2, bad is None, f"{len(inst)} instances, path=chain, symmetry, triangle, "
                  "d_nor <= d <= eta*d_nor" + ("" if bad is None else f"; failure {bad}"))


def test_criterion_03_fellow_traveller():
    inst = upto(30)
    edge_bad = nor_bad = None
    failing = 0
    for name, g in inst.items():
        edge, nor = check_fellow_traveller(g)
        if not edge.passed:
            failing += 1
            edge_bad = edge_bad or (name, edge.witness)
        if not nor.passed:
            nor_bad = nor_bad or (name, nor.witness)
    detail = (f"{len(inst)} instances; edge metric: "
              + ("holds" if edge_bad is None else
                 f"fails on {failing} (first {edge_bad[0]}, (x,y,x',y',k)={edge_bad[1]})")
              + "; normal metric: " + ("holds" if nor_bad is None else f"fails {nor_bad}"))
    assert record(3, edge_bad is None, detail)


def test_criterion_04_ball_convexity_and_gates():
    inst = upto(30)
    bad = first_failure(inst, lambda g: [check_ball_convexity(g), check_gates(g)])
    assert record(4, bad is None, f"{len(inst)} instances, all (x0, x, n)"
                  + ("" if bad is None else f"; failure {bad}"))


def test_criterion_05_sphere_decomposition():
    inst = upto(30)
    bad = first_failure(inst, lambda g: check_sphere_decompositions(g, full=True))
    assert record(5, bad is None, f"{len(inst)} instances, exactness, <= eta parts, dimension drop"
                  + ("" if bad is None else f"; failure {bad}"))


def test_criterion_06_h_map_containment():
    inst = upto(30)
    bad = first_failure(inst, lambda g: check_h_maps(g, (1, 2)))
    assert record(6, bad is None, f"{len(inst)} instances, all x0, x, y in B(x,3l), l in {{1,2}}"
                  + ("" if bad is None else f"; failure {bad}"))


def test_criterion_07_net_invariants():
    inst = upto(25)
    stated = ("restriction", "displacement_K", "separation_N", "base_case_separation")
    first = {}
    counts = {}
    worst_ratio = 0.0
    proved_ok = True
    for name, g in inst.items():
        for l in (1, 2):
            checks = {c.name: c for c in check_nets(g, l, builder=NetBuilder(g, l))}
            info = checks["displacement_K"].info
            worst_ratio = max(worst_ratio, info["max_displacement"] / l)
            proved_ok &= checks["displacement_proved"].passed
            for key in stated:
                if not checks[key].passed:
                    counts[key] = counts.get(key, 0) + 1
                    first.setdefault(key, (name, l, checks[key].witness))
    ok = not first
    detail = f"{len(inst)} instances x l in {{1,2}}"
    if not ok:
        detail += "; violations " + ", ".join(
            f"{k}: {counts[k]} runs (first {first[k]})" for k in stated if k in first)
    detail += (f"; max displacement/l = {worst_ratio:g}; "
               f"eta(eta+1)/2*l bound {'holds' if proved_ok else 'fails'}")
    assert record(7, ok, detail)


def test_criterion_08_grid_pipeline():
    g = grid(10, 10)
    eta = dimension(g)
    c = constants(eta)
    assert (eta, c.K, c.M, c.N) == (2, 1, 10, 1800)
    space = FiniteMetricSpace.from_graph(g)
    t0 = time.perf_counter()
    ok = True
    parts = []
    for l in (1, 2, 3):
        S = net_s_system(g, 0, l)
        rep = verify_s_system(space, S, l, c.N)
        cover = s_system_to_cover(space, S, l)
        mesh, m_l = cover.metrics["mesh"], cover.metrics["m_l"]
        max_s = S.max_size(2 * l)
        good = rep.passed and mesh <= c.M * l and m_l <= c.N and m_l <= max_s
        ok &= good
        parts.append(f"l={l}: mesh {mesh}<= {c.M * l}, m_l {m_l}, max|S(x,2l,l)| {max_s}"
                     + ("" if rep.passed else f", S-system failed {[x.name for x in rep.failed()]}"))
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 300
    assert record(8, ok, "10x10 grid; " + "; ".join(parts) + f"; {elapsed:.1f}s")


def _interval_covers(n, mesh):
    """All covers of the path 0..n-1 by intervals of diameter <= mesh (n <= 5),
    or all irredundant such covers (6 <= n <= 8)."""
    s = FiniteMetricSpace([[abs(i - j) for j in range(n)] for i in range(n)])
    pool = candidate_pool(s, "intervals", mesh)
    masks = [sum(1 << p for p in c) for c in pool]
    full = (1 << n) - 1
    out = []
    if n <= 5:
        for r in range(1, len(pool) + 1):
            for idx in itertools.combinations(range(len(pool)), r):
                acc = 0
                for i in idx:
                    acc |= masks[i]
                if acc == full:
                    out.append([pool[i] for i in idx])
        return s, out
    for r in range(1, n + 1):
        for idx in itertools.combinations(range(len(pool)), r):
            acc = 0
            for i in idx:
                acc |= masks[i]
            if acc != full:
                continue
            irredundant = all(_union(masks[j] for j in idx if j != i) != full for i in idx)
            if irredundant:
                out.append([pool[i] for i in idx])
    return s, out


def _union(masks):
    acc = 0
    for m in masks:
        acc |= m
    return acc


def test_criterion_09_roundtrip():
    total = 0
    bad = None
    for n in range(1, 9):
        s, covers = _interval_covers(n, 3)
        for sets in covers:
            total += 1
            u = Cover.of(sets)
            S = cover_to_s_system(s, u, 1)
            g3 = r_multiplicity(s, u, 3)
            rep = verify_s_system(s, S, 1, g3, strict_pairs=True)
            back = s_system_to_cover(s, S, 1)
            if not rep.passed or back.metrics["m_l"] > g3:
                bad = bad or (n, [sorted(x) for x in sets], [c.name for c in rep.failed()])
    assert record(9, bad is None, f"{total} interval covers of paths with 1..8 points "
                  "(all covers up to 5 points, irredundant covers for 6-8)"
                  + ("" if bad is None else f"; failure {bad}"))


def random_triples(count, seed=0):
    """Tree metrics on 5-9 points, covers by random balls, lambda below the exact Lebesgue number."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        g = tree(rng.randint(5, 9), rng.randrange(10**6))
        s = FiniteMetricSpace.from_graph(g)
        sets = []
        covered = set()
        while covered != set(range(s.n)):
            ball = s.ball(rng.randrange(s.n), rng.randint(1, 3))
            sets.append(ball)
            covered |= ball
        u = Cover.of(sets)
        L = lebesgue_number(s, u)
        if L < 2:
            continue
        out.append((s, u, rng.randint(1, L - 1), L))
    return out


def test_criterion_10_inner_neighbourhood():
    bad_cover = bad_mult = bad_fat = None
    triples = random_triples(20, seed=0)
    for i, (s, u, lam, L) in enumerate(triples):
        shrunk = inner_neighborhood(s, u, lam)
        m = multiplicity(s, u)
        if not shrunk.metrics["covers"]:
            bad_cover = bad_cover or (i, lam, L, lebesgue_number(s, u, "ball_bound"))
        elif r_multiplicity(s, shrunk, lam) > m:
            bad_mult = bad_mult or (i, lam)
        if multiplicity(s, fatten(s, u, lam)) > r_multiplicity(s, u, lam):
            bad_fat = bad_fat or (i, lam)
    ok = bad_cover is None and bad_mult is None and bad_fat is None
    detail = f"{len(triples)} seeded triples"
    if bad_cover:
        detail += f"; N_-lam lost covering at triple {bad_cover[0]} (lam={bad_cover[1]}, L={bad_cover[2]}, ball-L={bad_cover[3]})"
    if bad_mult:
        detail += f"; m_lam(N_-lam) > m at {bad_mult}"
    if bad_fat:
        detail += f"; fattening bound fails at {bad_fat}"
    assert record(10, ok, detail)


def test_criterion_11_ad_oracle():
    s = FiniteMetricSpace([[abs(i - j) for j in range(5)] for i in range(5)])
    a, b = ad_oracle(s, 1, 4), ad_oracle(s, 1, 2)
    assert record(11, (a, b) == (0, 1), f"path 0..4, lambda=1: mesh<=4 -> {a}, mesh<=2 -> {b}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
