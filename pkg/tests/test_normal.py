import itertools

import pytest

from cubecover.bits import members
from cubecover.generators import grid, tree
from cubecover.normal import (
    PreconditionError,
    farthest_in_ball,
    gate_vertex,
    h_map,
    longest_chain,
    normal_ball_sphere,
    normal_cube_path,
    normal_distance,
    sphere_decomposition,
)
from cubecover.verify import check_fellow_traveller

from conftest import brute_normal_path, family, gv, path_graph


def _wall_of(g, u, v):
    return g.wall_between(u, v)


def test_grid_path_example(grid33):
    p = normal_cube_path(grid33, gv(0, 0), gv(2, 1))
    assert p.vertices == (gv(0, 0), gv(1, 1), gv(2, 1))
    first = {_wall_of(grid33, gv(0, 0), gv(1, 0)), _wall_of(grid33, gv(0, 0), gv(0, 1))}
    second = {_wall_of(grid33, gv(1, 1), gv(2, 1))}
    assert [set(c) for c in p.cubes] == [first, second]
    assert p.to_dict()["vertices"] == [0, 4, 7]


def test_tree_path_is_edge_path():
    p = normal_cube_path(path_graph(4), 0, 3)
    assert len(p) == 3 and p.vertices == (0, 1, 2, 3)
    assert all(len(c) == 1 for c in p.cubes)


def test_normal_distance_examples(grid33):
    assert normal_distance(grid33, 0, 8) == 2
    assert normal_distance(grid33, 0, 8, mode="chain") == 2
    assert normal_distance(grid33, 8, 0) == 2
    assert normal_distance(grid33, 3, 3) == 0
    with pytest.raises(ValueError):
        normal_distance(grid33, 0, 1, mode="nope")


def test_normal_distance_is_chebyshev_on_grids():
    g = grid(4, 5)
    for x, y in itertools.product(range(g.n), repeat=2):
        (a, b), (c, d) = divmod(x, 5), divmod(y, 5)
        assert normal_distance(g, x, y) == max(abs(a - c), abs(b - d))


def test_paths_match_definition_oracle():
    for name, g in list(family().items())[::4]:
        for x, y in itertools.islice(itertools.product(range(g.n), repeat=2), 0, None, 7):
            assert list(normal_cube_path(g, x, y).vertices) == brute_normal_path(g.n, g.edges, x, y), name


def test_chain_mode_on_tree():
    g = tree(15, 3)
    for x, y in itertools.product(range(g.n), repeat=2):
        assert longest_chain(g, x, y) == g.d(x, y)


def test_ball_and_sphere(grid33):
    ball, sphere = normal_ball_sphere(grid33, 0, 1)
    assert members(ball) == [0, 1, 3, 4]
    assert members(sphere) == [1, 3, 4]
    with pytest.raises(PreconditionError):
        normal_ball_sphere(grid33, 0, -1)


def test_gate_examples(grid33):
    x = gv(2, 1)
    assert gate_vertex(grid33, 0, x, 1, check=True) == gv(1, 1)
    assert gate_vertex(grid33, 0, x, 2) == x
    assert gate_vertex(grid33, 0, x, 0) == 0
    assert farthest_in_ball(grid33, 0, x, 1) == gv(1, 1)
    with pytest.raises(PreconditionError):
        gate_vertex(grid33, 0, x, 3)


def test_sphere_decomposition_examples(grid33):
    dec = sphere_decomposition(grid33, 0, gv(2, 2), 1)
    assert dec.gate == gv(1, 1)
    assert sorted(p.corner for p in dec.parts) == [gv(0, 1), gv(1, 0)]
    assert members(dec.union) == sorted([gv(1, 0), gv(0, 1), gv(1, 1)])
    dec = sphere_decomposition(grid33, 0, gv(2, 2), 2)
    assert dec.gate == gv(2, 2)
    parts = sorted(members(p.mask) for p in dec.parts)
    assert parts == [sorted([gv(0, 2), gv(1, 2), gv(2, 2)]), sorted([gv(2, 0), gv(2, 1), gv(2, 2)])]
    with pytest.raises(PreconditionError):
        sphere_decomposition(grid33, 0, gv(2, 2), 3)
    with pytest.raises(PreconditionError):
        sphere_decomposition(grid33, 0, gv(2, 2), 0)


def test_decompositions_self_check_on_family():
    for name, g in list(family().items())[::3]:
        for x in range(g.n):
            top = len(normal_cube_path(g, 0, x))
            for n in range(1, top + 1):
                sphere_decomposition(g, 0, x, n, check=True)


def test_h_map_examples(grid33):
    p = path_graph(7)
    assert h_map(p, 0, 1, 6) == 3
    assert h_map(p, 0, 1, 0) == 0
    assert h_map(p, 0, 2, 6) == 0
    assert h_map(grid33, 0, 1, gv(2, 2)) == 0
    with pytest.raises(PreconditionError):
        h_map(p, 0, 0, 3)


def test_fellow_traveller_edge_metric_counterexample(grid33):
    # (0,0)->(0,2) walks the edge; (0,1)->(1,2) takes one diagonal square
    p = normal_cube_path(grid33, gv(0, 0), gv(0, 2))
    q = normal_cube_path(grid33, gv(0, 1), gv(1, 2))
    assert grid33.d(p.vertex(1), q.vertex(1)) == 2
    edge, nor = check_fellow_traveller(grid33)
    assert not edge.passed and nor.passed
