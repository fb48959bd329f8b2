import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from balltree.cspace import InvalidArgument, Metric
from balltree.tree import ROOT, BallTree, init_tree
from oracles import brute_nearest


def chain(n, step=0.5):
    t = init_tree(np.zeros(2), 1.0)
    for k in range(1, n + 1):
        a = np.array([(k - 1) * step, 0.0])
        b = np.array([k * step, 0.0])
        t.add_node(k - 1, b, 1.0, np.vstack([a, (a + b) / 2, b]))
    return t


def test_init_tree():
    t = init_tree(np.zeros(3), 1.0)
    assert len(t) == 1
    n = t.node(0)
    assert n.radius == 1.0 and n.parent == ROOT
    assert [p.tolist() for p in t.path_to_root(0)] == [[0.0, 0.0, 0.0]]


def test_init_tree_zero_radius_rejected():
    with pytest.raises(InvalidArgument):
        init_tree(np.zeros(2), 0.0)
    assert init_tree(np.zeros(2), 0.0, allow_zero=True).radius(0) == 0.0


def test_nearest_volume_single():
    t = init_tree(np.zeros(2), 1.0)
    assert t.nearest_volume([3.0, 0.0]) == (0, 2.0)


def test_nearest_volume_prefers_smaller_pseudo_distance():
    t = init_tree(np.zeros(2), 2.0)
    t.add_node(0, [4.0, 0.0], 0.5, [[0.0, 0.0], [4.0, 0.0]])
    i, d = t.nearest_volume([3.0, 0.0])
    assert (i, d) == brute_nearest(t.centers, t.radii, [3.0, 0.0])
    assert (i, d) == (1, 0.5)


def test_nearest_volume_at_center():
    t = chain(3)
    i, d = t.nearest_volume(t.center(2))
    assert d == -1.0


def test_nearest_volume_ties_lowest_index():
    t = init_tree(np.array([1.0, 0.0]), 1.0)
    t.add_node(0, [-1.0, 0.0], 1.0, [[1.0, 0.0], [-1.0, 0.0]])
    t.add_node(1, [1.0, 0.0], 1.0, [[-1.0, 0.0], [1.0, 0.0]])
    assert t.nearest_volume([0.0, 0.0])[0] == 0
    assert t.nearest_volume([1.0, 0.0])[0] == 0


def test_inside_boundary_is_outside():
    t = init_tree(np.zeros(2), 1.0)
    assert not t.inside([1.0, 0.0])
    assert t.inside([0.0, 0.0])
    assert t.inside([0.999, 0.0])


def test_inside_matches_exhaustive_scan():
    rng = np.random.default_rng(1)
    t = init_tree(rng.random(3) * 10, 1.0)
    for _ in range(60):
        p = int(rng.integers(len(t)))
        c = rng.random(3) * 10
        t.add_node(p, c, float(rng.random() * 2), [t.center(p), c])
    for x in rng.random((1000, 3)) * 10:
        want = any(np.linalg.norm(x - c) < r for c, r in zip(t.centers, t.radii))
        assert t.inside(x) == want
        assert t.inside(x) == (t.nearest_volume(x)[1] < 0)


def test_trim_examples():
    t = init_tree(np.zeros(2), 5.0)
    assert t.trim(0, 2.0, 0.0) == 2.0
    t = init_tree(np.zeros(2), 5.0)
    assert t.trim(0, 7.0, 0.0) == 5.0
    assert t.trims == 0


def test_trim_delta_floor():
    t = init_tree(np.zeros(2), 5.0, radius_floor=0.25)
    assert t.trim(0, 0.1, 0.25) == pytest.approx(0.35)
    assert t.trim(0, 0.0, 0.25) == 0.25
    assert t.trim(0, 0.0, 0.25) == 0.25
    assert t.trims == 2


def test_trim_negative_distance_rejected():
    t = init_tree(np.zeros(2), 5.0)
    with pytest.raises(InvalidArgument):
        t.trim(0, -0.1)


def test_add_node_append_and_chain():
    t = init_tree(np.zeros(2), 1.0)
    assert t.add_node(0, [1.0, 0.0], 1.0, [[0.0, 0.0], [1.0, 0.0]]) == 1
    assert t.node(1).parent == 0
    t = init_tree(np.zeros(2), 1.0)
    for k in range(1, 11):
        t.add_node(k - 1, [float(k), 0.0], 1.0, [[k - 1.0, 0.0], [float(k), 0.0]])
    assert len(t.path_to_root(10)) == 11


def test_add_node_errors():
    t = init_tree(np.zeros(2), 1.0)
    with pytest.raises(InvalidArgument):
        t.add_node(0, [1.0, 0.0], 1.0, [[0.5, 0.0], [1.0, 0.0]])
    with pytest.raises(InvalidArgument):
        t.add_node(3, [1.0, 0.0], 1.0, [[0.0, 0.0], [1.0, 0.0]])
    f = init_tree(np.zeros(2), 1.0, radius_floor=0.5)
    with pytest.raises(InvalidArgument):
        f.add_node(0, [1.0, 0.0], 0.1, [[0.0, 0.0], [1.0, 0.0]])


def test_path_to_root():
    t = chain(3)
    p = t.path_to_root(3)
    assert np.array_equal(p[0], t.center(0)) and np.array_equal(p[-1], t.center(3))
    gaps = np.linalg.norm(np.diff(np.array(p), axis=0), axis=1)
    assert np.all(gaps <= 0.25 + 1e-12) and np.all(gaps > 0)
    with pytest.raises(InvalidArgument):
        t.path_to_root(4)


def test_many_nodes_grow_arrays():
    t = init_tree(np.zeros(2), 1.0)
    for k in range(1, 500):
        t.add_node(k - 1, [k * 0.01, 0.0], 1.0, [[(k - 1) * 0.01, 0.0], [k * 0.01, 0.0]])
    assert len(t) == 500
    assert np.all(t.parents[1:] == np.arange(499))


def test_dump_round_trip():
    t = chain(4)
    t.trim(2, 0.3)
    u = BallTree.from_dict(t.to_dict())
    assert np.array_equal(u.centers, t.centers)
    assert np.array_equal(u.radii, t.radii)
    assert np.array_equal(u.parents, t.parents)
    assert u.to_dict() == t.to_dict()


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 60),
    st.integers(0, 2**32 - 1),
    st.booleans(),
)
def test_nearest_volume_property(n, seed, linf):
    rng = np.random.default_rng(seed)
    metric = Metric.LINF if linf else Metric.L2
    t = BallTree(rng.random(2), 0.5, metric)
    for _ in range(n - 1):
        p = int(rng.integers(len(t)))
        c = np.round(rng.random(2), 1)  # coarse grid makes ties likely
        t.add_node(p, c, float(np.round(rng.random(), 1)) + 0.1, [t.center(p), c])
    for x in np.round(rng.random((20, 2)), 1):
        assert t.nearest_volume(x) == brute_nearest(t.centers, t.radii, x, linf)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 10), st.floats(0, 1)), min_size=1, max_size=20),
       st.floats(0, 1), st.floats(0.1, 10))
def test_trim_monotone_and_floored(seq, floor, r0):
    floor = min(floor, r0)
    t = init_tree(np.zeros(2), r0, radius_floor=floor)
    prev = t.radius(0)
    for cd, _ in seq:
        r = t.trim(0, cd)
        assert r <= prev
        assert r >= floor
        prev = r
