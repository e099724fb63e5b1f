import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dihopset.graph import WeightedDigraph, apsp, closure_from_dist, transitive_closure_weighted
from dihopset.pathset import NicePathCollection, build_nice_paths, nice_hop_target
from helpers import small_digraphs, unit_path
from oracles import brute_nice_paths, floyd_warshall

# 7-vertex instance; expected collection from brute_nice_paths with h=2
E7 = [(0, 1, 1), (0, 5, 1), (1, 0, 1), (1, 3, 2), (2, 3, 3), (2, 4, 4), (2, 5, 1), (2, 6, 4),
      (3, 5, 3), (3, 6, 2), (4, 2, 4), (5, 0, 4), (5, 4, 2), (6, 0, 2), (6, 1, 4), (6, 5, 4)]
E7_PATHS_H2 = [[1, 0, 5], [4, 2, 3]]


def collect(g, h, **kw):
    return [list(p.vertices) for p in build_nice_paths(transitive_closure_weighted(g), h, **kw)]


class TestHopTarget:
    def test_example_value(self):
        assert nice_hop_target(1024, 4800, 0.5) == 10

    def test_clamps_to_one(self):
        assert nice_hop_target(1000, 30, 0.5) == 1
        assert nice_hop_target(2, 20, 0.9) == 1

    def test_needs_two_vertices(self):
        with pytest.raises(ValueError):
            nice_hop_target(1, 100, 0.5)


class TestGreedy:
    def test_unit_path(self):
        assert collect(unit_path(10), 3) == [[0, 1, 2, 3], [4, 5, 6, 7]]

    def test_two_disjoint_paths(self):
        g = WeightedDigraph(10, [(i, i + 1, 1) for i in range(4)] + [(i, i + 1, 1) for i in range(5, 9)])
        assert collect(g, 4) == [[0, 1, 2, 3, 4], [5, 6, 7, 8, 9]]

    def test_pinned_instance(self):
        g = WeightedDigraph(7, E7)
        assert collect(g, 2) == E7_PATHS_H2
        assert brute_nice_paths(7, floyd_warshall(7, E7), 2) == E7_PATHS_H2

    def test_target_at_least_n(self):
        assert collect(unit_path(5), 5) == []

    def test_distance_matrix_only(self):
        g = WeightedDigraph(7, E7)
        paths = build_nice_paths(None, 2, dist=apsp(g))
        assert [list(p.vertices) for p in paths] == E7_PATHS_H2

    def test_tie_seed_is_deterministic(self):
        g = WeightedDigraph(7, E7)
        a = collect(g, 1, tie_seed=5)
        assert a == collect(g, 1, tie_seed=5)
        assert sorted(v for p in a for v in p) == sorted(set(v for p in a for v in p))

    @given(small_digraphs(min_n=2, max_n=6, max_w=4), st.integers(1, 3))
    @settings(max_examples=60, deadline=None)
    def test_matches_brute_force(self, g, h):
        fw = floyd_warshall(g.n, g.edges)
        assert collect(g, h) == brute_nice_paths(g.n, fw, h)

    @given(small_digraphs(min_n=2, max_n=8, max_w=5), st.integers(1, 4))
    @settings(max_examples=60, deadline=None)
    def test_properties(self, g, h):
        d = apsp(g)
        coll = build_nice_paths(closure_from_dist(d), h)
        seen = set()
        prev = -1
        for p in coll:
            assert p.hops == h
            assert p.length == d[p.vertices[0], p.vertices[-1]]
            assert p.prefix_lengths[-1] == sum(d[a, b] for a, b in zip(p.vertices, p.vertices[1:]))
            assert not seen & set(p.vertices)
            seen |= set(p.vertices)
            assert p.length >= prev
            prev = p.length


class TestSerialization:
    def test_text_roundtrip(self):
        g = unit_path(10)
        d = apsp(g)
        coll = build_nice_paths(None, 3, dist=d)
        text = coll.to_text()
        assert text == "0 1 2 3\n4 5 6 7\n"
        back = NicePathCollection.from_text(text, d)
        assert [p.vertices for p in back] == [p.vertices for p in coll]
        assert back.path_of(5).id == 1 and back.path_of(9) is None

    def test_hops_between(self):
        coll = build_nice_paths(None, 3, dist=apsp(unit_path(8)))
        p = coll[0]
        assert p.hops_between(1, 3) == 2
        with pytest.raises(ValueError):
            p.hops_between(3, 1)
        assert np.isclose(p.length, 3)
