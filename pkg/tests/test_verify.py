import math

import numpy as np
import pytest

from dihopset.builder import BuildConfig, build_hopset, build_hopset_small_beta
from dihopset.edges import EdgeSet
from dihopset.generate import generate
from dihopset.graph import NoPathError, WeightedDigraph, apsp, path_length
from dihopset.path_hopset import backward_shortcut, draw_backward_samples, forward_shortcut
from dihopset.pathset import NicePath
from dihopset.verify import (
    MAX_LISTED,
    backward_bound,
    check_backward_bound,
    check_distance_preservation,
    check_forward_two_hop,
    check_hop_stretch,
    extract_witness_path,
    pick_sources,
)
from helpers import two_way_path, unit_path
from oracles import floyd_warshall, walks_upto


def brute_hopbound(g, H, eps):
    """Smallest hop budget satisfying every pair, by walk enumeration."""
    fw = floyd_warshall(g.n, g.edges)
    edges = g.edges + [(u, v, w) for u, v, w, _ in H]
    for b in range(g.n + 1):
        ok = True
        for s in range(g.n):
            row = walks_upto(g.n, edges, s, b)
            for t in range(g.n):
                if s != t and fw[s][t] < math.inf and row[t] > (1 + eps) * fw[s][t]:
                    ok = False
        if ok:
            return b
    return None


class TestSources:
    def test_full_below_cap(self):
        s, mode = pick_sources(50)
        assert mode == "full" and len(s) == 50

    def test_sampled_above_cap(self):
        s, mode = pick_sources(1000)
        assert mode == "sample" and len(s) == 10
        assert np.array_equal(s, pick_sources(1000)[0])

    def test_sample_override(self):
        s, mode = pick_sources(50, sample=100)
        assert mode == "sample" and len(s) == 2


class TestHopStretch:
    def test_empty_hopset_on_unit_path(self):
        g = unit_path(10)
        rep = check_hop_stretch(g, EdgeSet(), 9, 0.0)
        assert rep.passed and rep.achieved_hopbound == 9
        assert not check_hop_stretch(g, None, 8, 0.0).passed

    def test_clique_beta_one(self):
        n = 6
        g = WeightedDigraph(n, [(u, v, 1) for u in range(n) for v in range(n) if u != v])
        rep = check_hop_stretch(g, EdgeSet(), 1, 0.0)
        assert rep.passed and rep.achieved_hopbound == 1 and rep.max_stretch == 1.0

    def test_beta_n_minus_one_always_passes(self, rng):
        for seed in range(5):
            g = generate("random-digraph", 30, 60, 9, seed)
            assert check_hop_stretch(g, EdgeSet(), g.n - 1, 0.0).passed

    def test_injected_short_edge_fails(self):
        g = unit_path(6)
        bad = EdgeSet.from_edges([(0, 5, 4, "closure")])
        rep = check_hop_stretch(g, bad, 5, 0.5)
        assert not rep.distance_preservation and not rep.passed
        ok, fails = check_distance_preservation(g, bad)
        assert not ok and fails[0][:2] == (0, 5)

    def test_failures_listed(self):
        g = unit_path(30)
        rep = check_hop_stretch(g, EdgeSet(), 2, 0.0)
        assert rep.failure_count > MAX_LISTED == len(rep.failures)
        u, v, req, obs = rep.failures[0]
        assert obs > req

    def test_unreachable_pairs_ignored(self):
        g = WeightedDigraph(4, [(0, 1, 1), (2, 3, 1)])
        rep = check_hop_stretch(g, EdgeSet(), 1, 0.0)
        assert rep.passed and rep.reachable_pairs == 2

    @pytest.mark.parametrize("seed", range(6))
    def test_hopbound_matches_enumeration(self, seed):
        g = generate("random-digraph", 9, 18, 5, seed)
        H = build_hopset(g, BuildConfig(3, 0.5, seed, regime="large"))
        rep = check_hop_stretch(g, H, 3, 0.5)
        assert rep.achieved_hopbound == brute_hopbound(g, H, 0.5)

    def test_sampled_mode(self):
        g = generate("random-digraph", 400, 1200, 9, 0)
        rep = check_hop_stretch(g, EdgeSet(), g.n, 0.0)
        assert rep.mode == "sample" and rep.pairs_checked == 10 * 400 and rep.passed

    def test_to_dict(self):
        rep = check_hop_stretch(unit_path(4), EdgeSet(), 1, 0.0)
        d = rep.to_dict()
        assert d["passed"] is False and isinstance(d["failures"][0], list)


class TestDistancePreservation:
    def test_exact_closure_ok(self):
        g = generate("cycle-chain", 40, 80, 5, 0)
        d = apsp(g)
        u, v = np.nonzero(np.isfinite(d) & (d > 0))
        H = EdgeSet.from_arrays(u, v, d[u, v], "closure")
        assert check_distance_preservation(g, H)[0]

    def test_heavier_edge_flagged(self):
        g = unit_path(4)
        ok, fails = check_distance_preservation(g, EdgeSet.from_edges([(0, 3, 5, "closure")]))
        assert not ok and fails == [(0, 3, 3.0, 5.0)]


class TestForwardTwoHop:
    def test_missing_shortcuts_detected(self):
        g = unit_path(6)
        d = apsp(g)
        P = NicePath.from_vertices(0, range(6), d)
        assert not check_forward_two_hop(P, forward_shortcut(P, d), d)
        assert check_forward_two_hop(P, [], d)


def backward_instance(n, seed, gamma=0.25, delta=0.5):
    rng = np.random.default_rng(seed)
    g = two_way_path(n, rng)
    d = apsp(g)
    P = NicePath.from_vertices(0, range(n), d)
    samples = draw_backward_samples(P, n, seed)
    edges = backward_shortcut(P, gamma, delta, d, seed, samples=samples)
    return g, d, P, samples, edges


class TestBackwardBound:
    def test_bound_formula(self):
        assert backward_bound(10, 0.5, 0.5, 40, 20, 8, 4) == 15 + 0.5 * 40 * 8 / 80

    def test_two_way_path_conditional_holds(self):
        g, d, P, samples, edges = backward_instance(40, 3)
        rep = check_backward_bound(g, P, edges, 0.25, 0.5, samples, dist=d)
        assert rep.obligated == 40 * 39 // 2
        assert rep.conditional and not rep.conditional_failures

    def test_dropping_edges_breaks_hits(self):
        g, d, P, samples, _ = backward_instance(40, 3)
        rep = check_backward_bound(g, P, [], 0.01, 0.01, samples, dist=d)
        assert rep.conditional_failures
        assert rep.unconditional_rate < 1.0

    def test_forward_only_path_has_no_pairs(self):
        g = unit_path(8)
        d = apsp(g)
        P = NicePath.from_vertices(0, range(8), d)
        rep = check_backward_bound(g, P, [], 0.25, 0.5, draw_backward_samples(P, 8, 0), dist=d)
        assert rep.obligated == 0 and rep.unconditional_rate == 1.0


def witness_setup(n=200, seed=0, beta=None, family="random-digraph"):
    g = generate(family, n, 4 * n, 9, seed)
    beta = beta or math.ceil(20 * math.log2(n))
    hs = build_hopset_small_beta(g, BuildConfig(beta, 0.5, seed), quiet=True)
    return g, hs


class TestWitness:
    def test_short_road(self):
        g, hs = witness_setup(60)
        r = extract_witness_path(g, hs, hs.aux, 0, 5)
        assert r.trace[0]["event"] == "road-short" and r.ok
        assert r.length == hs.aux.dist[0, 5]

    def test_unreachable(self):
        g = WeightedDigraph(3, [(0, 1, 1)])
        hs = build_hopset_small_beta(g, BuildConfig(100, 0.5, 0), quiet=True)
        with pytest.raises(NoPathError):
            extract_witness_path(g, hs, hs.aux, 1, 0)

    def test_forced_phases_on_long_roads(self):
        # beta=2 forces the phase machinery even though the hopset targets more hops
        g, hs = witness_setup(120, 1, family="path-noise")
        d = hs.aux.dist
        rng = np.random.default_rng(0)
        aug_edges = g.union(hs.edges.tails, hs.edges.heads, hs.edges.weights)
        for _ in range(20):
            s, t = rng.integers(0, g.n, size=2)
            if s == t or not np.isfinite(d[s, t]):
                continue
            r = extract_witness_path(g, hs, hs.aux, int(s), int(t), beta=2)
            assert r.realizable
            assert r.path.vertices[0] == s and r.path.vertices[-1] == t
            assert path_length(aug_edges, r.path.vertices) == r.length
            assert r.length >= d[s, t]
            assert r.trace[0]["event"] == "road-short" or "nopath" in r.diagnostics

    def test_to_dict(self):
        g, hs = witness_setup(60)
        doc = extract_witness_path(g, hs, hs.aux, 0, 7).to_dict()
        assert doc["vertices"][0] == 0 and doc["vertices"][-1] == 7

    def test_sparse_hierarchy_runs_phases(self):
        rng = np.random.default_rng(0)
        g = two_way_path(300, rng)
        beta = math.ceil(20 * math.log2(300))
        hs = build_hopset_small_beta(g, BuildConfig(beta, 0.5, 0, c_v=1, c_p=0.05), quiet=True)
        events = set()
        for s, t in [(0, 299), (299, 0), (10, 250), (280, 5), (50, 290), (200, 13)]:
            r = extract_witness_path(g, hs, hs.aux, s, t, beta=12)
            events |= {e["event"] for e in r.trace}
            assert r.realizable and r.length >= hs.aux.dist[s, t]
        assert "S2" in events
