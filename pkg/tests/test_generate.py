import numpy as np
import pytest
from scipy.sparse.csgraph import connected_components

from dihopset.generate import FAMILIES, generate
from dihopset.graph import apsp
from oracles import bfs_closure


def scc_sizes(g):
    _, labels = connected_components(g.csr(), directed=True, connection="strong")
    return sorted(np.bincount(labels).tolist())


@pytest.mark.parametrize("family", FAMILIES)
def test_deterministic_and_sized(family):
    a = generate(family, 60, 200, 9, 5)
    assert a == generate(family, 60, 200, 9, 5)
    assert a != generate(family, 60, 200, 9, 6)
    assert a.n == 60 and a.m == 200 and a.W <= 9


def test_layered_dag_is_acyclic():
    g = generate("layered-dag", 10, 20, 5, 0, layers=3)
    assert scc_sizes(g) == [1] * 10
    assert all(u < v for u, v, _ in g.edges)


def test_layered_dag_capacity():
    with pytest.raises(ValueError):
        generate("layered-dag", 10, 40, 5, 0, layers=3)


def test_cycle_chain_components():
    g = generate("cycle-chain", 12, 20, 5, 0, cycles=3)
    assert scc_sizes(g) == [4, 4, 4]
    closure = bfs_closure(12, [(u, v) for u, v, _ in g.edges])
    assert 11 in closure[0] and 0 not in closure[11]


def test_cycle_chain_too_few_edges():
    with pytest.raises(ValueError):
        generate("cycle-chain", 12, 5, 5, 0, cycles=3)


def test_random_digraph_strongly_connected():
    g = generate("random-digraph", 50, 120, 9, 1)
    assert scc_sizes(g) == [50]


def test_path_noise_keeps_path_shortest():
    g = generate("path-noise", 40, 150, 9, 2)
    d = apsp(g)
    w = {(u, v): x for u, v, x in g.edges}
    pre = np.r_[0, np.cumsum([w[(i, i + 1)] for i in range(39)])]
    assert np.array_equal(d[0], pre)


@pytest.mark.parametrize("args", [("nope", 5, 5, 5), ("random-digraph", 0, 0, 5),
                                  ("random-digraph", 3, 7, 5), ("random-digraph", 3, 2, 0)])
def test_infeasible(args):
    with pytest.raises(ValueError):
        generate(*args, seed=0)
