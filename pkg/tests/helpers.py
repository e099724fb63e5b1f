"""Hypothesis strategies and tiny graph builders shared by the tests."""

from hypothesis import strategies as st

from dihopset.graph import WeightedDigraph


@st.composite
def small_digraphs(draw, min_n=1, max_n=7, max_w=9):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    if not pairs:
        return WeightedDigraph(n)
    picked = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    weights = draw(st.lists(st.integers(1, max_w), min_size=len(picked), max_size=len(picked)))
    return WeightedDigraph(n, [(u, v, w) for (u, v), w in zip(picked, weights)])


def unit_path(n):
    return WeightedDigraph(n, [(i, i + 1, 1) for i in range(n - 1)])


def dense_matrix(g):
    """Python-list distance matrix via the independent Floyd-Warshall oracle."""
    from oracles import floyd_warshall

    return floyd_warshall(g.n, g.edges)


def two_way_path(n, rng, w=9, extra=3):
    """Path 0 -> n-1 plus a reverse edge per step that is ``extra`` heavier.

    Roads between path vertices in either direction stay on the path, which
    makes every backward pair hit the path densely.
    """
    fwd = rng.integers(1, w + 1, size=n - 1).tolist()
    edges = [(i, i + 1, fwd[i]) for i in range(n - 1)]
    edges += [(i + 1, i, fwd[i] + int(rng.integers(1, extra + 1))) for i in range(n - 1)]
    return WeightedDigraph(n, edges)
