"""Seeded synthetic graph families."""

from __future__ import annotations

import numpy as np

from .graph import WeightedDigraph
from .rng import derive

FAMILIES = ("random-digraph", "layered-dag", "cycle-chain", "path-noise")


def _weights(rng, count, W):
    return rng.integers(1, W + 1, size=count)


def _fill_random(rng, n, have: set, m, allowed=None, limit=None):
    """Add distinct random pairs until ``m`` edges exist (or ``limit`` attempts)."""
    tries = 0
    limit = limit if limit is not None else 50 * m + 1000
    while len(have) < m and tries < limit:
        batch = max(16, 2 * (m - len(have)))
        us = rng.integers(0, n, size=batch)
        vs = rng.integers(0, n, size=batch)
        for u, v in zip(us.tolist(), vs.tolist()):
            tries += 1
            if u == v or (u, v) in have:
                continue
            if allowed is not None and not allowed(u, v):
                continue
            have.add((u, v))
            if len(have) >= m:
                break
    return have


def _finish(rng, n, pairs, W) -> WeightedDigraph:
    pairs = sorted(pairs)
    if not pairs:
        return WeightedDigraph(n)
    t, h = np.asarray(pairs, dtype=np.int64).T
    return WeightedDigraph.from_arrays(n, t, h, _weights(rng, len(pairs), W))


def random_digraph(n, m, W, seed) -> WeightedDigraph:
    """Uniform random edges; a random Hamiltonian cycle is embedded first when
    ``m >= n`` so the result is strongly connected."""
    rng = derive(seed, "generate", 0)
    have = set()
    if m >= n >= 2:
        perm = rng.permutation(n).tolist()
        have = {(perm[i], perm[(i + 1) % n]) for i in range(n)}
    _fill_random(rng, n, have, m, limit=10 * n * n + 1000)
    return _finish(rng, n, have, W)


def layered_dag(n, m, W, seed, layers: int | None = None) -> WeightedDigraph:
    """Vertex ids increase with the layer; edges only go to strictly later layers."""
    rng = derive(seed, "generate", 1)
    layers = layers or max(2, int(round(np.sqrt(n))))
    layers = min(layers, n)
    layer_of = np.minimum(np.arange(n) * layers // max(n, 1), layers - 1)
    max_m = int(sum((layer_of[u] < layer_of).sum() for u in range(n)))
    if m > max_m:
        raise ValueError(f"layered-dag with {layers} layers holds at most {max_m} edges")
    have = set()
    # connect each non-first layer vertex to some vertex of the previous layer
    for v in range(n):
        lv = layer_of[v]
        if lv == 0 or len(have) >= m:
            continue
        prev = np.flatnonzero(layer_of == lv - 1)
        have.add((int(rng.choice(prev)), v))
    _fill_random(rng, n, have, m, allowed=lambda u, v: layer_of[u] < layer_of[v],
                 limit=10 * n * n + 1000)
    return _finish(rng, n, have, W)


def cycle_chain(n, m, W, seed, cycles: int | None = None) -> WeightedDigraph:
    """Consecutive-id directed cycles, each linked to the next one; extra
    random edges only go from earlier to later cycles, so every cycle is
    exactly one strongly connected component."""
    rng = derive(seed, "generate", 2)
    cycles = cycles or max(1, n // 8)
    cycles = min(cycles, n)
    comp = np.minimum(np.arange(n) * cycles // max(n, 1), cycles - 1)
    have = set()
    for c in range(cycles):
        members = np.flatnonzero(comp == c).tolist()
        if len(members) >= 2:
            for a, b in zip(members, members[1:] + members[:1]):
                have.add((a, b))
        if c + 1 < cycles:
            nxt = np.flatnonzero(comp == c + 1)
            have.add((int(rng.choice(members)), int(rng.choice(nxt))))
    if m < len(have):
        raise ValueError(f"cycle-chain needs at least {len(have)} edges")
    _fill_random(rng, n, have, m, allowed=lambda u, v: comp[u] < comp[v],
                 limit=10 * n * n + 1000)
    return _finish(rng, n, have, W)


def path_noise(n, m, W, seed) -> WeightedDigraph:
    """A path ``0 -> ... -> n-1`` plus random noise edges and one closing
    edge ``n-1 -> 0``.

    Forward chords weigh between their span along the path and ``W`` (chords
    spanning more than ``W`` are skipped) and back edges can only lead
    backwards, so the path stays a shortest path between any two of its
    vertices.
    """
    rng = derive(seed, "generate", 3)
    if n < 2:
        return WeightedDigraph(n)
    base = _weights(rng, n - 1, max(1, W // 4) if W >= 4 else W)
    pre = np.r_[0, np.cumsum(base)]
    edges = {(i, i + 1): int(base[i]) for i in range(n - 1)}
    edges[(n - 1, 0)] = int(rng.integers(1, W + 1))
    tries = 0
    while len(edges) < m and tries < 50 * m + 1000:
        tries += 1
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u == v or (u, v) in edges:
            continue
        if u < v:
            span = int(pre[v] - pre[u])
            if span > W:
                continue
            edges[(u, v)] = int(rng.integers(span, W + 1))
        else:
            edges[(u, v)] = int(rng.integers(1, W + 1))
    t, h = np.asarray(sorted(edges), dtype=np.int64).T
    w = np.asarray([edges[k] for k in sorted(edges)], dtype=np.int64)
    return WeightedDigraph.from_arrays(n, t, h, w)


def generate(family: str, n: int, m: int, W: int, seed: int, **kw) -> WeightedDigraph:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    if n < 1:
        raise ValueError("n must be >= 1")
    if W < 1:
        raise ValueError("W must be >= 1")
    if m < 0 or m > n * (n - 1):
        raise ValueError(f"m={m} infeasible for n={n}")
    if family == "random-digraph":
        return random_digraph(n, m, W, seed)
    if family == "layered-dag":
        return layered_dag(n, m, W, seed, kw.get("layers"))
    if family == "cycle-chain":
        return cycle_chain(n, m, W, seed, kw.get("cycles"))
    return path_noise(n, m, W, seed)
