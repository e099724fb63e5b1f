"""Weighted digraphs and the shortest-path primitives everything else uses.

Distances are float64 arrays holding exact integers; ``INF`` marks an
unreachable target. Weights are integers in ``[1, W]`` and graphs whose
longest possible path could exceed 2**53 are rejected on construction, so
every finite sum below stays exact.
"""

from __future__ import annotations

import heapq
import io
import math
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

INF = math.inf
MAX_EXACT = 2**53

# cap on (rows x edges) materialised per relaxation step
_BATCH_CELLS = 4_000_000


class GraphFormatError(ValueError):
    """Malformed graph text or an edge violating the weight invariants."""


class NoPathError(LookupError):
    """The requested target is not reachable from the source."""


@dataclass(frozen=True)
class Path:
    vertices: tuple[int, ...]
    length: int

    @property
    def hops(self) -> int:
        return len(self.vertices) - 1

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self):
        return len(self.vertices)


class WeightedDigraph:
    """Directed graph on ``0..n-1`` with positive integer edge weights.

    Parallel edges collapse to the lightest one. Self-loops are rejected.
    Edge arrays are kept sorted by ``(tail, head)``.
    """

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        edges = list(edges)
        if edges:
            arr = np.asarray(edges, dtype=np.int64).reshape(-1, 3)
            tails, heads, weights = arr[:, 0], arr[:, 1], arr[:, 2]
        else:
            tails = heads = weights = np.zeros(0, dtype=np.int64)
        self._init(n, tails, heads, weights, validate=True)

    @classmethod
    def from_arrays(cls, n, tails, heads, weights, validate=True) -> "WeightedDigraph":
        g = cls.__new__(cls)
        g._init(
            n,
            np.asarray(tails, dtype=np.int64),
            np.asarray(heads, dtype=np.int64),
            np.asarray(weights, dtype=np.int64),
            validate=validate,
        )
        return g

    def _init(self, n, tails, heads, weights, validate):
        n = int(n)
        if n < 0:
            raise GraphFormatError("vertex count must be non-negative")
        if validate and len(tails):
            if tails.min() < 0 or heads.min() < 0 or max(tails.max(), heads.max()) >= n:
                raise GraphFormatError("vertex id out of range")
            if np.any(tails == heads):
                u = int(tails[tails == heads][0])
                raise GraphFormatError(f"self-loop at vertex {u}")
            if weights.min() < 1:
                raise GraphFormatError("edge weights must be integers >= 1")
        if len(tails):
            # lightest edge first within each (tail, head) group, then keep the first
            order = np.lexsort((weights, heads, tails))
            tails, heads, weights = tails[order], heads[order], weights[order]
            keep = np.ones(len(tails), dtype=bool)
            keep[1:] = (tails[1:] != tails[:-1]) | (heads[1:] != heads[:-1])
            tails, heads, weights = tails[keep], heads[keep], weights[keep]
        self.n = n
        self.tails = tails
        self.heads = heads
        self.weights = weights
        self.W = int(weights.max()) if len(weights) else 0
        if max(n, 1) * self.W >= MAX_EXACT:
            raise GraphFormatError("n*W exceeds the exact integer range")
        self._csr = None
        self._adj = None
        self._by_head = None

    @property
    def m(self) -> int:
        return len(self.tails)

    @property
    def edges(self) -> list[tuple[int, int, int]]:
        return list(zip(self.tails.tolist(), self.heads.tolist(), self.weights.tolist()))

    def __repr__(self):
        return f"WeightedDigraph(n={self.n}, m={self.m}, W={self.W})"

    def __eq__(self, other):
        if not isinstance(other, WeightedDigraph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.tails, other.tails)
            and np.array_equal(self.heads, other.heads)
            and np.array_equal(self.weights, other.weights)
        )

    def csr(self) -> csr_matrix:
        if self._csr is None:
            self._csr = csr_matrix(
                (self.weights.astype(np.float64), (self.tails, self.heads)),
                shape=(self.n, self.n),
            )
        return self._csr

    def out_adj(self) -> list[list[tuple[int, int]]]:
        if self._adj is None:
            adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
            for u, v, w in zip(self.tails.tolist(), self.heads.tolist(), self.weights.tolist()):
                adj[u].append((v, w))
            self._adj = adj
        return self._adj

    def weight_map(self) -> dict[tuple[int, int], int]:
        return {(u, v): w for u, v, w in self.edges}

    def union(self, tails, heads, weights) -> "WeightedDigraph":
        """Graph with the extra edges added (lightest edge wins)."""
        return WeightedDigraph.from_arrays(
            self.n,
            np.concatenate([self.tails, np.asarray(tails, dtype=np.int64)]),
            np.concatenate([self.heads, np.asarray(heads, dtype=np.int64)]),
            np.concatenate([self.weights, np.asarray(weights, dtype=np.int64)]),
        )

    def head_groups(self):
        """Edges sorted by head plus the reduceat offsets of each head group."""
        if self._by_head is None:
            order = np.argsort(self.heads, kind="stable")
            heads = self.heads[order]
            if len(heads):
                starts = np.flatnonzero(np.r_[True, heads[1:] != heads[:-1]])
            else:
                starts = np.zeros(0, dtype=np.int64)
            self._by_head = (
                self.tails[order],
                self.weights[order].astype(np.float64),
                heads[starts],
                starts,
            )
        return self._by_head


# ---------------------------------------------------------------- text format


def parse_graph(text: str) -> WeightedDigraph:
    """Parse ``"n m"`` followed by ``m`` lines of ``"u v w"``; ``#`` starts a comment."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphFormatError("empty graph file")
    header = lines[0].split()
    if len(header) != 2:
        raise GraphFormatError("header must be 'n m'")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError as exc:
        raise GraphFormatError(f"bad header: {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(body)}")
    edges = []
    for ln in body:
        parts = ln.split()
        if len(parts) < 3:
            raise GraphFormatError(f"bad edge line: {ln!r}")
        try:
            u, v, w = int(parts[0]), int(parts[1]), int(parts[2])
        except ValueError as exc:
            raise GraphFormatError(f"bad edge line: {ln!r}") from exc
        edges.append((u, v, w))
    return WeightedDigraph(n, edges)


def format_graph(g: WeightedDigraph, kinds: Sequence[str] | None = None) -> str:
    out = io.StringIO()
    out.write(f"{g.n} {g.m}\n")
    for idx, (u, v, w) in enumerate(g.edges):
        if kinds is None:
            out.write(f"{u} {v} {w}\n")
        else:
            out.write(f"{u} {v} {w} {kinds[idx]}\n")
    return out.getvalue()


def read_graph(path: str | os.PathLike) -> WeightedDigraph:
    with open(path) as fh:
        return parse_graph(fh.read())


def write_graph(g: WeightedDigraph, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(g))


# ------------------------------------------------------------ exact distances


def _check_vertex(g: WeightedDigraph, v: int) -> None:
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range for n={g.n}")


def sssp_exact(g: WeightedDigraph, s: int) -> np.ndarray:
    _check_vertex(g, s)
    return dijkstra(g.csr(), directed=True, indices=s)


def apsp(g: WeightedDigraph) -> np.ndarray:
    if g.n == 0:
        return np.zeros((0, 0))
    return dijkstra(g.csr(), directed=True)


def closure_from_dist(dist: np.ndarray) -> WeightedDigraph:
    """The weighted transitive closure encoded by a distance matrix."""
    n = dist.shape[0]
    mask = np.isfinite(dist)
    np.fill_diagonal(mask, False)
    tails, heads = np.nonzero(mask)
    return WeightedDigraph.from_arrays(
        n, tails, heads, dist[tails, heads].astype(np.int64), validate=False
    )


def transitive_closure_weighted(g: WeightedDigraph) -> WeightedDigraph:
    return closure_from_dist(apsp(g))


# ------------------------------------------------------- hop-bounded distances


def hop_layers(g: WeightedDigraph, sources: Sequence[int]) -> Iterator[np.ndarray]:
    """Yield the ``<= k``-hop distance rows for ``k = 0, 1, 2, ...``.

    Each yielded array has one row per source. Iteration stops after the
    first layer that equals its predecessor (the exact distances).
    """
    sources = np.asarray(sources, dtype=np.int64)
    cur = np.full((len(sources), g.n), INF)
    cur[np.arange(len(sources)), sources] = 0.0
    yield cur
    tails, w, uheads, starts = g.head_groups()
    if len(tails) == 0:
        return
    while True:
        cand = cur[:, tails] + w
        red = np.minimum.reduceat(cand, starts, axis=1)
        old = cur[:, uheads]
        better = red < old
        if not better.any():
            return
        cur = cur.copy()
        cur[:, uheads] = np.where(better, red, old)
        yield cur


def hop_bounded_rows(g: WeightedDigraph, sources: Sequence[int], beta: int) -> np.ndarray:
    """Minimum length over walks with at most ``beta`` edges, one row per source."""
    if beta < 0:
        raise ValueError("beta must be >= 0")
    sources = np.asarray(sources, dtype=np.int64)
    out = np.empty((len(sources), g.n))
    step = max(1, _BATCH_CELLS // max(1, g.m))
    for lo in range(0, len(sources), step):
        batch = sources[lo : lo + step]
        last = None
        for k, layer in enumerate(hop_layers(g, batch)):
            last = layer
            if k == beta:
                break
        out[lo : lo + len(batch)] = last
    return out


def hop_bounded_dist(g: WeightedDigraph, s: int, beta: int) -> np.ndarray:
    _check_vertex(g, s)
    return hop_bounded_rows(g, [s], beta)[0]


def hop_bounded_path(g: WeightedDigraph, s: int, t: int, beta: int) -> Path:
    """A minimum-length ``s -> t`` walk with at most ``beta`` edges.

    Among optimal walks the one with fewest edges is returned; on each
    backtracking step the smallest predecessor id wins.
    """
    _check_vertex(g, s)
    _check_vertex(g, t)
    layers = []
    for k, layer in enumerate(hop_layers(g, [s])):
        layers.append(layer[0])
        if k == beta:
            break
    final = layers[-1][t]
    if final == INF:
        raise NoPathError(f"no walk from {s} to {t} within {beta} hops")
    # fewest layers reaching the optimum
    k = next(j for j, row in enumerate(layers) if row[t] == final)
    tails, w, uheads, starts = g.head_groups()
    group = {int(h): i for i, h in enumerate(uheads.tolist())}
    ends = np.r_[starts[1:], len(tails)] if len(tails) else starts
    seq = [t]
    v = t
    while k > 0:
        target = layers[k][v]
        if layers[k - 1][v] == target:
            k -= 1
            continue
        gi = group[v]
        lo, hi = starts[gi], ends[gi]
        preds = tails[lo:hi]
        ok = layers[k - 1][preds] + w[lo:hi] == target
        u = int(preds[ok].min())
        seq.append(u)
        v = u
        k -= 1
    seq.reverse()
    return Path(tuple(seq), int(final))


# ----------------------------------------------------------------------- roads


class RoadTree:
    """Shortest-path tree from one source keyed by ``(length, hops)``.

    Among equal keys the smallest parent id wins, so the tree is a function
    of the graph alone. Every root-to-vertex path in it is a road.
    """

    def __init__(self, g: WeightedDigraph, source: int):
        _check_vertex(g, source)
        self.source = source
        n = g.n
        dist = [INF] * n
        hops = [INF] * n
        parent = [-1] * n
        dist[source] = 0
        hops[source] = 0
        done = [False] * n
        heap = [(0, 0, source)]
        adj = g.out_adj()
        while heap:
            d, h, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for v, w in adj[u]:
                if done[v]:
                    continue
                key = (d + w, h + 1)
                cur = (dist[v], hops[v])
                if key < cur:
                    dist[v], hops[v] = key
                    parent[v] = u
                    heapq.heappush(heap, (key[0], key[1], v))
                elif key == cur and u < parent[v]:
                    parent[v] = u
        self.dist = dist
        self.hops = hops
        self.parent = parent

    def reaches(self, v: int) -> bool:
        return self.dist[v] != INF

    def path_to(self, v: int) -> Path:
        if self.dist[v] == INF:
            raise NoPathError(f"{v} is unreachable from {self.source}")
        seq = [v]
        while seq[-1] != self.source:
            seq.append(self.parent[seq[-1]])
        seq.reverse()
        return Path(tuple(seq), int(self.dist[v]))


def road(g_aug: WeightedDigraph, u: int, v: int) -> Path:
    """Fewest-hop shortest ``u -> v`` path in ``g_aug``."""
    return RoadTree(g_aug, u).path_to(v)


def path_length(g: WeightedDigraph, vertices: Sequence[int]) -> int:
    """Sum of edge weights along ``vertices``; raises if an edge is missing."""
    wm = g.weight_map()
    total = 0
    for a, b in zip(vertices, vertices[1:]):
        if (a, b) not in wm:
            raise NoPathError(f"edge ({a}, {b}) not in graph")
        total += wm[(a, b)]
    return total
