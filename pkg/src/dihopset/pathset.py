"""Greedy collection of vertex-disjoint, fixed-hop shortest paths in G*.

A path in the closure G* is a shortest path exactly when its consecutive
distances add up to the distance between its endpoints. Restricting G* to
the unused vertices never changes a distance (the direct closure edge is
still there), so eligibility of a pair ``(u, v)`` only depends on how many
unused vertices can be threaded on some shortest ``u -> v`` chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import WeightedDigraph


@dataclass(frozen=True)
class NicePath:
    id: int
    vertices: tuple[int, ...]
    prefix_lengths: tuple[int, ...]

    @property
    def hops(self) -> int:
        return len(self.vertices) - 1

    @property
    def length(self) -> int:
        return self.prefix_lengths[-1]

    def __len__(self):
        return len(self.vertices)

    def position(self, v: int) -> int:
        return self.vertices.index(v)

    def hops_between(self, a: int, b: int) -> int:
        """Hops on the path from ``a`` to ``b`` (``a`` must not come after ``b``)."""
        i, j = self.position(a), self.position(b)
        if i > j:
            raise ValueError(f"{a} comes after {b} on path {self.id}")
        return j - i

    @classmethod
    def from_vertices(cls, pid: int, vertices, dist: np.ndarray) -> "NicePath":
        vertices = tuple(int(v) for v in vertices)
        prefix = [0]
        for a, b in zip(vertices, vertices[1:]):
            prefix.append(prefix[-1] + int(dist[a, b]))
        return cls(pid, vertices, tuple(prefix))


@dataclass
class NicePathCollection:
    paths: list[NicePath]
    h_target: int
    n: int
    owner: dict[int, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.owner:
            self.owner = {v: p.id for p in self.paths for v in p.vertices}

    def __len__(self):
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    def __getitem__(self, idx: int) -> NicePath:
        return self.paths[idx]

    def path_of(self, v: int) -> NicePath | None:
        pid = self.owner.get(v)
        return None if pid is None else self.paths[pid]

    def to_text(self) -> str:
        return "".join(" ".join(map(str, p.vertices)) + "\n" for p in self.paths)

    @classmethod
    def from_text(cls, text: str, dist: np.ndarray) -> "NicePathCollection":
        paths = []
        for line in text.splitlines():
            if line.strip():
                paths.append(NicePath.from_vertices(len(paths), line.split(), dist))
        h = paths[0].hops if paths else 0
        return cls(paths, h, dist.shape[0])


def nice_hop_target(n: int, beta: int, eps: float) -> int:
    if n < 2:
        raise ValueError("need at least two vertices")
    return max(1, math.floor(eps * beta / (24 * math.log2(n))))


def _chain_counts(dist: np.ndarray, alive: np.ndarray, u: int) -> np.ndarray:
    """Max number of alive vertices on a shortest-path chain ``u -> v`` in G*.

    Entry ``v`` counts both endpoints; unreachable or dead targets get 0.
    """
    n = dist.shape[0]
    row = dist[u]
    cnt = np.zeros(n, dtype=np.int64)
    reach = np.flatnonzero(np.isfinite(row) & alive)
    order = reach[np.argsort(row[reach], kind="stable")]
    cnt[u] = 1
    done = np.zeros(n, dtype=bool)
    done[u] = True
    for b in order:
        if b == u:
            continue
        # predecessors on a shortest chain: already-settled a with d(u,a)+d(a,b)=d(u,b)
        tight = done & (row + dist[:, b] == row[b])
        cnt[b] = 1 + cnt[tight].max()
        done[b] = True
    return cnt


def _lex_smallest_chain(dist, alive, u, v, h):
    """Lexicographically smallest ``h``-hop shortest chain of alive vertices."""
    duv = dist[u, v]
    on = np.flatnonzero(alive & (dist[u] + dist[:, v] == duv))
    # count of alive vertices on the longest chain x -> v, for x on the geodesic
    order = on[np.argsort(dist[on, v], kind="stable")]
    back = {}
    for x in order:
        if x == v:
            back[x] = 1
            continue
        best = 0
        for y, c in back.items():
            if dist[x, y] + dist[y, v] == dist[x, v]:
                best = max(best, c)
        back[x] = 1 + best
    seq = [u]
    cur = u
    for remaining in range(h, 0, -1):
        if remaining == 1:
            seq.append(v)
            break
        nxt = None
        for x in sorted(back):
            if x in (cur, v):
                continue
            if dist[cur, x] + dist[x, v] != dist[cur, v]:
                continue
            if back[x] - 1 >= remaining - 1:
                nxt = x
                break
        if nxt is None:  # pragma: no cover - guarded by the eligibility test
            raise RuntimeError("chain reconstruction failed")
        seq.append(nxt)
        cur = nxt
    return seq


def build_nice_paths(
    gstar: WeightedDigraph | None,
    h_target: int,
    tie_seed: int | None = None,
    dist: np.ndarray | None = None,
) -> NicePathCollection:
    """Greedy maximal collection of ``h_target``-hop shortest paths of G*.

    Candidates are scanned by ``(length, start rank, end rank)``; a candidate
    rejected once stays ineligible because vertices are only ever removed,
    so one pass over the sorted pairs yields the maximal collection. Ranks
    are vertex ids unless ``tie_seed`` asks for a seeded permutation.
    """
    if gstar is None and dist is None:
        raise ValueError("need the closure graph or its distance matrix")
    n = gstar.n if gstar is not None else dist.shape[0]
    if h_target < 1:
        raise ValueError("h_target must be >= 1")
    if dist is None:
        dist = np.full((n, n), np.inf)
        dist[gstar.tails, gstar.heads] = gstar.weights
        np.fill_diagonal(dist, 0.0)
    if tie_seed is None:
        rank = np.arange(n)
    else:
        from .rng import derive

        rank = np.argsort(derive(tie_seed, "paths").permutation(n))
    paths: list[NicePath] = []
    if h_target >= n:
        return NicePathCollection(paths, h_target, n)

    mask = np.isfinite(dist)
    np.fill_diagonal(mask, False)
    us, vs = np.nonzero(mask)
    lengths = dist[us, vs]
    order = np.lexsort((rank[vs], rank[us], lengths))
    us, vs = us[order].tolist(), vs[order].tolist()

    alive = np.ones(n, dtype=bool)
    cache: dict[int, tuple[int, np.ndarray]] = {}
    epoch = 0  # bumps whenever vertices are removed
    for u, v in zip(us, vs):
        if not (alive[u] and alive[v]):
            continue
        if h_target > 1:
            hit = cache.get(u)
            if hit is None or (hit[0] != epoch and hit[1][v] >= h_target + 1):
                # stale counts are upper bounds: only refresh when they could pass
                hit = (epoch, _chain_counts(dist, alive, u))
                cache[u] = hit
            if hit[1][v] < h_target + 1:
                continue
            seq = _lex_smallest_chain(dist, alive, u, v, h_target)
        else:
            seq = [u, v]
        paths.append(NicePath.from_vertices(len(paths), seq, dist))
        alive[seq] = False
        epoch += 1
    return NicePathCollection(paths, h_target, n)
