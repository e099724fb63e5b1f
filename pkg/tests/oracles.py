"""Independent brute-force oracles. Deliberately naive: no shared code with
the package beyond plain edge lists."""

from __future__ import annotations

import itertools
import math
from collections import deque

import numpy as np

INF = math.inf


def floyd_warshall(n, edges):
    d = [[INF] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = 0
    for u, v, w in edges:
        if w < d[u][v]:
            d[u][v] = w
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == INF:
                continue
            di = d[i]
            for j in range(n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return d


def walks_upto(n, edges, s, k):
    """Min length over walks from s with at most k edges, by explicit enumeration."""
    adj = [[] for _ in range(n)]
    for u, v, w in edges:
        adj[u].append((v, w))
    best = [INF] * n
    best[s] = 0

    def rec(u, length, left):
        if length < best[u]:
            best[u] = length
        if left == 0:
            return
        for v, w in adj[u]:
            rec(v, length + w, left - 1)

    rec(s, 0, k)
    return best


def simple_paths(n, edges, s, t):
    """Every simple s -> t path as (length, hops, vertices)."""
    wmap = {}
    for u, v, w in edges:
        wmap[(u, v)] = min(w, wmap.get((u, v), INF))
    adj = [[] for _ in range(n)]
    for (u, v), w in wmap.items():
        adj[u].append((v, w))
    out = []

    def rec(u, seen, length, seq):
        if u == t:
            out.append((length, len(seq) - 1, tuple(seq)))
            return
        for v, w in adj[u]:
            if v not in seen:
                seen.add(v)
                seq.append(v)
                rec(v, seen, length + w, seq)
                seq.pop()
                seen.discard(v)

    rec(s, {s}, 0, [s])
    return out


def bfs_closure(n, pairs):
    adj = [[] for _ in range(n)]
    for u, v in pairs:
        adj[u].append(v)
    reach = []
    for s in range(n):
        seen = {s}
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    dq.append(v)
        reach.append(seen)
    return reach


def brute_nice_paths(n, dist, h):
    """Greedy on explicit enumeration of every h-hop shortest chain of unused
    vertices, ordered by (length, first, last, vertex sequence)."""
    alive = set(range(n))
    chosen = []
    while True:
        best = None
        for seq in itertools.permutations(sorted(alive), h + 1):
            if any(dist[a][b] == INF for a, b in zip(seq, seq[1:])):
                continue
            length = sum(dist[a][b] for a, b in zip(seq, seq[1:]))
            if length != dist[seq[0]][seq[-1]]:
                continue
            key = (length, seq[0], seq[-1], seq)
            if best is None or key < best:
                best = key
        if best is None:
            return chosen
        chosen.append(list(best[3]))
        alive -= set(best[3])


def two_hop_best(local_edges, a, b):
    """Shortest a -> b route with at most two edges among local_edges."""
    w1 = {}
    for u, v, w in local_edges:
        w1[(u, v)] = min(w, w1.get((u, v), INF))
    best = w1.get((a, b), INF)
    for (u, m), w in w1.items():
        if u == a and (m, b) in w1:
            best = min(best, w + w1[(m, b)])
    return best


def minplus_two_hop(k, edges):
    """Dense ``k x k`` best walks of at most two hops by one min-plus square."""
    a = np.full((k, k), np.inf)
    np.fill_diagonal(a, 0)
    for u, v, w in edges:
        a[u, v] = min(a[u, v], w)
    best = a.copy()
    for mid in range(k):
        np.minimum(best, a[:, mid, None] + a[None, mid, :], out=best)
    return best
