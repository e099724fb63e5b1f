"""Hopset edges attached to a single nice path.

* ``forward_shortcut``: 2-hop exact paths for every forward pair.
* ``weak_backward``: 3-hop approximate paths for backward pairs touching a
  chosen vertex subset, built from geometric distance classes per window.
* ``backward_shortcut``: the multi-scale interval scheme that calls
  ``weak_backward`` on sampled subsets with a per-interval additive budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .edges import HopsetEdge
from .pathset import NicePath
from .rng import derive


def geometric_classes(d: np.ndarray, base: float) -> np.ndarray:
    """Index ``j`` with ``base**j <= d < base**(j+1)`` for finite ``d >= 1``.

    Powers are built by repeated multiplication so that consecutive class
    boundaries differ by exactly one floating-point product by ``base``.
    """
    d = np.asarray(d, dtype=np.float64)
    finite = d[np.isfinite(d)]
    top = max(2.0, float(finite.max()) if finite.size else 2.0)
    count = int(math.ceil(math.log(top) / math.log(base))) + 3
    powers = np.empty(count)
    powers[0] = 1.0
    for j in range(1, count):
        powers[j] = powers[j - 1] * base
    return np.searchsorted(powers, d, side="right") - 1


def class_count(scale: float, base: float) -> int:
    """Number of classes ``0..ceil(log_base(scale))``."""
    return int(math.ceil(math.log(max(scale, 1.0)) / math.log(base))) + 1


# ------------------------------------------------------------------- forward


def path_edges(P: NicePath, dist: np.ndarray | None = None) -> list[HopsetEdge]:
    """The consecutive edges of ``P`` (closure edges, not necessarily in G)."""
    out = []
    for i, (a, b) in enumerate(zip(P.vertices, P.vertices[1:])):
        if dist is not None:
            w = int(dist[a, b])
        else:
            w = P.prefix_lengths[i + 1] - P.prefix_lengths[i]
        out.append(HopsetEdge(a, b, w, "forward"))
    return out


def forward_shortcut(P: NicePath, dist: np.ndarray | None = None) -> list[HopsetEdge]:
    """Recursive-midpoint edges: together with ``P`` every forward pair gets a
    path of at most two hops and exact length.

    Edges coinciding with consecutive path edges are omitted.
    """
    verts = P.vertices
    pre = P.prefix_lengths
    out: list[HopsetEdge] = []
    stack = [(0, len(verts) - 1)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 1:
            continue
        mid = (lo + hi) // 2
        m = verts[mid]
        for a in range(lo, mid):
            if mid - a > 1:
                w = int(dist[verts[a], m]) if dist is not None else pre[mid] - pre[a]
                out.append(HopsetEdge(verts[a], m, w, "forward"))
        for b in range(mid + 1, hi + 1):
            if b - mid > 1:
                w = int(dist[m, verts[b]]) if dist is not None else pre[b] - pre[mid]
                out.append(HopsetEdge(m, verts[b], w, "forward"))
        stack.append((lo, mid - 1))
        stack.append((mid + 1, hi))
    return out


# ------------------------------------------------------------- weak backward


def split_windows(prefix: Sequence[float], budget: float) -> np.ndarray:
    """Greedy left-to-right windows of internal length ``<= budget``.

    Returns the window index of every position.
    """
    win = np.zeros(len(prefix), dtype=np.int64)
    start = 0
    wid = 0
    for i in range(1, len(prefix)):
        if prefix[i] - prefix[start] > budget:
            start = i
            wid += 1
        win[i] = wid
    return win


def _first_per_group(keys: np.ndarray, positions: np.ndarray) -> np.ndarray:
    _, idx = np.unique(keys, return_index=True)
    return positions[idx]


def weak_backward(
    segment: Sequence[int],
    S: Sequence[int],
    gamma: float,
    delta: float,
    dist: np.ndarray,
) -> list[HopsetEdge]:
    """Per sampled vertex, window and distance class: one edge to the first
    window vertex in the class and one edge from the last window vertex in
    the class.

    ``segment`` must be a contiguous piece of a shortest path.
    """
    seg = np.asarray(segment, dtype=np.int64)
    if len(seg) < 2 or len(S) == 0:
        return []
    steps = dist[seg[:-1], seg[1:]]
    prefix = np.r_[0.0, np.cumsum(steps)]
    win = split_windows(prefix, delta * prefix[-1])
    base = 1.0 + gamma
    out: list[HopsetEdge] = []
    positions = np.arange(len(seg))
    for v in S:
        v = int(v)
        d_out = dist[v, seg]
        ok = np.isfinite(d_out) & (d_out > 0)
        if ok.any():
            pos = positions[ok]
            cls = geometric_classes(d_out[pos], base)
            keys = win[pos] * (int(cls.max()) + 1) + cls
            for p in _first_per_group(keys, pos):
                out.append(HopsetEdge(v, int(seg[p]), int(d_out[p]), "backward"))
        d_in = dist[seg, v]
        ok = np.isfinite(d_in) & (d_in > 0)
        if ok.any():
            pos = positions[ok][::-1]
            cls = geometric_classes(d_in[pos], base)
            keys = win[pos] * (int(cls.max()) + 1) + cls
            for p in _first_per_group(keys, pos):
                out.append(HopsetEdge(int(seg[p]), v, int(d_in[p]), "backward"))
    return out


# --------------------------------------------------------- full backward


@dataclass(frozen=True)
class IntervalFamily:
    k: int
    intervals: tuple[tuple[int, int], ...]  # (first index, last index) on the path
    mu_k: float

    def designated(self, pos_y: int) -> tuple[int, int]:
        """The interval starting at the largest multiple of ``2**k`` not after ``pos_y``."""
        start = (pos_y >> self.k) << self.k
        for iv in self.intervals:
            if iv[0] == start:
                return iv
        raise ValueError(f"no interval starts at {start}")


def scale_count(path_size: int) -> int:
    return max(1, math.ceil(math.log2(max(1, path_size - 1))))


def interval_families(P: NicePath) -> list[IntervalFamily]:
    L = len(P)
    pre = P.prefix_lengths
    fams = []
    for k in range(1, scale_count(L) + 1):
        size, off = 1 << (k + 1), 1 << k
        ivs = []
        start = 0
        while start <= L - 2:
            ivs.append((start, min(L, start + size) - 1))
            start += off
        lengths = [pre[b] - pre[a] for a, b in ivs]
        fams.append(IntervalFamily(k, tuple(ivs), sum(lengths) / len(lengths)))
    return fams


def interval_class(length: float, mu: float) -> int:
    """Smallest ``l >= 0`` with ``length < 2**(l+1) * mu``."""
    ell = 0
    while (2 ** (ell + 1)) * mu <= length:
        ell += 1
    return ell


def sample_probability(n: int, i: int) -> float:
    return min(1.0, math.log2(max(n, 2)) / 2**i)


def reduced_delta(delta: float, ell: int, i: int) -> float:
    return delta / 2 ** (ell + i + 3)


def draw_backward_samples(P: NicePath, n: int, seed: int) -> dict:
    """Sampled subsets ``S_i`` per scale and interval.

    Returns ``{(k, first_index): {i: tuple_of_vertices}}``. One uniform draw
    is spent per (vertex slot, interval, i), all from the
    ``("backward", path id, k)`` stream.
    """
    out: dict = {}
    for fam in interval_families(P):
        k = fam.k
        draws = derive(seed, "backward", P.id, k).random((len(fam.intervals), k, 1 << (k + 1)))
        for j, (a, b) in enumerate(fam.intervals):
            seg = P.vertices[a : b + 1]
            per_i = {}
            for i in range(1, k + 1):
                p = sample_probability(n, i)
                per_i[i] = tuple(v for off, v in enumerate(seg) if draws[j, i - 1, off] < p)
            out[(k, a)] = per_i
    return out


def backward_shortcut(
    P: NicePath,
    gamma: float,
    delta: float,
    dist: np.ndarray,
    seed: int,
    samples: dict | None = None,
) -> list[HopsetEdge]:
    n = dist.shape[0]
    if samples is None:
        samples = draw_backward_samples(P, n, seed)
    pre = P.prefix_lengths
    found: dict[tuple[int, int], HopsetEdge] = {}
    for fam in interval_families(P):
        for a, b in fam.intervals:
            ell = interval_class(pre[b] - pre[a], fam.mu_k)
            seg = P.vertices[a : b + 1]
            for i, S in samples[(fam.k, a)].items():
                for e in weak_backward(seg, S, gamma, reduced_delta(delta, ell, i), dist):
                    found.setdefault((e.tail, e.head), e)
    return list(found.values())


def designated_scale(h: int) -> int:
    """Smallest ``k >= 1`` with ``h <= 2**k``."""
    return max(1, math.ceil(math.log2(h)))


def designated_level(hits_on_path: int, k: int) -> int | None:
    """``i`` in ``[1, k]`` with ``hits_on_path - 4`` in ``(2**i, 2**(i+1)]``, if any."""
    excess = hits_on_path - 4
    for i in range(1, k + 1):
        if 2**i < excess <= 2 ** (i + 1):
            return i
    return None
