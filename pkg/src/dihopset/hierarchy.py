"""Nested vertex/path samples per level and the vertex-to-path edges between them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .edges import EdgeSet, HopsetEdge
from .pathset import NicePath, NicePathCollection
from .path_hopset import geometric_classes
from .rng import derive


def level_count(n: int) -> int:
    return max(1, math.ceil(math.log2(max(n, 2))))


def vertex_threshold(n: int, beta: float, i: int, c_v: float) -> float:
    lg = math.log2(max(n, 2))
    return min(1.0, c_v * lg * lg / (2**i * beta))


def path_threshold(n: int, beta: float, i: int, c_p: float) -> float:
    lg = math.log2(max(n, 2))
    return min(1.0, c_p * 2**i * lg**3 / beta)


@dataclass
class SamplingHierarchy:
    """Level ``i`` holds the vertices with ``top_level >= i`` and the paths
    with ``first_level <= i``; a path never sampled gets ``levels + 1``."""

    n: int
    beta: float
    c_v: float
    c_p: float
    seed: int
    levels: int
    top_level: np.ndarray
    first_level: np.ndarray

    def vertex_sample(self, i: int) -> set[int]:
        return set(np.flatnonzero(self.top_level >= i).tolist())

    def path_sample(self, i: int) -> set[int]:
        return set(np.flatnonzero(self.first_level <= i).tolist())

    def vertex_on_level(self, v: int, i: int) -> bool:
        return bool(self.top_level[v] >= i)

    def path_on_level(self, pid: int, i: int) -> bool:
        return bool(self.first_level[pid] <= i)

    def report(self) -> dict:
        rows = []
        for i in range(1, self.levels + 1):
            rows.append({
                "level": i,
                "vertex_threshold": vertex_threshold(self.n, self.beta, i, self.c_v),
                "path_threshold": path_threshold(self.n, self.beta, i, self.c_p),
                "vertices": int((self.top_level >= i).sum()),
                "paths": int((self.first_level <= i).sum()),
            })
        return {"n": self.n, "beta": self.beta, "c_v": self.c_v, "c_p": self.c_p,
                "seed": self.seed, "levels": rows}

    def to_dict(self) -> dict:
        return {
            "n": self.n, "beta": self.beta, "c_v": self.c_v, "c_p": self.c_p,
            "seed": self.seed, "levels": self.levels,
            "top_level": self.top_level.tolist(),
            "first_level": self.first_level.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SamplingHierarchy":
        return cls(d["n"], d["beta"], d["c_v"], d["c_p"], d["seed"], d["levels"],
                   np.asarray(d["top_level"], dtype=np.int64),
                   np.asarray(d["first_level"], dtype=np.int64))


def build_hierarchy(n, beta, paths, c_v=24.0, c_p=24.0, seed=0) -> SamplingHierarchy:
    """One uniform draw per vertex and per path; thresholds decrease
    (vertices) or increase (paths) with the level, which nests the samples."""
    if beta < 1:
        raise ValueError("beta must be >= 1")
    L = level_count(n)
    r_v = derive(seed, "hierarchy", 0).random(n)
    r_p = derive(seed, "hierarchy", 1).random(len(paths))
    top = np.zeros(n, dtype=np.int64)
    first = np.full(len(paths), L + 1, dtype=np.int64)
    for i in range(1, L + 1):
        top[r_v < vertex_threshold(n, beta, i, c_v)] = i
        hit = (r_p < path_threshold(n, beta, i, c_p)) & (first > L)
        first[hit] = i
    return SamplingHierarchy(n, beta, c_v, c_p, seed, L, top, first)


def vertex_path_arrays(vertices, P: NicePath, eps: float, dist: np.ndarray):
    """Batched vertex-path edges: for each vertex and each distance class
    (base ``1 + eps/2``), an edge to the first path vertex in that class."""
    vs = np.asarray(vertices, dtype=np.int64)
    pv = np.asarray(P.vertices, dtype=np.int64)
    if not len(vs):
        z = np.zeros(0, dtype=np.int64)
        return z, z, z
    block = dist[np.ix_(vs, pv)]
    rows, cols = np.nonzero(np.isfinite(block) & (block > 0))
    if not len(rows):
        z = np.zeros(0, dtype=np.int64)
        return z, z, z
    d = block[rows, cols]
    cls = geometric_classes(d, 1.0 + eps / 2)
    keys = rows * (int(cls.max()) + 1) + cls
    # np.nonzero walks row-major, so the first key occurrence is the first path vertex
    _, idx = np.unique(keys, return_index=True)
    return vs[rows[idx]], pv[cols[idx]], d[idx].astype(np.int64)


def vertex_path_hopset(v: int, P: NicePath, eps: float, dist: np.ndarray) -> list[HopsetEdge]:
    t, h, w = vertex_path_arrays([v], P, eps, dist)
    return [HopsetEdge(a, b, c, "vertex-path") for a, b, c in zip(t.tolist(), h.tolist(), w.tolist())]


def connect_levels(h: SamplingHierarchy, paths: NicePathCollection, eps: float,
                   dist: np.ndarray) -> EdgeSet:
    """Union over levels of vertex-path edges between same-level samples.

    A pair ``(v, P)`` meets on some level iff ``top_level[v] >= first_level[P]``,
    so each pair is processed once.
    """
    parts = []
    for P in paths:
        lvl = h.first_level[P.id]
        if lvl > h.levels:
            continue
        vs = np.flatnonzero(h.top_level >= lvl)
        t, hd, w = vertex_path_arrays(vs, P, eps, dist)
        if len(t):
            parts.append(EdgeSet.from_arrays(t, hd, w, "vertex-path"))
    return EdgeSet.concat(parts).dedup(h.n)
