"""Hopset edge records and a columnar edge container."""

from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple

import numpy as np

KINDS = ("forward", "vertex-path", "backward", "closure", "folklore", "star")
KIND_CODE = {k: i for i, k in enumerate(KINDS)}


class HopsetEdge(NamedTuple):
    tail: int
    head: int
    weight: int
    kind: str


class EdgeSet:
    """Columnar edge list; ``dedup`` keeps the first edge per ``(tail, head)``."""

    def __init__(self, tails=(), heads=(), weights=(), kinds=()):
        self.tails = np.asarray(tails, dtype=np.int64)
        self.heads = np.asarray(heads, dtype=np.int64)
        self.weights = np.asarray(weights, dtype=np.int64)
        self.kinds = np.asarray(kinds, dtype=np.int8)

    @classmethod
    def from_edges(cls, edges: Iterable[HopsetEdge]) -> "EdgeSet":
        edges = list(edges)
        if not edges:
            return cls()
        t, h, w, k = zip(*edges)
        return cls(t, h, w, [KIND_CODE[x] for x in k])

    @classmethod
    def from_arrays(cls, tails, heads, weights, kind: str) -> "EdgeSet":
        tails = np.asarray(tails, dtype=np.int64)
        return cls(tails, heads, weights, np.full(len(tails), KIND_CODE[kind], dtype=np.int8))

    @classmethod
    def concat(cls, parts: Iterable["EdgeSet"]) -> "EdgeSet":
        parts = list(parts)
        if not parts:
            return cls()
        return cls(
            np.concatenate([p.tails for p in parts]),
            np.concatenate([p.heads for p in parts]),
            np.concatenate([p.weights for p in parts]),
            np.concatenate([p.kinds for p in parts]),
        )

    def __len__(self):
        return len(self.tails)

    def __iter__(self) -> Iterator[HopsetEdge]:
        for t, h, w, k in zip(self.tails.tolist(), self.heads.tolist(),
                              self.weights.tolist(), self.kinds.tolist()):
            yield HopsetEdge(t, h, w, KINDS[k])

    def pairs(self) -> set[tuple[int, int]]:
        return set(zip(self.tails.tolist(), self.heads.tolist()))

    def dedup(self, n: int) -> "EdgeSet":
        """Drop repeated endpoints, keeping the earliest occurrence.

        Raises if two copies of an edge disagree on weight: every
        construction emits exact distances, so a mismatch is a bug.
        """
        if not len(self):
            return self
        key = self.tails * n + self.heads
        order = np.argsort(key, kind="stable")
        sk = key[order]
        first = np.r_[True, sk[1:] != sk[:-1]]
        group = np.cumsum(first) - 1
        w_sorted = self.weights[order]
        if np.any(w_sorted != w_sorted[first][group]):
            raise ValueError("conflicting weights for a repeated hopset edge")
        keep = np.sort(order[first])
        return EdgeSet(self.tails[keep], self.heads[keep], self.weights[keep], self.kinds[keep])

    def counts_by_kind(self) -> dict[str, int]:
        counts = np.bincount(self.kinds, minlength=len(KINDS)) if len(self) else np.zeros(len(KINDS), int)
        return {k: int(c) for k, c in zip(KINDS, counts)}
