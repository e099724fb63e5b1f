"""End-to-end hopset assembly, plus the folklore and shortcut-set baselines."""

from __future__ import annotations

import json
import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components

from .edges import KIND_CODE, KINDS, EdgeSet
from .graph import WeightedDigraph, apsp, closure_from_dist
from .hierarchy import SamplingHierarchy, build_hierarchy, connect_levels
from .path_hopset import backward_shortcut, forward_shortcut, path_edges
from .pathset import NicePath, NicePathCollection, build_nice_paths, nice_hop_target
from .rng import derive

REGIMES = ("auto", "small", "large")


@dataclass
class BuildConfig:
    beta: int
    eps: float = 0.5
    seed: int = 0
    c_v: float = 24.0
    c_p: float = 24.0
    regime: str = "auto"
    c_large: float = 1.0

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if self.beta < 1:
            raise ValueError("beta must be >= 1")
        if self.regime not in REGIMES:
            raise ValueError(f"regime must be one of {REGIMES}")


@dataclass
class BuildAux:
    """What the witness extractor needs to replay the analysis."""

    dist: np.ndarray
    paths: NicePathCollection
    hierarchy: SamplingHierarchy
    g_aug: WeightedDigraph
    eps: float
    beta: int


@dataclass
class Hopset:
    n: int
    edges: EdgeSet
    params: dict
    aux: BuildAux | None = None
    diagnostics: dict = field(default_factory=dict)
    runtime_ms: float = 0.0

    @property
    def counts(self) -> dict[str, int]:
        return self.edges.counts_by_kind()

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def augmented(self, g: WeightedDigraph) -> WeightedDigraph:
        return g.union(self.edges.tails, self.edges.heads, self.edges.weights)

    def to_dict(self, g: WeightedDigraph | None = None) -> dict:
        d = {
            "n": self.n,
            "m": g.m if g is not None else None,
            "W": g.W if g is not None else None,
            **self.params,
            "counts_by_kind": self.counts,
            "total_edges": len(self.edges),
            "runtime_ms": round(self.runtime_ms, 3),
            "edges": [list(e) for e in self.edges],
        }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Hopset":
        rows = d.get("edges", [])
        if rows:
            t, h, w, k = zip(*rows)
            edges = EdgeSet(t, h, w, [KIND_CODE[x] for x in k])
        else:
            edges = EdgeSet()
        params = {k: d[k] for k in ("beta", "eps", "seed", "regime") if k in d}
        return cls(d["n"], edges, params, runtime_ms=d.get("runtime_ms", 0.0))

    def save(self, path, g: WeightedDigraph | None = None) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(g), fh)

    @classmethod
    def load(cls, path) -> "Hopset":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def aux_to_dict(hs: Hopset) -> dict:
    """Enough of a small-beta build to replay the witness extractor later."""
    if hs.aux is None:
        raise ValueError("hopset carries no build state (large-beta and baselines do not)")
    a = hs.aux
    return {
        "n": hs.n, "beta": a.beta, "eps": a.eps,
        "paths": [list(P.vertices) for P in a.paths],
        "h_target": a.paths.h_target,
        "hierarchy": a.hierarchy.to_dict(),
        "edges": [list(e) for e in hs.edges],
    }


def aux_from_dict(g: WeightedDigraph, d: dict) -> tuple[BuildAux, EdgeSet]:
    if d["n"] != g.n:
        raise ValueError("aux file was built for a different graph")
    dist = apsp(g)
    paths = NicePathCollection(
        [NicePath.from_vertices(i, vs, dist) for i, vs in enumerate(d["paths"])],
        d["h_target"], g.n)
    hier = SamplingHierarchy.from_dict(d["hierarchy"])
    rows = d["edges"]
    if rows:
        t, h, w, k = zip(*rows)
        edges = EdgeSet(t, h, w, [KIND_CODE[x] for x in k])
    else:
        edges = EdgeSet()
    fwd = edges.kinds == KIND_CODE["forward"]
    g_aug = g.union(edges.tails[fwd], edges.heads[fwd], edges.weights[fwd])
    return BuildAux(dist, paths, hier, g_aug, d["eps"], d["beta"]), edges


def select_regime(n: int, beta: float) -> str:
    return "small" if beta <= n ** (1 / 3) else "large"


def _forward_edges(g: WeightedDigraph, paths: NicePathCollection, dist: np.ndarray) -> EdgeSet:
    """Type-1 edges: path edges absent from G at their exact weight, plus H(P)."""
    present = g.weight_map()
    out = []
    for P in paths:
        for e in path_edges(P, dist):
            if present.get((e.tail, e.head)) != e.weight:
                out.append(e)
        out.extend(forward_shortcut(P, dist))
    return EdgeSet.from_edges(out)


def build_hopset_small_beta(g: WeightedDigraph, cfg: BuildConfig,
                            dist: np.ndarray | None = None, quiet: bool = False) -> Hopset:
    t0 = time.perf_counter()
    n = g.n
    params = {"beta": cfg.beta, "eps": cfg.eps, "seed": cfg.seed, "regime": "small"}
    if dist is None:
        dist = apsp(g)
    if n < 2:
        return Hopset(n, EdgeSet(), params, runtime_ms=(time.perf_counter() - t0) * 1e3)
    if not quiet and cfg.beta < 20 * math.log2(n):
        warnings.warn(f"beta={cfg.beta} is below 20*log2(n)={20 * math.log2(n):.1f}", stacklevel=2)
    h = nice_hop_target(n, cfg.beta, cfg.eps)
    paths = build_nice_paths(None, h, dist=dist)

    forward = _forward_edges(g, paths, dist)
    hier = build_hierarchy(n, cfg.beta, paths, cfg.c_v, cfg.c_p, cfg.seed)
    vertex_path = connect_levels(hier, paths, cfg.eps, dist)
    backward = []
    for P in paths:
        backward.extend(backward_shortcut(P, cfg.eps / 2, cfg.eps, dist, cfg.seed))
    backward = EdgeSet.from_edges(backward)

    edges = EdgeSet.concat([forward, vertex_path, backward]).dedup(n)
    g_aug = g.union(forward.tails, forward.heads, forward.weights)
    aux = BuildAux(dist, paths, hier, g_aug, cfg.eps, cfg.beta)
    diag = {
        "h_target": h,
        "nice_paths": len(paths),
        "covered_vertices": sum(len(P) for P in paths),
        "emitted_by_kind": {"forward": len(forward), "vertex-path": len(vertex_path),
                            "backward": len(backward)},
        "hierarchy": hier.report()["levels"],
    }
    return Hopset(n, edges, params, aux, diag, (time.perf_counter() - t0) * 1e3)


def large_beta_rate(n: int, beta: float, c: float = 1.0) -> float:
    return min(1.0, c * math.log2(max(n, 2)) * math.sqrt(n) / beta**1.5)


def reduced_beta(n_sub: int) -> int:
    if n_sub < 2:
        return 1
    return max(1, math.floor(n_sub ** (1 / 3) / math.log2(n_sub)))


def build_hopset_large_beta(g: WeightedDigraph, cfg: BuildConfig,
                            dist: np.ndarray | None = None) -> Hopset:
    """Closure on a vertex sample plus a small-beta hopset of that closure."""
    t0 = time.perf_counter()
    n = g.n
    params = {"beta": cfg.beta, "eps": cfg.eps, "seed": cfg.seed, "regime": "large"}
    if dist is None:
        dist = apsp(g)
    q = large_beta_rate(n, cfg.beta, cfg.c_large)
    picked = np.flatnonzero(derive(cfg.seed, "large-beta").random(n) < q)
    diag = {"q": q, "sampled": int(len(picked)), "expected_sampled": q * n,
            "sampled_sigma": math.sqrt(n * q * (1 - q))}
    if len(picked) == 0:
        return Hopset(n, EdgeSet(), params, None, diag, (time.perf_counter() - t0) * 1e3)

    sub_dist = dist[np.ix_(picked, picked)]
    g_sub = closure_from_dist(sub_dist)
    closure = EdgeSet.from_arrays(picked[g_sub.tails], picked[g_sub.heads], g_sub.weights, "closure")
    parts = [closure]
    beta_sub = reduced_beta(len(picked))
    diag["beta_sub"] = beta_sub
    if len(picked) >= 2:
        sub_cfg = BuildConfig(beta_sub, cfg.eps, cfg.seed, cfg.c_v, cfg.c_p, "small", cfg.c_large)
        sub = build_hopset_small_beta(g_sub, sub_cfg, dist=sub_dist, quiet=True)
        e = sub.edges
        parts.append(EdgeSet(picked[e.tails], picked[e.heads], e.weights, e.kinds))
        diag["sub_counts"] = sub.counts
    edges = EdgeSet.concat(parts).dedup(n)
    return Hopset(n, edges, params, None, diag, (time.perf_counter() - t0) * 1e3)


def build_hopset(g: WeightedDigraph, cfg: BuildConfig, dist: np.ndarray | None = None) -> Hopset:
    regime = cfg.regime
    if regime == "auto":
        regime = select_regime(g.n, cfg.beta)
    if regime == "small":
        return build_hopset_small_beta(g, cfg, dist)
    return build_hopset_large_beta(g, cfg, dist)


# ----------------------------------------------------------------- baselines


def folklore_rate(n: int, beta: float, c: float = 1.0) -> float:
    return min(1.0, c * math.log2(max(n, 2)) / beta)


def _all_pairs_among(picked: np.ndarray, dist: np.ndarray):
    block = dist[np.ix_(picked, picked)]
    mask = np.isfinite(block)
    np.fill_diagonal(mask, False)
    r, c = np.nonzero(mask)
    return picked[r], picked[c], block[r, c].astype(np.int64)


def build_folklore(g: WeightedDigraph, beta: int, seed: int, c: float = 1.0,
                   dist: np.ndarray | None = None) -> Hopset:
    """Exact-distance edges between every reachable pair of a random sample."""
    if beta < 2:
        raise ValueError("beta must be >= 2")
    t0 = time.perf_counter()
    if dist is None:
        dist = apsp(g)
    q = folklore_rate(g.n, beta, c)
    picked = np.flatnonzero(derive(seed, "folklore").random(g.n) < q)
    t, h, w = _all_pairs_among(picked, dist)
    edges = EdgeSet.from_arrays(t, h, w, "folklore")
    params = {"beta": beta, "eps": 0.0, "seed": seed, "regime": "folklore"}
    diag = {"q": q, "sampled": int(len(picked))}
    return Hopset(g.n, edges, params, None, diag, (time.perf_counter() - t0) * 1e3)


def build_shortcut_set(g: WeightedDigraph, beta: int, seed: int, weighted: bool = True,
                       c: float = 1.0) -> Hopset:
    """Bidirectional star per strongly connected component, then folklore
    sampling on the condensation (edges between component centers).

    With ``weighted=True`` every edge carries the exact distance, so the
    result is also distance preserving; otherwise all weights are 1.
    """
    t0 = time.perf_counter()
    n = g.n
    dist = apsp(g)
    ncomp, labels = connected_components(g.csr(), directed=True, connection="strong")
    centers = np.full(ncomp, n, dtype=np.int64)
    np.minimum.at(centers, labels, np.arange(n))
    others = np.flatnonzero(centers[labels] != np.arange(n))
    c_of = centers[labels[others]]
    st = np.concatenate([c_of, others])
    sh = np.concatenate([others, c_of])
    sw = dist[st, sh].astype(np.int64) if weighted else np.ones(len(st), dtype=np.int64)
    parts = [EdgeSet.from_arrays(st, sh, sw, "star")]

    q = folklore_rate(ncomp, beta, c) if beta >= 2 else 1.0
    picked_comps = np.flatnonzero(derive(seed, "shortcut").random(ncomp) < q)
    t, h, w = _all_pairs_among(centers[picked_comps], dist)
    if not weighted:
        w = np.ones(len(t), dtype=np.int64)
    parts.append(EdgeSet.from_arrays(t, h, w, "folklore"))
    edges = EdgeSet.concat(parts).dedup(n)
    params = {"beta": beta, "eps": 0.0, "seed": seed, "regime": "shortcut"}
    diag = {"components": int(ncomp), "sampled_components": int(len(picked_comps))}
    return Hopset(n, edges, params, None, diag, (time.perf_counter() - t0) * 1e3)


__all__ = [
    "BuildConfig", "BuildAux", "Hopset", "KINDS", "build_hopset", "build_hopset_small_beta",
    "build_hopset_large_beta", "build_folklore", "build_shortcut_set", "select_regime",
]
