"""Oracle checks for hopset contracts, per-construction guarantees, and a
witness-path extractor that replays the phase-by-phase path construction."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.sparse.csgraph import dijkstra

from .builder import BuildAux, Hopset
from .edges import EdgeSet
from .graph import (
    NoPathError,
    Path,
    RoadTree,
    WeightedDigraph,
    apsp,
    hop_bounded_path,
    hop_bounded_rows,
    hop_layers,
    _BATCH_CELLS,
)
from .path_hopset import (
    designated_level,
    designated_scale,
    interval_families,
)
from .pathset import NicePath
from .rng import derive

FULL_CAP = 300
MAX_LISTED = 100
_REL = 1e-12  # relative slack for float comparisons of (1+eps)*d


class Failure(NamedTuple):
    u: int
    v: int
    required: float
    observed: float


def _edges_of(H) -> EdgeSet:
    if H is None:
        return EdgeSet()
    if isinstance(H, Hopset):
        return H.edges
    if isinstance(H, EdgeSet):
        return H
    return EdgeSet.from_edges(H)


def _union(g: WeightedDigraph, H) -> WeightedDigraph:
    e = _edges_of(H)
    if not len(e):
        return g
    return g.union(e.tails, e.heads, e.weights)


def pick_sources(n: int, full_cap: int = FULL_CAP, sample: int | None = None,
                 seed: int = 0) -> tuple[np.ndarray, str]:
    """All vertices when ``n <= full_cap``; otherwise enough random sources
    that ``sources x n`` covers at least ``sample`` (default ``10n``) pairs."""
    if n <= full_cap and sample is None:
        return np.arange(n), "full"
    k = 10 * n if sample is None else sample
    count = min(n, max(1, math.ceil(k / max(n, 1))))
    if count >= n:
        return np.arange(n), "full"
    picked = derive(seed, "verify").choice(n, size=count, replace=False)
    return np.sort(picked), "sample"


@dataclass
class VerificationReport:
    beta: int
    eps: float
    mode: str
    pairs_checked: int
    reachable_pairs: int
    max_stretch: float
    achieved_hopbound: int | None
    distance_preservation: bool
    failures: list = field(default_factory=list)
    failure_count: int = 0

    @property
    def passed(self) -> bool:
        return self.distance_preservation and self.failure_count == 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["failures"] = [list(f) for f in self.failures]
        d["passed"] = self.passed
        return d


def check_distance_preservation(g: WeightedDigraph, H, full_cap: int = FULL_CAP,
                                sample: int | None = None, seed: int = 0,
                                dist: np.ndarray | None = None):
    """Every edge weight must equal the true distance and adding H must not
    change any distance. Returns ``(ok, failures)``."""
    e = _edges_of(H)
    if dist is None:
        dist = apsp(g)
    failures = []
    if len(e):
        true = dist[e.tails, e.heads]
        bad = np.flatnonzero(true != e.weights)
        for j in bad[:MAX_LISTED].tolist():
            failures.append(Failure(int(e.tails[j]), int(e.heads[j]), float(true[j]), float(e.weights[j])))
        if len(bad):
            return False, failures
    sources, _ = pick_sources(g.n, full_cap, sample, seed)
    if g.n == 0 or not len(e):
        return True, failures
    aug = _union(g, e)
    d2 = dijkstra(aug.csr(), directed=True, indices=sources)
    d1 = dist[sources]
    diff = ~((d1 == d2) | (np.isinf(d1) & np.isinf(d2)))
    r, c = np.nonzero(diff)
    for a, b in zip(r[:MAX_LISTED].tolist(), c[:MAX_LISTED].tolist()):
        failures.append(Failure(int(sources[a]), b, float(d1[a, b]), float(d2[a, b])))
    return len(r) == 0, failures


def check_hop_stretch(g: WeightedDigraph, H, beta: int, eps: float, full_cap: int = FULL_CAP,
                      sample: int | None = None, seed: int = 0,
                      dist: np.ndarray | None = None) -> VerificationReport:
    """Hop-bounded stretch of G ∪ H against exact distances of G.

    The layered relaxation runs to its fixpoint, so the smallest hop budget
    that satisfies every checked pair comes out of the same sweep.
    """
    if beta < 0:
        raise ValueError("beta must be >= 0")
    n = g.n
    sources, mode = pick_sources(n, full_cap, sample, seed)
    if dist is None:
        exact = dijkstra(g.csr(), directed=True, indices=sources) if n else np.zeros((0, 0))
    else:
        exact = dist[sources]
    preserved, _ = check_distance_preservation(g, H, full_cap, sample, seed,
                                               dist if dist is not None else None)
    aug = _union(g, H)
    reach = np.isfinite(exact)
    reach[np.arange(len(sources)), sources] = False
    bound = (1.0 + eps) * exact * (1.0 + _REL)

    max_stretch = 1.0 if reach.any() else 0.0
    achieved = 0
    failures: list[Failure] = []
    failure_count = 0
    step = max(1, _BATCH_CELLS // max(1, aug.m))
    for lo in range(0, len(sources), step):
        sl = slice(lo, lo + step)
        rb, bb, eb = reach[sl], bound[sl], exact[sl]
        first_ok = None
        at_beta = None
        for k, layer in enumerate(hop_layers(aug, sources[sl])):
            if first_ok is None and np.all(layer[rb] <= bb[rb]):
                first_ok = k
            if k == beta:
                at_beta = layer
            if first_ok is not None and at_beta is not None:
                break
        else:
            last = layer
            if at_beta is None:
                at_beta = last  # fixpoint reached before beta
        if first_ok is None:
            achieved = None
        elif achieved is not None:
            achieved = max(achieved, first_ok)
        if rb.any():
            ratio = at_beta[rb] / eb[rb]
            max_stretch = max(max_stretch, float(ratio.max()))
            bad = rb & ~(at_beta <= bb)
            r, c = np.nonzero(bad)
            failure_count += len(r)
            for a, b in zip(r.tolist(), c.tolist()):
                if len(failures) >= MAX_LISTED:
                    break
                failures.append(Failure(int(sources[lo + a]), b, float(bb[a, b] / (1 + _REL)),
                                        float(at_beta[a, b])))
    return VerificationReport(
        beta=beta, eps=eps, mode=mode, pairs_checked=int(len(sources) * n),
        reachable_pairs=int(reach.sum()), max_stretch=max_stretch,
        achieved_hopbound=achieved, distance_preservation=preserved,
        failures=failures, failure_count=failure_count,
    )


def verify_hopset(g, H, beta, eps, full_cap=FULL_CAP, sample=None, seed=0) -> VerificationReport:
    return check_hop_stretch(g, H, beta, eps, full_cap, sample, seed)


# ------------------------------------------------------------ per-path checks


@dataclass
class BackwardPairResult:
    x: int
    y: int
    bound: float
    observed: float
    k: int
    interval: tuple[int, int]
    level: int | None
    hit: bool

    @property
    def ok(self) -> bool:
        return self.observed <= self.bound * (1 + _REL)


@dataclass
class BackwardBoundReport:
    pairs: list[BackwardPairResult]

    @property
    def obligated(self) -> int:
        return len(self.pairs)

    @property
    def conditional(self) -> list[BackwardPairResult]:
        return [p for p in self.pairs if p.hit]

    @property
    def conditional_failures(self) -> list[BackwardPairResult]:
        return [p for p in self.pairs if p.hit and not p.ok]

    @property
    def unconditional_rate(self) -> float:
        if not self.pairs:
            return 1.0
        return sum(p.ok for p in self.pairs) / len(self.pairs)


def backward_bound(dist_xy, gamma, delta, len_p, size_p, h_back, hits) -> float:
    return (1 + gamma) * dist_xy + delta * len_p * h_back / (size_p * hits)


def check_backward_bound(g_aug: WeightedDigraph, P: NicePath, edges, gamma: float,
                         delta: float, samples: dict, dist: np.ndarray | None = None,
                         hops: int = 6) -> BackwardBoundReport:
    """Check the 6-hop bound for every backward pair ``(x, y)`` of ``P``.

    ``samples`` is the output of ``draw_backward_samples`` that produced
    ``edges``. A pair is conditional when the designated sample for its
    scale, interval and level hits the road's intersection with ``P``
    inside that interval.
    """
    aug = _union(g_aug, edges)
    if dist is None:
        dist = apsp(g_aug)
    verts = list(P.vertices)
    on_p = {v: i for i, v in enumerate(verts)}
    fams = {f.k: f for f in interval_families(P)}
    rows = hop_bounded_rows(aug, verts, hops)
    out = []
    for px, x in enumerate(verts):
        if px == 0:
            continue
        tree = RoadTree(g_aug, x)
        for py in range(px):
            y = verts[py]
            if not tree.reaches(y):
                continue
            road = tree.path_to(y).vertices
            hit_pos = [on_p[v] for v in road if v in on_p]
            h_back = px - py
            bound = backward_bound(dist[x, y], gamma, delta, P.length, len(P), h_back, len(hit_pos))
            k = designated_scale(h_back)
            a, b = fams[k].designated(py)
            i = designated_level(len(hit_pos), k)
            hit = False
            if i is not None:
                chosen = set(samples[(k, a)][i])
                hit = any(a <= q <= b and verts[q] in chosen for q in hit_pos)
            out.append(BackwardPairResult(x, y, bound, float(rows[px, y]), k, (a, b), i, hit))
    return BackwardBoundReport(out)


def check_forward_two_hop(P: NicePath, fwd_edges, dist: np.ndarray) -> list[Failure]:
    """Forward pairs of ``P`` lacking an exact path of at most two hops in P ∪ H(P)."""
    verts = list(P.vertices)
    e = _edges_of(fwd_edges)
    idx = {v: i for i, v in enumerate(verts)}
    t = [idx[a] for a in verts[:-1]] + [idx[a] for a in e.tails.tolist()]
    h = [idx[b] for b in verts[1:]] + [idx[b] for b in e.heads.tolist()]
    w = [int(dist[a, b]) for a, b in zip(verts, verts[1:])] + e.weights.tolist()
    local = WeightedDigraph.from_arrays(len(verts), t, h, w)
    rows = hop_bounded_rows(local, range(len(verts)), 2)
    bad = []
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            want = dist[verts[i], verts[j]]
            if rows[i, j] != want:
                bad.append(Failure(verts[i], verts[j], float(want), float(rows[i, j])))
    return bad


# ----------------------------------------------------------- witness extractor


class WitnessError(RuntimeError):
    def __init__(self, msg, trace):
        super().__init__(msg)
        self.trace = trace


@dataclass
class WitnessResult:
    s: int
    t: int
    path: Path
    dist: float
    beta: int
    eps: float
    realizable: bool
    trace: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    @property
    def hops(self) -> int:
        return self.path.hops

    @property
    def length(self) -> int:
        return self.path.length

    @property
    def within_hops(self) -> bool:
        return self.hops <= self.beta

    @property
    def within_stretch(self) -> bool:
        return self.length <= (1 + self.eps) * self.dist * (1 + _REL)

    @property
    def ok(self) -> bool:
        return self.realizable and self.within_hops and self.within_stretch

    def to_dict(self) -> dict:
        return {
            "s": self.s, "t": self.t, "vertices": list(self.path.vertices),
            "hops": self.hops, "length": self.length, "dist": self.dist,
            "beta": self.beta, "eps": self.eps, "realizable": self.realizable,
            "within_hops": self.within_hops, "within_stretch": self.within_stretch,
            "trace": self.trace, "diagnostics": self.diagnostics,
        }


class _Walk:
    """Accumulates Q as a vertex sequence plus its length in G ∪ H."""

    def __init__(self, start):
        self.vertices = [start]
        self.length = 0

    def extend(self, p: Path):
        if p.vertices[0] != self.vertices[-1]:
            raise ValueError("walk pieces must chain")
        self.vertices.extend(p.vertices[1:])
        self.length += p.length


def extract_witness_path(g: WeightedDigraph, H, aux: BuildAux, s: int, t: int,
                         beta: int | None = None, eps: float | None = None) -> WitnessResult:
    """Assemble an ``s -> t`` walk in G ∪ H phase by phase along the road R(s,t).

    Shortcut pieces are realized as the best walk within the relevant hop
    budget (2 for forward, 6 for backward, 3 for vertex-path hops). When a
    budgeted walk does not exist the road segment is followed instead and
    the event is recorded in the trace.
    """
    beta = aux.beta if beta is None else beta
    eps = aux.eps if eps is None else eps
    dist = aux.dist
    if not np.isfinite(dist[s, t]):
        raise NoPathError(f"{t} is unreachable from {s}")
    aug = _union(g, H)
    tree = RoadTree(aux.g_aug, s)
    R = list(tree.path_to(t).vertices)
    pos = {v: i for i, v in enumerate(R)}
    dst = float(dist[s, t])
    trace: list = []
    diag: dict = {}
    W = _Walk(s)

    def road_piece(a: int, b: int) -> Path:
        ia, ib = pos[a], pos[b]
        seg = R[ia : ib + 1]
        return Path(tuple(seg), int(tree.dist[b] - tree.dist[a]))

    def shortcut(a: int, b: int, hops: int, label: str):
        if a == b:
            return
        try:
            p = hop_bounded_path(aug, a, b, hops)
            trace.append({"event": label, "from": a, "to": b, "hops": p.hops, "length": p.length})
        except NoPathError:
            p = road_piece(a, b)
            trace.append({"event": label + "-fallback", "from": a, "to": b, "hops": p.hops})
        W.extend(p)

    if len(R) - 1 <= beta:
        trace.append({"event": "road-short", "hops": len(R) - 1})
        W.extend(road_piece(s, t))
        return _finish(aug, W, s, t, dst, beta, eps, trace, diag)

    paths = aux.paths
    hier = aux.hierarchy
    L = hier.levels
    lg = math.log2(max(g.n, 2))
    cap = eps * dst / (8 * lg)
    relevant = {P.id for P in paths if P.length <= cap}
    on_rel = [paths.owner.get(v) if paths.owner.get(v) in relevant else None for v in R]

    # anchors: s_0 = s, s_i = last road vertex on a relevant path sampled at level i
    anchors = [0]
    for i in range(1, L + 1):
        best = anchors[-1]
        for j in range(len(R) - 1, anchors[-1] - 1, -1):
            pid = on_rel[j]
            if pid is not None and hier.first_level[pid] <= i:
                best = j
                break
        anchors.append(best)
    anchors.append(len(R) - 1)
    diag["anchors"] = [R[j] for j in anchors]
    diag["relevant_on_road"] = len({p for p in on_rel if p is not None})
    diag["nopath"] = {"observed": sum(p is None for p in on_rel), "predicted": beta / 3}

    # Q_0: road to the first level-1 vertex, then a vertex-path hop to s_1
    s1 = anchors[1]
    first_sampled = next((j for j, v in enumerate(R) if hier.top_level[v] >= 1), None)
    if s1 == 0:
        cur = 0
    elif first_sampled is None or first_sampled > s1:
        W.extend(road_piece(s, R[s1]))
        trace.append({"event": "q0-road", "to": R[s1]})
        cur = s1
    else:
        W.extend(road_piece(s, R[first_sampled]))
        shortcut(R[first_sampled], R[s1], 3, "q0-vertex-path")
        cur = s1

    numpaths = []
    hard_counts = []
    steps = 0
    done = False
    for i in range(1, L):
        if done:
            break
        target = anchors[i + 1]
        seen_rel = {p for p in on_rel[anchors[i]:] if p is not None}
        numpaths.append({"level": i, "observed": len(seen_rel),
                         "predicted": 24 * beta / (2**i * lg * lg)})
        if cur >= target:
            trace.append({"event": "phase-empty", "level": i})
            hard_counts.append(0)
            continue
        first_on: dict[int, int] = {}  # path id -> first road index on Q_i
        hard = 0
        while True:
            steps += 1
            if steps > 4 * len(R) + 4 * g.n:
                raise WitnessError("phase did not terminate", trace)
            nxt = cur + 1
            W.extend(road_piece(R[cur], R[nxt]))
            cur = nxt
            v = R[cur]
            if cur == target:
                break
            if cur == len(R) - 1:
                done = True
                break
            pid = on_rel[cur]
            if pid is None:
                continue
            P = paths[pid]
            if pid not in first_on:
                first_on[pid] = cur
                vf = max(j for j in range(cur, len(R)) if on_rel[j] == pid)
                if dist[v, R[vf]] > eps * dst:
                    forward = P.position(v) < P.position(R[vf])
                    shortcut(v, R[vf], 2 if forward else 6, "S1")
                    cur = vf
                else:
                    ve = _last_easy(R, on_rel, cur, pid, P, i)
                    if ve != cur:
                        forward = P.position(v) < P.position(R[ve])
                        shortcut(v, R[ve], 2 if forward else 6, "S2")
                        cur = ve
                if cur >= target:
                    break
            else:
                v0 = R[first_on[pid]]
                pv, p0 = P.position(v), P.position(v0)
                u = None
                if pv < p0:
                    u = next((P.vertices[q] for q in range(pv, p0 + 1)
                              if hier.top_level[P.vertices[q]] >= i + 1), None)
                if u is not None:
                    shortcut(v, u, 2, "S3-path")
                    shortcut(u, R[target], 3, "S3-vertex-path")
                    cur = target
                    break
                hard += 1
        hard_counts.append(hard)
    diag["numpaths"] = numpaths
    diag["hard_vertices"] = [{"level": i + 1, "observed": c, "predicted": 2**i * beta / lg}
                             for i, c in enumerate(hard_counts)]
    if cur < len(R) - 1:
        W.extend(road_piece(R[cur], t))
    return _finish(aug, W, s, t, dst, beta, eps, trace, diag)


def _last_easy(R, on_rel, cur, pid, P: NicePath, level: int) -> int:
    """Last road index ``j >= cur`` on ``P`` with ``[R[cur], R[j]]`` easy at ``level``."""
    pv = P.position(R[cur])
    best = cur
    hits = 1
    for j in range(cur + 1, len(R)):
        if on_rel[j] != pid:
            continue
        hits += 1
        py = P.position(R[j])
        if pv < py or (pv - py) / hits < 2**level:
            best = j
    return best


def _finish(aug, W: _Walk, s, t, dst, beta, eps, trace, diag) -> WitnessResult:
    wm = aug.weight_map()
    realizable = True
    total = 0
    for a, b in zip(W.vertices, W.vertices[1:]):
        w = wm.get((a, b))
        if w is None:
            realizable = False
            break
        total += w
    realizable = realizable and total == W.length and W.vertices[-1] == t
    path = Path(tuple(W.vertices), int(W.length))
    return WitnessResult(s, t, path, dst, beta, eps, realizable, trace, diag)
