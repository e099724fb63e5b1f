"""Beta sweeps: build, verify and tabulate one row per (method, beta, seed)."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .builder import BuildConfig, build_folklore, build_hopset
from .graph import WeightedDigraph, apsp
from .verify import FULL_CAP, check_hop_stretch

COLUMNS = (
    "method", "family", "n", "m", "beta", "eps", "seed", "hopset_size", "counts_by_kind",
    "achieved_hopbound", "max_stretch", "passed", "build_ms", "verify_ms", "error",
)


@dataclass
class BenchRow:
    method: str
    family: str
    n: int
    m: int
    beta: int
    eps: float
    seed: int
    hopset_size: int = 0
    counts_by_kind: dict | None = None
    achieved_hopbound: int | None = None
    max_stretch: float | None = None
    passed: bool | None = None
    build_ms: float = 0.0
    verify_ms: float = 0.0
    error: str = ""

    def as_csv_row(self) -> dict:
        d = asdict(self)
        d["counts_by_kind"] = json.dumps(self.counts_by_kind or {}, sort_keys=True)
        return d


def thread_count() -> int:
    raw = os.environ.get("HOPSET_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_one(task) -> BenchRow:
    g, family, method, beta, eps, seed, do_verify, full_cap, sample = task
    row = BenchRow(method, family, g.n, g.m, beta, eps, seed)
    try:
        dist = apsp(g)
        t0 = time.perf_counter()
        if method == "folklore":
            hs = build_folklore(g, beta, seed, dist=dist)
        else:
            hs = build_hopset(g, BuildConfig(beta, eps, seed), dist=dist)
        row.build_ms = (time.perf_counter() - t0) * 1e3
        row.hopset_size = len(hs)
        row.counts_by_kind = {k: c for k, c in hs.counts.items() if c}
        if do_verify:
            t0 = time.perf_counter()
            if method == "folklore":
                # exact distances; the hop budget is whatever the sweep reaches
                rep = check_hop_stretch(g, hs, max(beta, g.n), 0.0, full_cap, sample, seed, dist)
            else:
                rep = check_hop_stretch(g, hs, beta, eps, full_cap, sample, seed, dist)
            row.verify_ms = (time.perf_counter() - t0) * 1e3
            row.achieved_hopbound = rep.achieved_hopbound
            row.max_stretch = rep.max_stretch
            row.passed = rep.passed
    except Exception as exc:  # recorded in the row, the sweep continues
        row.error = f"{type(exc).__name__}: {exc}"
        row.passed = False
    return row


def run_bench(g: WeightedDigraph, beta_grid, eps=0.5, seeds=(0,), family="custom",
              folklore=True, verify=True, full_cap=FULL_CAP, sample=None,
              threads: int | None = None) -> list[BenchRow]:
    """Rows come back in grid order: method, then beta, then seed."""
    for b in beta_grid:
        if b < 1:
            raise ValueError("every beta must be >= 1")
    methods = ["hopset"] + (["folklore"] if folklore else [])
    tasks = []
    for method in methods:
        for beta in beta_grid:
            if method == "folklore" and beta < 2:
                continue
            for seed in seeds:
                tasks.append((g, family, method, int(beta), eps, int(seed), verify, full_cap, sample))
    threads = thread_count() if threads is None else threads
    if threads <= 1 or len(tasks) <= 1:
        return [_run_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_run_one, tasks))


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r.as_csv_row())
    return buf.getvalue()


def default_beta(n: int) -> int:
    return math.ceil(20 * math.log2(max(n, 2)))
