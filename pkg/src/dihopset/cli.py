"""``dihopset`` command line: gen, build, verify, bench, witness.

Exit codes: 0 when every verification passed, 1 on a verification failure,
2 on bad usage or unreadable input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bench import default_beta, rows_to_csv, run_bench
from .builder import BuildConfig, Hopset, aux_from_dict, aux_to_dict, build_hopset
from .generate import FAMILIES, generate
from .graph import GraphFormatError, NoPathError, format_graph, read_graph
from .verify import FULL_CAP, check_hop_stretch, extract_witness_path

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_gen(a) -> int:
    kw = {}
    if a.layers:
        kw["layers"] = a.layers
    if a.cycles:
        kw["cycles"] = a.cycles
    g = generate(a.family, a.n, a.m, a.W, a.seed, **kw)
    _write(a.out, format_graph(g))
    return EXIT_OK


def cmd_build(a) -> int:
    g = read_graph(a.graph)
    beta = a.beta if a.beta is not None else default_beta(g.n)
    cfg = BuildConfig(beta, a.eps, a.seed, a.cv, a.cp, a.regime)
    hs = build_hopset(g, cfg)
    doc = hs.to_dict(g)
    _write(a.out, json.dumps(doc) + "\n")
    if a.aux:
        if hs.aux is None:
            print("no aux state for this regime; use --regime small", file=sys.stderr)
            return EXIT_USAGE
        _write(a.aux, json.dumps(aux_to_dict(hs)) + "\n")
    summary = {k: doc[k] for k in ("n", "beta", "regime", "total_edges", "counts_by_kind", "runtime_ms")}
    print(json.dumps(summary), file=sys.stderr)
    return EXIT_OK


def cmd_verify(a) -> int:
    g = read_graph(a.graph)
    hs = Hopset.load(a.hopset)
    if hs.n != g.n:
        print("hopset and graph disagree on n", file=sys.stderr)
        return EXIT_USAGE
    beta = a.beta if a.beta is not None else hs.params.get("beta", default_beta(g.n))
    eps = a.eps if a.eps is not None else hs.params.get("eps", 0.5)
    cap = g.n if a.full else FULL_CAP
    rep = check_hop_stretch(g, hs, beta, eps, full_cap=cap, sample=a.sample, seed=a.seed)
    doc = rep.to_dict()
    if a.report:
        _write(a.report, json.dumps(doc, indent=1) + "\n")
    print(json.dumps({k: doc[k] for k in ("passed", "mode", "pairs_checked", "max_stretch",
                                          "achieved_hopbound", "distance_preservation",
                                          "failure_count")}))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_bench(a) -> int:
    if a.graph:
        g = read_graph(a.graph)
        family = "file"
    else:
        if not (a.family and a.n and a.m):
            print("bench needs --graph or --family/--n/--m", file=sys.stderr)
            return EXIT_USAGE
        g = generate(a.family, a.n, a.m, a.W, a.graph_seed)
        family = a.family
    betas = a.betas or [default_beta(g.n)]
    rows = run_bench(g, betas, a.eps, a.seeds, family, folklore=not a.no_folklore,
                     verify=not a.no_verify, full_cap=g.n if a.full else FULL_CAP, sample=a.sample)
    _write(a.out, rows_to_csv(rows))
    if a.no_verify:
        return EXIT_OK if all(not r.error for r in rows) else EXIT_FAIL
    return EXIT_OK if all(r.passed for r in rows) else EXIT_FAIL


def cmd_witness(a) -> int:
    g = read_graph(a.graph)
    with open(a.aux) as fh:
        aux, edges = aux_from_dict(g, json.load(fh))
    res = extract_witness_path(g, edges, aux, a.s, a.t)
    print(json.dumps(res.to_dict()))
    return EXIT_OK if res.ok else EXIT_FAIL


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dihopset", description="Hopsets for weighted digraphs.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("gen", help="generate a synthetic graph")
    s.add_argument("--family", choices=FAMILIES, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--W", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--layers", type=int)
    s.add_argument("--cycles", type=int)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("build", help="build a hopset")
    s.add_argument("--graph", required=True)
    s.add_argument("--beta", type=int, help="default ceil(20*log2 n)")
    s.add_argument("--eps", type=float, default=0.5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--regime", choices=("auto", "small", "large"), default="auto")
    s.add_argument("--cv", type=float, default=24.0)
    s.add_argument("--cp", type=float, default=24.0)
    s.add_argument("--out", default="-")
    s.add_argument("--aux", help="also write the build state needed by 'witness'")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("verify", help="check a hopset against exact oracles")
    s.add_argument("--graph", required=True)
    s.add_argument("--hopset", required=True)
    s.add_argument("--beta", type=int)
    s.add_argument("--eps", type=float)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--full", action="store_true", help="check every pair regardless of n")
    g.add_argument("--sample", type=int, help="number of sampled pairs (default 10n above n=300)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--report")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bench", help="sweep beta and seeds, emit CSV")
    s.add_argument("--graph")
    s.add_argument("--family", choices=FAMILIES)
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--W", type=int, default=10)
    s.add_argument("--graph-seed", type=int, default=0)
    s.add_argument("--betas", type=_ints)
    s.add_argument("--eps", type=float, default=0.5)
    s.add_argument("--seeds", type=_ints, default=[0])
    s.add_argument("--no-folklore", action="store_true")
    s.add_argument("--no-verify", action="store_true")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--full", action="store_true")
    g.add_argument("--sample", type=int)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("witness", help="extract a witness path for one pair")
    s.add_argument("--graph", required=True)
    s.add_argument("--aux", required=True)
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--t", type=int, required=True)
    s.set_defaults(func=cmd_witness)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return a.func(a)
    except (GraphFormatError, ValueError, NoPathError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
