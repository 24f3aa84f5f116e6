"""Command-line entry point: ``regsandpile <subcommand> [options]``."""

from __future__ import annotations

import argparse
import json
import sys

from .abelian import AbelianGroupType, PGroupType, Partition
from .graphs import Seed, sample_graph
from .harness import ExperimentSpec, RunResult, run
from .laws import LawKind, law_prob, top_groups
from .sandpile import graph_is_connected, sandpile_group, sylow_profile

EXIT_VIOLATION = 2


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.replace(" ", "").split(",") if x)


def _groups(text: str) -> tuple[str, ...]:
    return tuple(g.strip() for g in text.split(",") if g.strip())


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
    common.add_argument("--samples", type=int, default=1000, help="samples per n (default 1000)")
    common.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("--out", help="directory for records.jsonl, summary.csv and report.txt")
    common.add_argument("--format", choices=("records", "csv"),
                        help="print JSON-line records or the CSV summary instead of the report")
    common.add_argument("--assert", dest="check", action="store_true",
                        help="exit with status 2 when a threshold is violated")
    return common


def _graph_args(p: argparse.ArgumentParser, n_default: str, model_default: str = "directed-regular",
                d_default: int = 3):
    p.add_argument("--n", default=n_default, help="vertex count(s), comma separated")
    p.add_argument("--d", type=int, default=d_default)
    p.add_argument("--model", default=model_default,
                   choices=("directed-regular", "matching", "directed-er"))
    p.add_argument("--rho", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="regsandpile",
                                     description="Sandpile groups of random regular graphs.")
    common = _common()
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", parents=[common], help="sample one graph and print its sandpile group")
    _graph_args(p, "20")
    p.add_argument("--primes", default="2,3,5,7")

    p = sub.add_parser("law", parents=[common], help="evaluate a limiting law")
    p.add_argument("what", nargs="?", choices=("prob", "table"), default="prob")
    p.add_argument("--kind", default="directed-regular",
                   help="directed-regular, undirected-odd, undirected-even or directed-er")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--lambda", dest="lam", default="", help="partition, e.g. 2,1 (empty: trivial)")
    p.add_argument("--top", type=int, default=10)

    p = sub.add_parser("compare", parents=[common], help="Sylow distribution against its law")
    _graph_args(p, "100")
    p.add_argument("--primes", default="2,3")
    p.add_argument("--cap", type=int, default=12)

    p = sub.add_parser("mixing", parents=[common], help="exact mixing gaps on small V^n")
    p.add_argument("--group", default="Z/2")
    p.add_argument("--n", default="8")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--model", choices=("directed", "matching"), default="directed")

    p = sub.add_parser("moments", parents=[common], help="surjective V-moments")
    _graph_args(p, "100")
    p.add_argument("--groups", default="Z/2,Z/3,Z/4")
    p.add_argument("--cap", type=int, default=12)

    p = sub.add_parser("singularity", parents=[common], help="singularity of the adjacency mod p")
    _graph_args(p, "50,100,200", model_default="matching")
    p.add_argument("--primes", default="5")

    p = sub.add_parser("tree-entropy", parents=[common], help="log torsion per vertex")
    _graph_args(p, "50,100,200,400", model_default="matching")

    p = sub.add_parser("rank-growth", parents=[common], help="p-ranks relative to n")
    _graph_args(p, "50,100,200", model_default="matching")
    p.add_argument("--primes", default="2,3,5,7")

    p = sub.add_parser("cokernel", parents=[common], help="cokernels of random matrices over Z/p^k")
    p.add_argument("--model", choices=("square", "symmetric", "symmetric-even"), default="square")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--cap", type=int, default=6)
    p.add_argument("--n", default="60")

    p = sub.add_parser("parity-check", parents=[common], help="odd 2-rank for even d")
    _graph_args(p, "20,50,100", model_default="matching", d_default=4)
    return parser


def _spec(args) -> ExperimentSpec:
    cmd = args.command
    base = dict(samples=args.samples, seed=args.seed, workers=args.workers, out=args.out)
    if cmd == "mixing":
        return ExperimentSpec("mixing-gap", _ints(args.n), model=args.model, d=args.d,
                              groups=(args.group,), **{**base, "samples": 0})
    if cmd == "cokernel":
        return ExperimentSpec("cokernel", _ints(args.n), model=args.model, p=args.p, k=args.k,
                              cap=args.cap, primes=(args.p,), **base)
    kind = {"compare": "sylow-distribution", "moments": "moments", "singularity": "singularity",
            "tree-entropy": "tree-entropy", "rank-growth": "rank-growth",
            "parity-check": "parity-check"}[cmd]
    extra = {}
    if cmd in ("compare", "singularity", "rank-growth"):
        extra["primes"] = _ints(args.primes)
    if cmd == "moments":
        groups = _groups(args.groups)
        primes = sorted({p for g in groups for p in AbelianGroupType.parse(g).primes()})
        extra.update(groups=groups, primes=tuple(primes) or (2,))
    if cmd == "parity-check":
        extra["primes"] = (2,)
    if hasattr(args, "cap"):
        extra["cap"] = args.cap
    return ExperimentSpec(kind, _ints(args.n), model=args.model, d=args.d, rho=args.rho,
                          **extra, **base)


def _emit(result: RunResult, fmt: str | None, out=None):
    out = out or sys.stdout
    if fmt == "records":
        for r in result.records:
            out.write(r.dumps() + "\n")
    elif fmt == "csv":
        out.write(result.summary_csv())
    else:
        out.write(result.render() + "\n")


def _cmd_sample(args) -> int:
    n = _ints(args.n)[0]
    g = sample_graph(args.model, n, Seed(args.seed), d=args.d, rho=args.rho)
    res = sandpile_group(g)
    rec = {"graph": g.to_record(), "sandpile": res.to_record()}
    if graph_is_connected(g):
        rec["sylow"] = {str(p): str(s.sylow) + (" (truncated)" if s.truncated else "")
                        for p, s in sylow_profile(g, _ints(args.primes)).items()}
    if args.format == "records":
        print(json.dumps(rec))
    else:
        print(f"{args.model} n={n} seed={args.seed}: {res.group} "
              f"(connected={res.connected}, log|tors|={res.torsion_order_log:.4f})")
        for p, s in rec.get("sylow", {}).items():
            print(f"  {p}-Sylow: {s}")
    return 0


def _cmd_law(args) -> int:
    kind = LawKind.parse(args.kind)
    if args.what == "table":
        rows = top_groups(kind, args.p, args.top)
        print("group,probability")
        for G, prob in rows:
            print(f"{G},{prob:.12g}")
        return 0
    G = PGroupType(args.p, Partition.from_exponents(_ints(args.lam)))
    val = law_prob(kind, G)
    print(f"{kind.value} p={args.p} G={G}: probability {float(val.probability):.15g} "
          f"(tail bound {val.error_bound:.3g}, {val.truncation_terms} product terms)")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sample":
            return _cmd_sample(args)
        if args.command == "law":
            return _cmd_law(args)
        spec = _spec(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    result = run(spec)
    _emit(result, args.format)
    if args.check and result.violations:
        return EXIT_VIOLATION
    return 0


if __name__ == "__main__":
    sys.exit(main())
