"""Command-line front end: one verb per pipeline stage.

Subcommands: decompose, table-build, kernelize, verify, experiment.
The KERNEL_BUDGET_N environment variable overrides the oracle size budget.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import harness, io
from .graphs import BoundariedGraph
from .problems import get_problem
from .replacement import build_replacement_table, format_table, kernelize, parse_table
from .treedec import exact_treewidth, heuristic_decomposition


def _read(path: str) -> str:
    return Path(path).read_text()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_graph(path: str):
    g = io.parse_graph(_read(path))
    return g.graph if isinstance(g, BoundariedGraph) else g


def _cmd_decompose(args) -> int:
    g = _load_graph(args.input)
    if args.exact:
        _, td = exact_treewidth(g, max_vertices=args.exact_budget)
    else:
        td = heuristic_decomposition(g)
    _emit(io.format_decomposition(td, g.n), args.out)
    return 0


def _cmd_table_build(args) -> int:
    p = get_problem(args.problem)
    table = build_replacement_table(
        p, args.t, args.size_bound, certify=args.certify, rng_seed=args.seed
    )
    _emit(format_table(table), args.out)
    print(
        f"built {len(table)} rows for {p.name} at t={args.t}, "
        f"max representative size {table.max_rep_size}",
        file=sys.stderr,
    )
    return 0


def _cmd_kernelize(args) -> int:
    p = get_problem(args.problem)
    g = _load_graph(args.input)
    table = parse_table(_read(args.table))
    inst = kernelize(p, g, args.k, table, eta=args.eta)
    _emit(io.format_graph(inst.graph), args.out)
    print(
        f"kernel: n {g.n} -> {inst.graph.n}, k {args.k} -> {inst.k}, "
        f"{len(inst.trace)} replacements",
        file=sys.stderr,
    )
    return 0


def _corpus_from_args(args):
    params = {
        "count": args.count,
        "n_min": args.n_min,
        "n_max": args.n_max,
        "t": args.grid_t,
        "tree_size": args.tree_size,
        "pendants": args.pendants,
    }
    return harness.gen_corpus(args.family, params, args.seed)


def _cmd_verify(args) -> int:
    p = get_problem(args.problem)
    table = parse_table(_read(args.table))
    if args.input:
        corpus = [_load_graph(args.input)]
    else:
        corpus = _corpus_from_args(args)
    report = harness.verify_kernel_soundness(
        p, corpus, table, k_window=args.k_window, eta=args.eta
    )
    lines = [
        f"checked {len(report.rows)} (instance, k) pairs on {len(corpus)} instances",
        f"violations: {len(report.violations)}",
    ]
    for row in report.violations:
        lines.append(
            f"  instance {row.instance_id} k={row.k}: before={row.member_before} "
            f"after={row.member_after} kernel_n={row.kernel_n} k'={row.k_prime}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if report.ok else 1


def _cmd_experiment(args) -> int:
    p = get_problem(args.problem)
    table = parse_table(_read(args.table))
    corpus = _corpus_from_args(args)
    report = harness.run_experiment(
        p,
        corpus,
        table,
        eta=args.eta,
        family=args.family,
        seed=args.seed,
        deterministic_timing=args.no_timing,
    )
    _emit(report.to_csv(), args.out)
    ratio = report.max_ratio
    shown = "n/a" if ratio != ratio else f"{ratio:.3f}"
    print(f"max kernel_n/k over corpus: {shown}", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="twkern", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="tree-decompose a graph file")
    d.add_argument("--input", required=True)
    d.add_argument("--exact", action="store_true", help="exact treewidth (small graphs)")
    d.add_argument("--exact-budget", type=int, default=20)
    d.add_argument("--out")
    d.set_defaults(fn=_cmd_decompose)

    t = sub.add_parser("table-build", help="build a protrusion replacement table")
    t.add_argument("--problem", required=True)
    t.add_argument("--t", type=int, default=1)
    t.add_argument("--size-bound", type=int, default=6)
    t.add_argument("--certify", default="light", choices=["off", "light", "thorough", "exhaustive"])
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out")
    t.set_defaults(fn=_cmd_table_build)

    k = sub.add_parser("kernelize", help="kernelize an instance with a table")
    k.add_argument("--problem", required=True)
    k.add_argument("--input", required=True)
    k.add_argument("--k", type=int, required=True)
    k.add_argument("--table", required=True)
    k.add_argument("--eta", type=int)
    k.add_argument("--out")
    k.set_defaults(fn=_cmd_kernelize)

    for name, fn in (("verify", _cmd_verify), ("experiment", _cmd_experiment)):
        s = sub.add_parser(name)
        s.add_argument("--problem", required=True)
        s.add_argument("--table", required=True)
        s.add_argument("--input", help="single instance file (verify only)" if name == "verify" else argparse.SUPPRESS)
        s.add_argument("--family", default="random-planar",
                       choices=["grid", "grid+pendants", "random-planar", "union"])
        s.add_argument("--count", type=int, default=10)
        s.add_argument("--n-min", type=int, default=8)
        s.add_argument("--n-max", type=int, default=22)
        s.add_argument("--grid-t", type=int, default=4)
        s.add_argument("--tree-size", type=int, default=15)
        s.add_argument("--pendants", type=int, default=3)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--eta", type=int)
        s.add_argument("--k-window", type=int, default=1)
        s.add_argument("--no-timing", action="store_true",
                       help="zero the wall_time column for byte-identical reports")
        s.add_argument("--out")
        s.set_defaults(fn=fn)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
