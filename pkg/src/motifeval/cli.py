"""Command line entry point.

Exit codes: 0 ok, 1 configuration/input error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys

from .diffusion import MODEL_KINDS, ModelSpec
from .errors import ConfigError, ParseError
from .graph_io import SYNTHETIC_KINDS, generate_synthetic, load_edge_list, parse_graph_spec
from .harness import FEATURE_COLUMNS, load_config, run_evaluation
from .metrics import DEFAULT_DELTA, EvalConfig, generate_temporal
from .motif import MOTIF_NAMES, count_fast
from .rng import RngHierarchy
from .temporal import DEFAULT_RATE, read_temporal, write_temporal

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def _load_graph(arg: str, master_seed: int, directed: bool):
    head = arg.split(":", 1)[0]
    if head in SYNTHETIC_KINDS:
        kind, n, param = parse_graph_spec(arg)
        return generate_synthetic(kind, n, param, RngHierarchy(master_seed).stream("graph", arg), name=arg)
    if not os.path.exists(arg):
        raise ConfigError(f"graph {arg!r} is neither a kind:n:param spec nor an existing file")
    return load_edge_list(arg, directed=directed)


def cmd_simulate(args) -> int:
    g = _load_graph(args.graph, args.master_seed, not args.undirected)
    model = ModelSpec(
        args.model,
        phi_scale=args.phi_scale,
        confirm_prob=args.confirm_prob,
        bank_prob=args.bank_prob,
        rounds=args.rounds,
        n_seed_nodes=args.seed_nodes,
    )
    cfg = EvalConfig(cascades=args.cascades, rate=args.rate, master_seed=args.master_seed)
    tn = generate_temporal(g, model, args.seed, cfg)
    text = write_temporal(tn)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
        logging.info("wrote %d temporal edges to %s", len(tn), args.output)
    return EXIT_OK


def cmd_count(args) -> int:
    with open(args.input, "rb") as fh:
        tn = read_temporal(fh.read(), strict=not args.allow_ties)
    vec = count_fast(tn, args.delta)
    payload = {
        "delta": args.delta,
        "edges": len(tn),
        "layout": list(MOTIF_NAMES),
        "counts": [int(c) for c in vec.counts],
        "normalized": [float(x) for x in vec.normalized],
    }
    if args.output:
        with open(args.output, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["row"] + FEATURE_COLUMNS)
            w.writerow(["count"] + [int(c) for c in vec.counts])
            w.writerow(["normalized"] + [repr(float(x)) for x in vec.normalized])
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=1)
    if not args.output and not args.json:
        json.dump(payload, sys.stdout)
        sys.stdout.write("\n")
    return EXIT_OK


def _print_scores(report) -> None:
    print(f"{'model':<8}{'s_stab':>14}{'s_sep':>14}")
    for m in report.models:
        sep = report.separability[m]
        print(f"{m:<8}{report.stability[m]:>14.6g}{'absent' if sep is None else format(sep, '.6g'):>14}")
    for note in report.notes:
        print(f"note: {note}")


def _print_matrix(report) -> None:
    print(" " * 8 + "".join(f"{m:>12}" for m in report.models))
    for i, a in enumerate(report.models):
        print(f"{a:<8}" + "".join(f"{report.distance[i, j]:>12.6g}" for j in range(len(report.models))))


def cmd_evaluate(args) -> int:
    exp = load_config(args.config)
    report = run_evaluation(exp, out_dir=args.output, workers=args.workers)
    _print_scores(report)
    print()
    _print_matrix(report)
    return EXIT_OK


def cmd_compare(args) -> int:
    exp = load_config(args.config)
    report = run_evaluation(exp, out_dir=None, workers=args.workers)
    _print_matrix(report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="motifeval", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="generate one temporal network")
    s.add_argument("--graph", required=True, help="kind:n:param or edge-list path")
    s.add_argument("--undirected", action="store_true", help="read edge-list lines in both directions")
    s.add_argument("--model", required=True, choices=MODEL_KINDS)
    s.add_argument("--seed", type=int, required=True, help="protocol seed k")
    s.add_argument("--master-seed", type=int, default=0)
    s.add_argument("--cascades", type=int, default=10)
    s.add_argument("--rate", type=float, default=DEFAULT_RATE)
    s.add_argument("--phi-scale", type=float, default=ModelSpec.phi_scale)
    s.add_argument("--confirm-prob", type=float, default=ModelSpec.confirm_prob)
    s.add_argument("--bank-prob", type=float, default=ModelSpec.bank_prob)
    s.add_argument("--rounds", type=int, default=ModelSpec.rounds)
    s.add_argument("--seed-nodes", type=int, default=ModelSpec.n_seed_nodes)
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("count", help="count the 36 motifs of a temporal edge list")
    c.add_argument("--input", required=True)
    c.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    c.add_argument("--allow-ties", action="store_true", help="accept equal consecutive timestamps")
    c.add_argument("-o", "--output", help="CSV output (count and normalized rows)")
    c.add_argument("--json", help="JSON output")
    c.set_defaults(func=cmd_count)

    e = sub.add_parser("evaluate", help="full evaluation from a config file")
    e.add_argument("--config", required=True)
    e.add_argument("-o", "--output", required=True, help="report directory")
    e.add_argument("--workers", type=int, default=None, help="overrides MOTIFEVAL_WORKERS")
    e.set_defaults(func=cmd_evaluate)

    m = sub.add_parser("compare", help="print the model distance matrix only")
    m.add_argument("--config", required=True)
    m.add_argument("--workers", type=int, default=None)
    m.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, which belongs with the config errors
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001
        print(f"runtime error: {exc!r}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
