"""Command-line interface.

Subcommands: gen-probs, encode, tokens, hve-demo, bench, analyze.  Every
command takes a --seed and writes byte-reproducible output files.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import analysis, bench
from .encoding import (
    build_fixed_length,
    coding_tree_to_json,
    index_map_to_csv,
    make_cell_indexes,
    make_coding_tree,
)
from .errors import ConfigError, PrivzoneError
from .grid import (
    generate_sigmoid_probabilities,
    load_probabilities_csv,
    sample_alert_zone,
)
from .tokens import minimize_tokens, pairing_cost
from .trees import (
    build_balanced_tree,
    build_bary_huffman_tree,
    build_huffman_tree,
    tree_to_json,
)


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_grid(args):
    if args.probs:
        grid, missing = load_probabilities_csv(args.probs)
        if missing:
            print(f"warning: {missing} cells missing from CSV, defaulted to 0", file=sys.stderr)
        return grid
    return generate_sigmoid_probabilities(args.rows, args.cols, args.a, args.b, args.seed)


def _add_grid_source(parser):
    parser.add_argument("--probs", help="probability CSV (row,col,probability)")
    parser.add_argument("--rows", type=int, default=32)
    parser.add_argument("--cols", type=int, default=32)
    parser.add_argument("--a", type=float, default=0.9, help="sigmoid inflection point")
    parser.add_argument("--b", type=float, default=100.0, help="sigmoid gradient")


def _build_tree(args, grid):
    if args.method == "huffman":
        return build_huffman_tree(grid)
    if args.method == "balanced":
        return build_balanced_tree(grid)
    if args.method == "fixed":
        return build_fixed_length(grid)[0]
    if args.method == "bary":
        return build_bary_huffman_tree(grid, args.arity)
    raise ConfigError(f"unknown method {args.method!r}")


def cmd_gen_probs(args):
    grid = generate_sigmoid_probabilities(args.rows, args.cols, args.a, args.b, args.seed)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["row", "col", "probability"])
        for cell, weight in zip(grid.cells, grid.weights):
            writer.writerow([cell.row, cell.col, repr(weight)])
    print(f"wrote {grid.n} cells to {args.out}")


def cmd_encode(args):
    grid = _load_grid(args)
    tree = _build_tree(args, grid)
    if args.tree_out:
        _write_json(args.tree_out, tree_to_json(tree))
    if args.coding_tree_out:
        _write_json(args.coding_tree_out, coding_tree_to_json(tree))
    if args.indexes_out:
        with open(args.indexes_out, "w", encoding="utf-8") as fh:
            fh.write(index_map_to_csv(make_cell_indexes(tree)))
    print(f"{args.method} tree over {tree.n} cells: RL={tree.rl}")


def cmd_tokens(args):
    grid = _load_grid(args)
    tree = _build_tree(args, grid)
    index_map = make_cell_indexes(tree)
    coding_tree = make_coding_tree(tree)
    if args.cells:
        cell_ids = sorted({int(c) for c in args.cells.split(",")})
    else:
        zone = sample_alert_zone(grid, args.cell_size, args.radius, args.seed)
        cell_ids = sorted(zone.cell_ids)
    indexes = [index_map.index_of(c) for c in cell_ids]
    token_set = minimize_tokens(indexes, coding_tree)
    payload = {
        "zone": cell_ids,
        "tokens": list(token_set.tokens),
        "pairing_cost": pairing_cost(token_set),
    }
    if args.out:
        _write_json(args.out, payload)
    print(json.dumps(payload, sort_keys=True))


def cmd_hve_demo(args):
    zone = args.zone.split(",")
    result = bench.hve_demo(zone, args.user_index, seed=args.seed)
    if args.out:
        _write_json(args.out, result)
    print(json.dumps(result, sort_keys=True))


def cmd_bench(args):
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            config = bench.ExperimentConfig.from_json(json.load(fh))
    else:
        dist = bench.DistributionSpec(kind="sigmoid", a=args.a, b=args.b, seed=args.seed)
        if args.probs:
            dist = bench.DistributionSpec(kind="csv", path=args.probs)
        mix = None
        if args.workload:
            mix = tuple(
                (float(part.split(":")[0]), float(part.split(":")[1]))
                for part in args.workload.split(",")
            )
        config = bench.ExperimentConfig(
            rows=args.rows,
            cols=args.cols,
            cell_size_m=args.cell_size,
            distribution=dist,
            methods=tuple(args.methods.split(",")),
            radii_m=tuple(float(r) for r in args.radii.split(",")),
            trials=args.trials,
            workload_mix=mix,
            seed=args.seed,
            validate_hve=args.validate_hve,
        )
    if config.workload_mix:
        result = bench.run_workload_mix(config)
    else:
        result = bench.run_experiment(config)
    bench.emit_results(result, args.out, fmt=args.format)
    print(f"wrote {len(result.rows)} result rows to {args.out}")


def cmd_analyze(args):
    grid = _load_grid(args)
    tree = _build_tree(args, grid)
    report = analysis.build_overhead_report(tree, grid)
    payload = analysis.report_to_json(report)
    payload["avg_max_ratio"] = bench.code_length_ratio(tree, grid)
    if args.out:
        _write_json(args.out, payload)
    print(json.dumps(payload, sort_keys=True))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="privzone",
        description="Probability-aware grid encoding and HVE token benchmarks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-probs", help="generate sigmoid probabilities as CSV")
    p.add_argument("--rows", type=int, default=32)
    p.add_argument("--cols", type=int, default=32)
    p.add_argument("--a", type=float, default=0.9)
    p.add_argument("--b", type=float, default=100.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_probs)

    p = sub.add_parser("encode", help="build a tree and emit tree/index artifacts")
    _add_grid_source(p)
    p.add_argument("--method", default="huffman", choices=["huffman", "balanced", "fixed", "bary"])
    p.add_argument("--arity", type=int, default=3, help="arity for --method bary")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tree-out")
    p.add_argument("--coding-tree-out")
    p.add_argument("--indexes-out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("tokens", help="minimize tokens for an alert zone")
    _add_grid_source(p)
    p.add_argument("--method", default="huffman", choices=["huffman", "balanced", "fixed", "bary"])
    p.add_argument("--arity", type=int, default=3)
    p.add_argument("--cells", help="comma-separated alert cell ids")
    p.add_argument("--radius", type=float, default=20.0)
    p.add_argument("--cell-size", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_tokens)

    p = sub.add_parser("hve-demo", help="end-to-end match demo with pairing counter")
    p.add_argument("--zone", default="100,000", help="comma-separated alert indexes")
    p.add_argument("--user-index", default="000")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_hve_demo)

    p = sub.add_parser("bench", help="run the experiment harness")
    p.add_argument("--config", help="JSON config file (overrides other flags)")
    p.add_argument("--probs")
    p.add_argument("--rows", type=int, default=32)
    p.add_argument("--cols", type=int, default=32)
    p.add_argument("--a", type=float, default=0.99)
    p.add_argument("--b", type=float, default=100.0)
    p.add_argument("--cell-size", type=float, default=10.0)
    p.add_argument("--methods", default="huffman,balanced,fixed,fixed-minimized")
    p.add_argument("--radii", default="10,20,50,100,200,300")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--workload", help="radius:fraction pairs, e.g. 20:0.9,300:0.1")
    p.add_argument("--validate-hve", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("analyze", help="overhead-bounds report for a built tree")
    _add_grid_source(p)
    p.add_argument("--method", default="huffman", choices=["huffman", "balanced", "fixed", "bary"])
    p.add_argument("--arity", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except PrivzoneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
