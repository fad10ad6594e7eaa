"""Command-line interface.

Subcommands: generate, solve-exact, sweep, compare, export-plotdata.
Exit codes: 0 success, 2 invalid input, 3 resource limit exceeded,
4 internal invariant violation.  File outputs are written atomically
(temp + rename).  NKBENCH_OUTPUT_DIR supplies the default output
directory for sweeps whose config does not name one.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import traceback
from pathlib import Path

from .exact import NodeLimitError, solve
from .harness import (
    PopulationCapError,
    SweepConfig,
    _atomic_write,
    compare,
    execute_sweep,
    read_aggregates_csv,
    read_results_csv,
    write_plot_csv,
    write_ratio_csv,
)
from .landscape import generate_instance, instance_to_dict, load_instance

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_RESOURCE_LIMIT = 3
EXIT_INTERNAL = 4

OUTPUT_DIR_ENV = "NKBENCH_OUTPUT_DIR"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nkbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate one instance file")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--k", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True, help="instance JSON path")

    sol = sub.add_parser("solve-exact", help="certify the global optimum of an instance file")
    sol.add_argument("instance", help="instance JSON path")
    sol.add_argument("--node-limit", type=int, default=None)
    sol.add_argument("--restarts", type=int, default=None, help="hill-climber seeding restarts")

    swp = sub.add_parser("sweep", help="run a benchmark sweep from a config file")
    swp.add_argument("--config", required=True, help="sweep config JSON path")
    swp.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    swp.add_argument("--resume", action="store_true", help="continue an interrupted sweep")

    cmp_ = sub.add_parser("compare", help="ratio curves between two results files")
    cmp_.add_argument("--a", required=True, help="results CSV of the numerator algorithm")
    cmp_.add_argument("--b", required=True, help="results CSV of the denominator algorithm")
    cmp_.add_argument("--out", required=True, help="ratio CSV path")
    cmp_.add_argument("--algorithm-a", default=None, help="filter side A to one algorithm")
    cmp_.add_argument("--algorithm-b", default=None, help="filter side B to one algorithm")

    exp = sub.add_parser("export-plotdata", help="per-figure series from an aggregates file")
    exp.add_argument("--in", dest="inp", required=True, help="aggregates CSV path")
    exp.add_argument("--out", required=True, help="plot data CSV path")
    return parser


def _cmd_generate(args) -> int:
    inst = generate_instance(args.n, args.k, args.seed)
    _atomic_write(Path(args.out), json.dumps(instance_to_dict(inst)) + "\n")
    return EXIT_OK


def _cmd_solve_exact(args) -> int:
    inst = load_instance(args.instance)
    try:
        res = solve(inst, restarts=args.restarts, node_limit=args.node_limit)
    except NodeLimitError as err:
        json.dump(
            {
                "format_version": 1,
                "certified": False,
                "incumbent_value": err.incumbent.fitness,
                "incumbent_bits": err.incumbent.bits.tolist(),
                "nodes_expanded": err.nodes_expanded,
            },
            sys.stdout,
        )
        sys.stdout.write("\n")
        return EXIT_RESOURCE_LIMIT
    json.dump(
        {
            "format_version": 1,
            "certified": True,
            "optimum_value": res.optimum_value,
            "optimum_bits": res.optimum_bits.tolist(),
            "nodes_expanded": res.nodes_expanded,
            "seed_value": res.seed_value,
        },
        sys.stdout,
    )
    sys.stdout.write("\n")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    config = SweepConfig.from_dict(json.loads(Path(args.config).read_text()))
    out_dir = config.output_dir or os.environ.get(OUTPUT_DIR_ENV) or "."
    paths = execute_sweep(config, out_dir, workers=args.workers, resume=args.resume)
    print(f"results: {paths.results}")
    print(f"aggregates: {paths.aggregates}")
    print(f"manifest: {paths.manifest}")
    return EXIT_OK if paths.complete else EXIT_RESOURCE_LIMIT


def _cmd_compare(args) -> int:
    stats_a = read_results_csv(args.a)
    stats_b = read_results_csv(args.b)
    if args.algorithm_a:
        stats_a = [s for s in stats_a if s.algorithm == args.algorithm_a]
    if args.algorithm_b:
        stats_b = [s for s in stats_b if s.algorithm == args.algorithm_b]
    curve = compare(stats_a, stats_b)
    write_ratio_csv(args.out, curve)
    return EXIT_OK


def _cmd_export_plotdata(args) -> int:
    aggregates = read_aggregates_csv(args.inp)
    write_plot_csv(args.out, aggregates)
    return EXIT_OK


_COMMANDS = {
    "generate": _cmd_generate,
    "solve-exact": _cmd_solve_exact,
    "sweep": _cmd_sweep,
    "compare": _cmd_compare,
    "export-plotdata": _cmd_export_plotdata,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except PopulationCapError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_RESOURCE_LIMIT
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
