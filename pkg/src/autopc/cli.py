"""Command line: ``autopc discover | simulate | bench | metrics``.

Exit codes: 0 success, 1 usage or config error, 2 data or I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from .bench import (ExperimentConfig, alpha_curve_csv, default_jobs, raw_csv, results_json,
                    results_table, run_experiment)
from .formats import GraphFormatError, format_graph, read_graph, reorder
from .graph import GraphError, dag_to_cpdag
from .independence import Dataset, DataError, FisherZTest
from .metrics import edge_confusion, f1, mcc, normalized_shd, shd
from .pc import PcConfig, run_pc
from .selection import AlphaGrid, autopc, metric_registry
from .synth import gen_random_dag, sample_sem

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    raw = os.environ.get("AUTOPC_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"AUTOPC_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="autopc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("discover", help="learn a PDAG from a CSV file")
    d.add_argument("csv_path")
    d.add_argument("--grid", default=None, help="comma-separated alphas (AutoPC)")
    d.add_argument("--metric", default="nshd", help="nshd | f1 | mcc")
    d.add_argument("--alpha", type=float, default=None, help="run plain PC at this alpha")
    d.add_argument("--out", required=True, help="output graph file; JSON sidecar at OUT.json")

    s = sub.add_parser("simulate", help="sample a random linear-Gaussian SEM")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--degree", type=float, default=2.0)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--out-csv", required=True)
    s.add_argument("--out-graph", required=True, help="true DAG; the CPDAG goes to OUT.cpdag")

    b = sub.add_parser("bench", help="run the synthetic benchmark")
    b.add_argument("--config", default=None, help="JSON ExperimentConfig")
    b.add_argument("--dims", default=None)
    b.add_argument("--sample-sizes", default=None)
    b.add_argument("--reps", type=int, default=None)
    b.add_argument("--seed", type=int, default=None)
    b.add_argument("--grid", default=None)
    b.add_argument("--oracle", action="store_true")
    b.add_argument("--jobs", type=int, default=None)
    b.add_argument("--out", default=None, help="write OUT.json, OUT.txt and OUT.curve.csv")
    b.add_argument("--raw", default=None, help="per-rep CSV path")
    b.add_argument("--no-timing", action="store_true", help="omit wall-clock fields")

    m = sub.add_parser("metrics", help="compare two graph files")
    m.add_argument("graph_a")
    m.add_argument("graph_b")
    m.add_argument("--json", action="store_true")
    return p


def _ints(text: str, flag: str):
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{flag}: expected comma-separated integers") from None
    if not vals:
        raise UsageError(f"{flag}: empty list")
    return vals


def cmd_discover(args) -> int:
    if args.alpha is not None and not 0 < args.alpha < 1:
        raise UsageError("--alpha must lie in (0, 1)")
    try:
        grid = AlphaGrid.parse(args.grid) if args.grid is not None else AlphaGrid()
        metric = metric_registry(args.metric)
    except ValueError as e:
        raise UsageError(str(e)) from None
    try:
        data = Dataset.from_csv(args.csv_path)
        data.corr
    except (OSError, DataError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    test = FisherZTest(data)
    names = data.column_names
    if args.alpha is not None:
        g, stats = run_pc(test, PcConfig(args.alpha), names)
        side = {"mode": "pc", "alpha": args.alpha, **stats.to_dict()}
    else:
        res = autopc(test, grid, metric, names=names)
        g = res.chosen_graph
        side = {"mode": "autopc", "metric": args.metric, **res.to_dict()}
    try:
        Path(args.out).write_text(format_graph(g))
        Path(args.out + ".json").write_text(json.dumps(side, indent=2, sort_keys=True) + "\n")
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    print(format_graph(g), end="")
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.d < 2 or args.n < 2:
        raise UsageError("--d and --n must be at least 2")
    if not 0 <= args.degree <= args.d - 1:
        raise UsageError(f"--degree must lie in [0, {args.d - 1}]")
    seed = args.seed if args.seed is not None else _default_seed()
    rng = np.random.default_rng(seed)
    wdag = gen_random_dag(args.d, args.degree, rng)
    data = sample_sem(wdag, args.n, rng)
    try:
        data.to_csv(args.out_csv)
        Path(args.out_graph).write_text(format_graph(wdag.structure))
        Path(args.out_graph + ".cpdag").write_text(format_graph(dag_to_cpdag(wdag.structure)))
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def cmd_bench(args) -> int:
    raw = {}
    if args.config is not None:
        try:
            raw = json.loads(Path(args.config).read_text())
        except OSError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_DATA
        except json.JSONDecodeError as e:
            raise UsageError(f"config is not valid JSON: {e}") from None
        if not isinstance(raw, dict):
            raise UsageError("config must be a JSON object")
    if args.dims is not None:
        raw["dims"] = _ints(args.dims, "--dims")
    if args.sample_sizes is not None:
        raw["sample_sizes"] = _ints(args.sample_sizes, "--sample-sizes")
    if args.reps is not None:
        raw["reps"] = args.reps
    if args.grid is not None:
        try:
            raw["grid"] = list(AlphaGrid.parse(args.grid).values)
        except ValueError as e:
            raise UsageError(f"grid: {e}") from None
    if args.oracle:
        raw["oracle"] = True
    if args.seed is not None:
        raw["seed"] = args.seed
    elif "seed" not in raw:
        raw["seed"] = _default_seed()
    try:
        cfg = ExperimentConfig.from_dict(raw)
    except (TypeError, ValueError) as e:
        raise UsageError(f"invalid config: {e}") from None
    jobs = args.jobs if args.jobs is not None else default_jobs()
    if jobs < 1:
        raise UsageError("--jobs must be >= 1")

    t0 = time.perf_counter()
    cells = run_experiment(cfg, jobs=jobs)
    timing = not args.no_timing
    table = results_table(cells) if timing else results_table(cells).split("[Time (s)]")[0]
    try:
        if args.out:
            Path(args.out + ".json").write_text(results_json(cfg, cells, timing) + "\n")
            Path(args.out + ".txt").write_text(table)
            Path(args.out + ".curve.csv").write_text(alpha_curve_csv(cells))
        if args.raw:
            Path(args.raw).write_text(raw_csv(cells, timing))
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    print(table, end="")
    if timing:
        print(f"total wall time: {time.perf_counter() - t0:.1f} s", file=sys.stderr)
    return EXIT_OK


def cmd_metrics(args) -> int:
    try:
        a = read_graph(args.graph_a)
        b = read_graph(args.graph_b)
    except (OSError, GraphFormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    if set(a.names) != set(b.names):
        only_a = sorted(set(a.names) - set(b.names))
        only_b = sorted(set(b.names) - set(a.names))
        print(f"error: vertex sets differ; only in A: {only_a}, only in B: {only_b}", file=sys.stderr)
        return EXIT_DATA
    try:
        b = reorder(b, list(a.names))
    except GraphError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    c = edge_confusion(a, b)
    out = {
        "shd": shd(a, b),
        "normalized_shd": normalized_shd(a, b),
        "f1": f1(c),
        "mcc": mcc(c),
        "confusion": c._asdict(),
    }
    if args.json:
        print(json.dumps(out, sort_keys=True))
    else:
        for key in ("shd", "normalized_shd", "f1", "mcc"):
            v = out[key]
            print(f"{key:<16} {v:.6g}" if isinstance(v, float) else f"{key:<16} {v}")
        print(json.dumps(out, sort_keys=True))
    return EXIT_OK


COMMANDS = {
    "discover": cmd_discover,
    "simulate": cmd_simulate,
    "bench": cmd_bench,
    "metrics": cmd_metrics,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"autopc {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
