"""Synthetic benchmark: Mean-over-alpha, BIC selection and AutoPC on random SEMs.

Seeding: every (d, n, rep) work unit draws from
``np.random.SeedSequence(seed, spawn_key=(d, n, rep))``, so a single rep can
be rerun in isolation and results never depend on worker count or on the
order of cells in the config.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .graph import GraphError, MixedGraph, dag_to_cpdag
from .independence import Dataset, DSepOracle, FisherZTest
from .metrics import edge_confusion, f1, mcc, shd
from .selection import DEFAULT_GRID, AlphaGrid, RunCache, autopc, metric_registry
from .synth import COEF_HIGH, COEF_LOW, gen_random_dag, sample_sem

METHODS = ("Mean", "BIC", "AutoPC")
EVAL_METRICS = ("SHD", "F1", "MCC")
# which registry metric AutoPC optimises when scored on each evaluation metric
AUTOPC_METRIC_FOR = {"SHD": "nshd", "F1": "f1", "MCC": "mcc"}


class SelectionError(RuntimeError):
    """No alpha on the grid produced a usable model."""


# --- BIC baseline ------------------------------------------------------------


def consistent_extension(g: MixedGraph) -> MixedGraph:
    """DAG in the class of PDAG ``g`` (Dor and Tarsi), or an acyclic fallback.

    The fallback orders undirected edges along a topological order of the
    directed part; it may add colliders but never cycles.
    """
    n = g.num_vertices
    und = [set(g.undirected_neighbors(v)) for v in range(n)]
    pa = [set(g.parents(v)) for v in range(n)]
    ch = [set(g.children(v)) for v in range(n)]
    alive = set(range(n))
    oriented: List[Tuple[int, int]] = list(g.directed_edges())
    while alive:
        for x in sorted(alive):
            if ch[x]:
                continue
            adj_x = und[x] | pa[x]
            if all(adj_x - {y} <= (und[y] | pa[y] | ch[y]) for y in und[x]):
                break
        else:
            return _acyclic_extension(g)
        for y in und[x]:
            oriented.append((y, x))
            und[y].discard(x)
        for p in pa[x]:
            ch[p].discard(x)
        alive.discard(x)
        und[x], pa[x] = set(), set()
    return MixedGraph(n, directed=oriented, names=g.names)


def _acyclic_extension(g: MixedGraph) -> MixedGraph:
    try:
        order = g.topological_order()
    except GraphError:
        raise SelectionError("PDAG has a directed cycle; no extension exists") from None
    pos = {v: k for k, v in enumerate(order)}
    edges = list(g.directed_edges())
    edges += [(a, b) if pos[a] < pos[b] else (b, a) for a, b in g.undirected_edges()]
    return MixedGraph(g.num_vertices, directed=edges, names=g.names)


def bic_score(data: Dataset, dag: MixedGraph) -> float:
    """Gaussian BIC (lower is better) of a DAG fitted by least squares.

    ``sum_i n*ln(RSS_i/n) + ln(n) * (#edges + d)``, each node regressed on its
    parents with an intercept.
    """
    n, cov = data.n, data.cov
    total = 0.0
    for v in range(dag.num_vertices):
        pa = list(dag.parents(v))
        rv = cov[v, v]
        if pa:
            s_pp = cov[np.ix_(pa, pa)]
            s_pv = cov[pa, v]
            rv = rv - s_pv @ np.linalg.solve(s_pp, s_pv)
        rv = max(float(rv), np.finfo(float).tiny)
        total += n * math.log(rv)
    return total + math.log(n) * (dag.num_edges + dag.num_vertices)


def bic_select(data: Dataset, grid: AlphaGrid = AlphaGrid(), cache: Optional[RunCache] = None
               ) -> Tuple[MixedGraph, float]:
    """PC output with the lowest BIC over ``grid``; ties go to the smaller alpha."""
    if not isinstance(grid, AlphaGrid):
        grid = AlphaGrid(tuple(grid))
    cache = cache or RunCache(FisherZTest(data))
    best: Optional[Tuple[float, MixedGraph, float]] = None
    for alpha in grid:
        g, _ = cache.first(alpha)
        try:
            dag = consistent_extension(g)
        except SelectionError:
            continue
        score = bic_score(data, dag)
        if best is None or score < best[0]:
            best = (score, g, alpha)
    if best is None:
        raise SelectionError("no alpha produced an extendable PDAG")
    return best[1], best[2]


# --- experiment harness ------------------------------------------------------


@dataclass
class ExperimentConfig:
    dims: List[int] = field(default_factory=lambda: [10, 20])
    sample_sizes: List[int] = field(default_factory=lambda: [1000, 10000])
    reps: int = 100
    expected_degree: float = 2.0
    coef_range: Tuple[float, float] = (COEF_LOW, COEF_HIGH)
    grid: Tuple[float, ...] = DEFAULT_GRID
    seed: int = 0
    oracle: bool = False

    def __post_init__(self):
        errors = self.validate()
        if errors:
            raise ValueError("; ".join(errors))

    def validate(self) -> List[str]:
        errs = []
        if self.reps < 1:
            errs.append("reps: must be >= 1")
        if not self.dims:
            errs.append("dims: must be non-empty")
        for d in self.dims:
            if d < 2:
                errs.append(f"dims: {d} < 2")
            elif not 0 < self.expected_degree < d:
                errs.append(f"expected_degree: must lie in (0, {d}) for d={d}")
        if not self.sample_sizes or any(n < 10 for n in self.sample_sizes):
            errs.append("sample_sizes: need values >= 10")
        lo, hi = self.coef_range
        if not 0 < lo <= hi:
            errs.append("coef_range: need 0 < low <= high")
        try:
            AlphaGrid(tuple(self.grid))
        except ValueError as e:
            errs.append(f"grid: {e}")
        return errs

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config fields: {', '.join(sorted(unknown))}")
        kw = dict(raw)
        if "coef_range" in kw:
            kw["coef_range"] = tuple(kw["coef_range"])
        if "grid" in kw:
            kw["grid"] = tuple(kw["grid"])
        return cls(**kw)

    def cells(self) -> List[Tuple[int, int]]:
        return [(d, n) for n in self.sample_sizes for d in self.dims]


@dataclass
class RepRecord:
    d: int
    n: int
    rep: int
    values: Dict[str, Dict[str, float]]      # method -> metric -> value
    times: Dict[str, float]                  # method -> seconds
    chosen_alpha: Dict[str, float]           # "BIC" / "AutoPC:SHD" ... -> alpha
    per_alpha: Dict[float, Dict[str, float]]  # alpha -> metric -> value of plain PC
    autopc_early_break: Dict[str, bool]
    autopc_full_time: float
    error: Optional[str] = None


def _eval(g: MixedGraph, truth: MixedGraph) -> Dict[str, float]:
    c = edge_confusion(g, truth)
    return {"SHD": float(shd(g, truth)), "F1": f1(c), "MCC": mcc(c)}


def rep_rng(seed: int, d: int, n: int, rep: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(d, n, rep)))


def run_rep(cfg: ExperimentConfig, d: int, n: int, rep: int) -> RepRecord:
    """One synthetic dataset evaluated by every method."""
    rng = rep_rng(cfg.seed, d, n, rep)
    wdag = gen_random_dag(d, cfg.expected_degree, rng, cfg.coef_range)
    data = sample_sem(wdag, n, rng)
    truth = dag_to_cpdag(wdag.structure)
    grid = AlphaGrid(tuple(cfg.grid))
    test = DSepOracle(wdag.structure) if cfg.oracle else FisherZTest(data)
    cache = RunCache(test)

    per_alpha = {}
    pc_time = 0.0
    for alpha in grid:
        g, st = cache.first(alpha)
        per_alpha[alpha] = _eval(g, truth)
        pc_time += st.wall_time
    values = {"Mean": {m: float(np.mean([per_alpha[a][m] for a in grid])) for m in EVAL_METRICS}}
    times = {"Mean": pc_time}
    chosen: Dict[str, float] = {}

    t0 = time.perf_counter()
    g_bic, a_bic = bic_select(data, grid, cache)
    times["BIC"] = pc_time + time.perf_counter() - t0
    values["BIC"] = _eval(g_bic, truth)
    chosen["BIC"] = a_bic

    values["AutoPC"] = {}
    breaks = {}
    auto_time = 0.0
    for m in EVAL_METRICS:
        res = autopc(test, grid, metric_registry(AUTOPC_METRIC_FOR[m]), cache=cache)
        values["AutoPC"][m] = _eval(res.chosen_graph, truth)[m]
        chosen[f"AutoPC:{m}"] = res.chosen_alpha
        breaks[m] = res.early_break
        if m == "SHD":
            auto_time = res.wall_time
    times["AutoPC"] = auto_time
    full = sum(cache.first(a)[1].wall_time + cache.second(a)[1].wall_time for a in grid)
    return RepRecord(d, n, rep, values, times, chosen, per_alpha, breaks, full)


def _run_rep_safe(args) -> RepRecord:
    cfg, d, n, rep = args
    try:
        return run_rep(cfg, d, n, rep)
    except Exception as e:  # recorded and excluded from aggregates
        return RepRecord(d, n, rep, {}, {}, {}, {}, {}, 0.0, error=f"{type(e).__name__}: {e}")


@dataclass
class CellResult:
    d: int
    n: int
    reps: int
    excluded: int
    mean: Dict[str, Dict[str, float]]
    std: Dict[str, Dict[str, float]]
    time_mean: Dict[str, float]
    autopc_time_delta: float  # mean AutoPC time minus mean full double-run sweep
    alpha_curve: Dict[str, Dict[str, float]]  # str(alpha) -> metric -> mean
    records: List[RepRecord] = field(repr=False, default_factory=list)

    def to_dict(self) -> dict:
        return {
            "d": self.d, "n": self.n, "reps": self.reps, "excluded": self.excluded,
            "mean": self.mean, "std": self.std, "time_mean": self.time_mean,
            "autopc_time_delta": self.autopc_time_delta, "alpha_curve": self.alpha_curve,
        }


def _aggregate(d: int, n: int, recs: List[RepRecord], grid: Sequence[float]) -> CellResult:
    ok = [r for r in recs if r.error is None]
    mean: Dict[str, Dict[str, float]] = {}
    std: Dict[str, Dict[str, float]] = {}
    for meth in METHODS:
        mean[meth], std[meth] = {}, {}
        for m in EVAL_METRICS:
            v = np.array([r.values[meth][m] for r in ok]) if ok else np.array([np.nan])
            mean[meth][m] = float(v.mean())
            std[meth][m] = float(v.std(ddof=1)) if len(v) > 1 else 0.0
    time_mean = {meth: float(np.mean([r.times[meth] for r in ok])) if ok else math.nan
                 for meth in METHODS}
    delta = float(np.mean([r.times["AutoPC"] - r.autopc_full_time for r in ok])) if ok else math.nan
    curve = {
        repr(a): {m: float(np.mean([r.per_alpha[a][m] for r in ok])) if ok else math.nan
                  for m in EVAL_METRICS}
        for a in grid
    }
    return CellResult(d, n, len(ok), len(recs) - len(ok), mean, std, time_mean, delta, curve, recs)


def run_experiment(cfg: ExperimentConfig, jobs: int = 1) -> List[CellResult]:
    """Evaluate every (d, n) cell; output values do not depend on ``jobs``."""
    units = [(cfg, d, n, rep) for d, n in cfg.cells() for rep in range(cfg.reps)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            recs = list(pool.map(_run_rep_safe, units, chunksize=max(1, len(units) // (8 * jobs))))
    else:
        recs = [_run_rep_safe(u) for u in units]
    by_cell: Dict[Tuple[int, int], List[RepRecord]] = {}
    for r in recs:
        by_cell.setdefault((r.d, r.n), []).append(r)
    out = []
    for d, n in cfg.cells():
        cell = sorted(by_cell[(d, n)], key=lambda r: r.rep)
        out.append(_aggregate(d, n, cell, cfg.grid))
    return out


# --- output ------------------------------------------------------------------


def results_json(cfg: ExperimentConfig, cells: List[CellResult], timing: bool = True) -> str:
    def scrub(c: CellResult) -> dict:
        out = c.to_dict()
        if not timing:
            out.pop("time_mean")
            out.pop("autopc_time_delta")
        return out

    cfg_d = asdict(cfg)
    return json.dumps({"config": cfg_d, "cells": [scrub(c) for c in cells]}, indent=2, sort_keys=True)


def results_table(cells: List[CellResult]) -> str:
    """Aligned text table with one block per metric."""
    lines = []
    for m in EVAL_METRICS:
        lines.append(f"[{m}]")
        lines.append(f"{'n':>8} {'d':>4} " + " ".join(f"{meth:>10}" for meth in METHODS))
        for c in cells:
            lines.append(f"{c.n:>8} {c.d:>4} " + " ".join(f"{c.mean[meth][m]:>10.3f}" for meth in METHODS))
        lines.append("")
    lines.append("[Time (s)]")
    lines.append(f"{'n':>8} {'d':>4} " + " ".join(f"{meth:>10}" for meth in METHODS) + f" {'AutoPC-full':>12}")
    for c in cells:
        lines.append(f"{c.n:>8} {c.d:>4} " + " ".join(f"{c.time_mean[meth]:>10.4f}" for meth in METHODS)
                     + f" {c.autopc_time_delta:>12.4f}")
    return "\n".join(lines) + "\n"


RAW_COLUMNS = ("cell", "rep", "method", "metric", "value", "time_ms", "chosen_alpha")


def raw_csv(cells: List[CellResult], timing: bool = True) -> str:
    """Per-rep records; ``time_ms`` is left blank when ``timing`` is False.

    Besides Mean/BIC/AutoPC rows, one ``PC`` row per grid alpha carries the
    plain-PC value with that alpha in ``chosen_alpha`` (the per-alpha curve).
    """
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(RAW_COLUMNS)
    for c in cells:
        cell = f"d{c.d}_n{c.n}"
        for r in c.records:
            if r.error is not None:
                wr.writerow([cell, r.rep, "ERROR", "", r.error, "", ""])
                continue
            for meth in METHODS:
                t = f"{1000 * r.times[meth]:.3f}" if timing else ""
                for m in EVAL_METRICS:
                    if meth == "BIC":
                        a = r.chosen_alpha["BIC"]
                    elif meth == "AutoPC":
                        a = r.chosen_alpha[f"AutoPC:{m}"]
                    else:
                        a = ""
                    wr.writerow([cell, r.rep, meth, m, repr(r.values[meth][m]), t, a])
            for a, vals in r.per_alpha.items():
                for m in EVAL_METRICS:
                    wr.writerow([cell, r.rep, "PC", m, repr(vals[m]), "", a])
    return buf.getvalue()


def alpha_curve_csv(cells: List[CellResult]) -> str:
    """Mean plain-PC metric per alpha next to the AutoPC mean, per cell."""
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(("cell", "alpha", "metric", "pc_mean", "autopc_mean"))
    for c in cells:
        for a, vals in c.alpha_curve.items():
            for m in EVAL_METRICS:
                wr.writerow([f"d{c.d}_n{c.n}", a, m, repr(vals[m]), repr(c.mean["AutoPC"][m])])
    return buf.getvalue()


def default_jobs() -> int:
    return os.cpu_count() or 1
