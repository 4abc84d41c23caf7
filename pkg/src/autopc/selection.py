"""AutoPC: choose PC's significance level by agreement between two runs.

For every alpha on an ascending grid, PC runs once normally and once more with
conditioning sets restricted to the first output's parents. The first-run
graph whose two runs agree best under a bounded metric is returned.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .graph import MixedGraph
from .independence import CiTest
from .metrics import edge_confusion, f1, mcc, normalized_shd
from .pc import PcConfig, PcRunStats, run_pc, run_pc_restricted

DEFAULT_GRID = (0.0005, 0.001, 0.005, 0.01, 0.05, 0.1)
PERFECT_TOL = 1e-12

MetricFn = Callable[[MixedGraph, MixedGraph], float]


class MetricContractError(ValueError):
    """A metric returned a value outside [0, 1]."""


@dataclass(frozen=True)
class AlphaGrid:
    values: Tuple[float, ...] = DEFAULT_GRID

    def __post_init__(self):
        vals = tuple(float(a) for a in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise ValueError("alpha grid is empty")
        for a in vals:
            if not 0 < a < 1:
                raise ValueError(f"alpha {a} outside (0, 1)")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("alpha grid must be strictly increasing")

    @classmethod
    def parse(cls, text: str) -> "AlphaGrid":
        """Parse a comma-separated list such as ``"0.01,0.05"``."""
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if not parts:
            raise ValueError("alpha grid is empty")
        return cls(tuple(float(p) for p in parts))

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


def _rescaled_mcc(a: MixedGraph, b: MixedGraph) -> float:
    c = edge_confusion(a, b)
    if c.fp == 0 and c.fn == 0:
        return 1.0
    return (mcc(c) + 1.0) / 2.0


def _f1(a: MixedGraph, b: MixedGraph) -> float:
    return f1(edge_confusion(a, b))


METRICS: Dict[str, MetricFn] = {
    "nshd": normalized_shd,
    "f1": _f1,
    "mcc": _rescaled_mcc,
}


def metric_registry(name: str) -> MetricFn:
    """Bounded agreement metric by name: ``nshd``, ``f1`` or ``mcc``."""
    try:
        return METRICS[name]
    except KeyError:
        raise ValueError(
            f"unknown metric {name!r}; choose one of {', '.join(sorted(METRICS))}"
        ) from None


@dataclass
class TraceEntry:
    alpha: float
    score: float
    stats_first: PcRunStats
    stats_second: PcRunStats
    graph_first: MixedGraph = field(repr=False)
    graph_second: MixedGraph = field(repr=False)

    def to_dict(self) -> dict:
        def summary(g: MixedGraph) -> dict:
            return {
                "edges": g.num_edges,
                "directed": len(g.directed_edges()),
                "undirected": len(g.undirected_edges()),
            }

        return {
            "alpha": self.alpha,
            "score": self.score,
            "first": {**self.stats_first.to_dict(), **summary(self.graph_first)},
            "second": {**self.stats_second.to_dict(), **summary(self.graph_second)},
        }


@dataclass
class SelectionResult:
    chosen_graph: MixedGraph
    chosen_alpha: float
    best_score: float
    trace: List[TraceEntry]
    early_break: bool

    @property
    def ci_tests(self) -> int:
        return sum(e.stats_first.ci_tests_performed + e.stats_second.ci_tests_performed
                   for e in self.trace)

    @property
    def wall_time(self) -> float:
        return sum(e.stats_first.wall_time + e.stats_second.wall_time for e in self.trace)

    def to_dict(self) -> dict:
        return {
            "chosen_alpha": self.chosen_alpha,
            "best_score": self.best_score,
            "early_break": self.early_break,
            "ci_tests": self.ci_tests,
            "trace": [e.to_dict() for e in self.trace],
        }


class RunCache:
    """Memoizes first and restricted PC runs per alpha for one CI test.

    Lets several metrics (and the Mean/BIC baselines) share PC outputs on the
    same dataset without rerunning them.
    """

    def __init__(self, test: CiTest, names=None):
        self.test = test
        self.names = names
        self._first: Dict[float, Tuple[MixedGraph, PcRunStats]] = {}
        self._second: Dict[float, Tuple[MixedGraph, PcRunStats]] = {}

    def first(self, alpha: float) -> Tuple[MixedGraph, PcRunStats]:
        if alpha not in self._first:
            self._first[alpha] = run_pc(self.test, PcConfig(alpha), self.names)
        return self._first[alpha]

    def second(self, alpha: float) -> Tuple[MixedGraph, PcRunStats]:
        if alpha not in self._second:
            prior, _ = self.first(alpha)
            self._second[alpha] = run_pc_restricted(self.test, PcConfig(alpha), prior, self.names)
        return self._second[alpha]


def _score(metric: MetricFn, a: MixedGraph, b: MixedGraph) -> float:
    s = float(metric(a, b))
    if not (0.0 <= s <= 1.0) or math.isnan(s):
        raise MetricContractError(f"metric returned {s}, outside [0, 1]")
    return s


def _evaluate(cache: RunCache, alpha: float, metric: MetricFn) -> TraceEntry:
    g1, s1 = cache.first(alpha)
    g2, s2 = cache.second(alpha)
    return TraceEntry(alpha, _score(metric, g1, g2), s1, s2, g1, g2)


def _reduce(trace: Sequence[TraceEntry]) -> Tuple[TraceEntry, float]:
    best, eta = trace[0], trace[0].score
    for e in trace[1:]:
        if e.score > eta:
            best, eta = e, e.score
    return best, eta


def autopc(
    test: CiTest,
    grid: AlphaGrid = AlphaGrid(),
    metric: MetricFn | str = "nshd",
    *,
    early_break: bool = True,
    jobs: int = 1,
    cache: Optional[RunCache] = None,
    names=None,
) -> SelectionResult:
    """Run AutoPC over ``grid`` and return the selected first-run PDAG.

    ``jobs > 1`` evaluates every alpha concurrently (each on a spawned copy of
    ``test``) and then reduces with the same strict ``>`` rule, so the choice
    matches the sequential result while the trace covers the whole grid.
    """
    if not isinstance(grid, AlphaGrid):
        grid = AlphaGrid(tuple(grid))
    if isinstance(metric, str):
        metric = metric_registry(metric)

    if jobs > 1:
        def one(alpha):
            return _evaluate(RunCache(test.spawn(), names), alpha, metric)

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            trace = list(pool.map(one, grid.values))
        best, eta = _reduce(trace)
        return SelectionResult(best.graph_first, best.alpha, eta, trace, early_break=False)

    cache = cache if cache is not None else RunCache(test, names)
    trace: List[TraceEntry] = []
    best: Optional[TraceEntry] = None
    eta = -math.inf
    broke = False
    for alpha in grid.values:
        e = _evaluate(cache, alpha, metric)
        trace.append(e)
        if e.score > eta:
            best, eta = e, e.score
            if early_break and eta >= 1.0 - PERFECT_TOL:
                broke = True
                break
    return SelectionResult(best.graph_first, best.alpha, eta, trace, broke)
