"""The PC algorithm: order-independent skeleton search, collider orientation
and Meek propagation, plus the restricted second run used by AutoPC."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import List, Optional, Sequence, Set, Tuple

from .graph import MixedGraph, SepsetMap, apply_meek_rules, orient_colliders, parents_in_pdag
from .independence import CiTest, SampleSizeError


@dataclass(frozen=True)
class PcConfig:
    alpha: float
    max_cond_size: Optional[int] = None

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.max_cond_size is not None and self.max_cond_size < 0:
            raise ValueError("max_cond_size must be non-negative")


@dataclass
class PcRunStats:
    ci_tests_performed: int = 0
    max_level_reached: int = -1
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        return {
            "ci_tests": self.ci_tests_performed,
            "max_level": self.max_level_reached,
            "wall_time": self.wall_time,
        }


def _skeleton(test: CiTest, d: int, cfg: PcConfig, allowed: Optional[Sequence[Set[int]]]):
    t0 = time.perf_counter()
    calls0 = test.call_count
    adj: List[Set[int]] = [set(range(d)) - {v} for v in range(d)]
    sepsets = SepsetMap()
    stats = PcRunStats()
    level = 0
    while cfg.max_cond_size is None or level <= cfg.max_cond_size:
        # adjacencies are frozen for the whole level (PC-stable)
        frozen = [sorted(a) for a in adj]
        qualified = False
        for i in range(d):
            for j in frozen[i]:
                pool = [k for k in frozen[i] if k != j and (allowed is None or k in allowed[i])]
                if j not in adj[i] or len(pool) < level:
                    continue
                qualified = True
                for w in itertools.combinations(pool, level):
                    try:
                        p = test.test(i, j, w)
                    except SampleSizeError:
                        continue
                    if p > cfg.alpha:
                        adj[i].discard(j)
                        adj[j].discard(i)
                        sepsets[(i, j)] = w
                        break
        if not qualified:
            break
        stats.max_level_reached = level
        level += 1
    skel = MixedGraph(d, undirected=[(i, j) for i in range(d) for j in adj[i] if i < j])
    stats.ci_tests_performed = test.call_count - calls0
    stats.wall_time = time.perf_counter() - t0
    return skel, sepsets, stats


def skeleton_stable(test: CiTest, cfg: PcConfig, d: Optional[int] = None
                    ) -> Tuple[MixedGraph, SepsetMap, PcRunStats]:
    """Skeleton discovery with adjacency sets frozen at the start of each level.

    Both orderings ``(i, j)`` and ``(j, i)`` of an adjacent pair are visited.
    Conditioning sets of size ``l`` are drawn from ``Adj(i) minus j`` in
    lexicographic order; the edge goes as soon as a test yields ``p > alpha``
    and that set is recorded as the separating set.
    """
    d = test.num_vars if d is None else d
    if d < 2:
        raise ValueError("need at least two variables")
    return _skeleton(test, d, cfg, None)


def skeleton_restricted(test: CiTest, cfg: PcConfig, prior: MixedGraph
                        ) -> Tuple[MixedGraph, SepsetMap, PcRunStats]:
    """As :func:`skeleton_stable` but conditioning only on ``Adj(i)`` that are
    also parents (directed into ``i`` or undirected) of ``i`` in ``prior``."""
    d = prior.num_vertices
    if d != test.num_vars:
        raise ValueError("prior and test disagree on the number of variables")
    allowed = [parents_in_pdag(prior, v) for v in range(d)]
    return _skeleton(test, d, cfg, allowed)


def _orient(skel: MixedGraph, sepsets: SepsetMap, stats: PcRunStats, t0: float):
    g = apply_meek_rules(orient_colliders(skel, sepsets))
    stats.wall_time += time.perf_counter() - t0
    return g, stats


def run_pc(test: CiTest, cfg: PcConfig, names=None) -> Tuple[MixedGraph, PcRunStats]:
    skel, sepsets, stats = skeleton_stable(test, cfg)
    g, stats = _orient(skel, sepsets, stats, time.perf_counter())
    return (g.with_names(names) if names else g), stats


def run_pc_restricted(test: CiTest, cfg: PcConfig, prior: MixedGraph,
                      names=None) -> Tuple[MixedGraph, PcRunStats]:
    skel, sepsets, stats = skeleton_restricted(test, cfg, prior)
    g, stats = _orient(skel, sepsets, stats, time.perf_counter())
    return (g.with_names(names) if names else g), stats
