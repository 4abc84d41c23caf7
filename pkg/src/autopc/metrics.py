"""Comparison metrics between two PDAGs over the same vertex set.

SHD sees orientation: every unordered pair whose edge state differs costs one,
whether the mismatch is a missing edge, a reversed arrow or an arrow against
an undirected edge. F1 and MCC are computed on adjacencies only (positives are
present edges, orientation is ignored).
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .graph import MixedGraph


class EdgeConfusion(NamedTuple):
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


def _same_size(a: MixedGraph, b: MixedGraph) -> int:
    if a.num_vertices != b.num_vertices:
        raise ValueError(f"vertex counts differ: {a.num_vertices} vs {b.num_vertices}")
    return a.num_vertices


def num_pairs(d: int) -> int:
    return d * (d - 1) // 2


def shd(a: MixedGraph, b: MixedGraph) -> int:
    """Structural Hamming distance with unit cost per mismatched pair."""
    _same_size(a, b)
    ea, eb = a.edge_dict(), b.edge_dict()
    return sum(1 for k in ea.keys() | eb.keys() if ea.get(k) != eb.get(k))


def normalized_shd(a: MixedGraph, b: MixedGraph) -> float:
    """``1 - shd / (d(d-1)/2)``, in [0, 1]."""
    m = num_pairs(_same_size(a, b))
    if m == 0:
        return 1.0
    return 1.0 - shd(a, b) / m


def edge_confusion(pred: MixedGraph, truth: MixedGraph) -> EdgeConfusion:
    d = _same_size(pred, truth)
    p, t = set(pred.edge_dict()), set(truth.edge_dict())
    tp = len(p & t)
    fp = len(p - t)
    fn = len(t - p)
    return EdgeConfusion(tp, fp, fn, num_pairs(d) - tp - fp - fn)


def f1(c: EdgeConfusion) -> float:
    """F1 score; 1 when both graphs are empty."""
    denom = 2 * c.tp + c.fp + c.fn
    if denom == 0:
        return 1.0
    return 2 * c.tp / denom


def mcc(c: EdgeConfusion) -> float:
    """Matthews correlation coefficient, 0 when any marginal is empty."""
    tp, fp, fn, tn = c
    prod = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    if prod == 0:
        return 0.0
    return (tp * tn - fp * fn) / math.sqrt(prod)
