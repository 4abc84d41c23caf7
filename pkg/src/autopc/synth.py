"""Random linear-Gaussian structural equation models."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .graph import MixedGraph
from .independence import Dataset

COEF_LOW, COEF_HIGH = 0.3, 1.3


@dataclass(frozen=True)
class WeightedDag:
    structure: MixedGraph
    weights: Dict[Tuple[int, int], float]

    def __post_init__(self):
        if not self.structure.is_dag():
            raise ValueError("structure must be a DAG")
        if set(self.weights) != set(self.structure.directed_edges()):
            raise ValueError("weights must cover exactly the directed edges")

    @property
    def d(self) -> int:
        return self.structure.num_vertices

    def weight_matrix(self) -> np.ndarray:
        """``B[parent, child]`` coefficient matrix."""
        b = np.zeros((self.d, self.d))
        for (t, h), w in self.weights.items():
            b[t, h] = w
        return b


def gen_random_dag(d: int, expected_degree: float, rng: np.random.Generator,
                   coef_range: Tuple[float, float] = (COEF_LOW, COEF_HIGH)) -> WeightedDag:
    """Erdos-Renyi DAG over a random topological order.

    Each of the ``d(d-1)/2`` forward pairs becomes an edge with probability
    ``expected_degree / (d - 1)``, so the expected number of neighbours per
    vertex is ``expected_degree``. Weights are uniform on
    ``[-high, -low] U [low, high]``.
    """
    if d < 2:
        raise ValueError("need d >= 2")
    if not 0 <= expected_degree <= d - 1:
        raise ValueError(f"expected_degree must lie in [0, {d - 1}], got {expected_degree}")
    lo, hi = coef_range
    if not 0 < lo <= hi:
        raise ValueError("coefficient range must satisfy 0 < low <= high")
    prob = expected_degree / (d - 1)
    order = rng.permutation(d)
    pairs = [(int(order[a]), int(order[b])) for a in range(d) for b in range(a + 1, d)]
    keep = rng.random(len(pairs)) < prob
    edges = [e for e, k in zip(pairs, keep) if k]
    mags = rng.uniform(lo, hi, size=len(edges))
    signs = np.where(rng.random(len(edges)) < 0.5, -1.0, 1.0)
    weights = {e: float(s * m) for e, s, m in zip(edges, signs, mags)}
    return WeightedDag(MixedGraph(d, directed=edges), weights)


def sample_sem(g: WeightedDag, n: int, rng: np.random.Generator) -> Dataset:
    """Draw ``n`` rows of ``X_v = sum_u B[u, v] X_u + e_v`` with ``e_v ~ N(0, 1)``."""
    if n < 2:
        # a Dataset needs two rows to define a correlation matrix
        raise ValueError(f"n must be at least 2, got {n}")
    d = g.d
    noise = rng.standard_normal((n, d))
    b = g.weight_matrix()
    x = np.zeros((n, d))
    for v in g.structure.topological_order():
        pa = g.structure.parents(v)
        x[:, v] = noise[:, v]
        if pa:
            x[:, v] += x[:, list(pa)] @ b[list(pa), v]
    return Dataset(x, g.structure.names)
