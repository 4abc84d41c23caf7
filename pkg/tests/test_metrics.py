import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from autopc.graph import MixedGraph
from autopc.metrics import EdgeConfusion, edge_confusion, f1, mcc, normalized_shd, shd
from conftest import pdags, random_pdag

X, Y = 0, 1


def test_shd_unit_costs():
    xy = MixedGraph(2, directed=[(X, Y)])
    assert shd(xy, xy) == 0
    assert shd(xy, MixedGraph(2)) == 1
    assert shd(xy, MixedGraph(2, undirected=[(X, Y)])) == 1
    assert shd(xy, MixedGraph(2, directed=[(Y, X)])) == 1


def test_shd_chain_vs_collider():
    chain = MixedGraph(3, directed=[(0, 1), (1, 2)])
    coll = MixedGraph(3, directed=[(0, 1), (2, 1)])
    assert shd(chain, coll) == 1
    assert shd(MixedGraph(3, undirected=[(0, 1), (1, 2)]), coll) == 2


def test_size_mismatch():
    with pytest.raises(ValueError):
        shd(MixedGraph(2), MixedGraph(3))
    with pytest.raises(ValueError):
        edge_confusion(MixedGraph(2), MixedGraph(3))


def test_confusion_examples():
    k4 = MixedGraph.complete(4)
    assert edge_confusion(k4, k4) == EdgeConfusion(6, 0, 0, 0)
    assert edge_confusion(MixedGraph(3), MixedGraph(3, directed=[(0, 1)])) == EdgeConfusion(0, 0, 1, 2)


def test_confusion_matches_pairwise_tally():
    rng = np.random.default_rng(0)
    for _ in range(50):
        a, b = random_pdag(rng, 6), random_pdag(rng, 6)
        tally = {"tp": 0, "fp": 0, "fn": 0, "tn": 0}
        for i, j in itertools.combinations(range(6), 2):
            key = {(True, True): "tp", (True, False): "fp",
                   (False, True): "fn", (False, False): "tn"}[(a.adjacent(i, j), b.adjacent(i, j))]
            tally[key] += 1
        assert edge_confusion(a, b)._asdict() == tally


def test_f1_examples():
    assert f1(EdgeConfusion(6, 0, 0, 0)) == 1.0
    assert f1(EdgeConfusion(0, 2, 1, 3)) == 0.0
    assert f1(EdgeConfusion(3, 1, 2, 0)) == pytest.approx(2 / 3)
    assert f1(EdgeConfusion(0, 0, 0, 10)) == 1.0


def test_mcc_examples():
    assert mcc(EdgeConfusion(3, 0, 0, 4)) == pytest.approx(1.0)
    assert mcc(EdgeConfusion(6, 0, 0, 0)) == 0.0
    assert mcc(EdgeConfusion(2, 1, 1, 2)) == pytest.approx(1 / 3)


def test_normalized_shd_extremes():
    assert normalized_shd(MixedGraph.complete(5), MixedGraph(5)) == 0.0
    assert normalized_shd(MixedGraph(1), MixedGraph(1)) == 1.0


@given(pdags(), st.data())
@settings(max_examples=200, deadline=None)
def test_shd_metric_axioms(a, data):
    d = a.num_vertices
    b = data.draw(pdags(min_d=d, max_d=d))
    c = data.draw(pdags(min_d=d, max_d=d))
    assert shd(a, b) == shd(b, a)
    assert (shd(a, b) == 0) == (a == b)
    assert shd(a, c) <= shd(a, b) + shd(b, c)
    assert 0 <= shd(a, b) <= d * (d - 1) // 2
    conf = edge_confusion(a, b)
    assert conf.total == d * (d - 1) // 2
    assert 0 <= f1(conf) <= 1
    assert -1 <= mcc(conf) <= 1
