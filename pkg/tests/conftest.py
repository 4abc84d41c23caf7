import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from autopc.graph import MixedGraph


def random_dag(rng, d, p=None):
    """DAG on a random vertex order; each forward pair kept with probability p."""
    if p is None:
        p = rng.uniform(0.2, 0.7)
    order = rng.permutation(d)
    edges = [(int(order[a]), int(order[b]))
             for a in range(d) for b in range(a + 1, d) if rng.random() < p]
    return MixedGraph(d, directed=edges)


def random_dags(seed, count, dmin=2, dmax=7):
    rng = np.random.default_rng(seed)
    return [random_dag(rng, int(rng.integers(dmin, dmax + 1))) for _ in range(count)]


def random_pdag(rng, d):
    """Arbitrary PDAG: random skeleton, each edge undirected or pointing forward in a random order."""
    order = rng.permutation(d)
    p = rng.uniform(0.1, 0.8)
    directed, undirected = [], []
    for a in range(d):
        for b in range(a + 1, d):
            if rng.random() < p:
                e = (int(order[a]), int(order[b]))
                (undirected if rng.random() < 0.4 else directed).append(e)
    return MixedGraph(d, directed=directed, undirected=undirected)


@st.composite
def dags(draw, min_d=2, max_d=7):
    d = draw(st.integers(min_d, max_d))
    order = draw(st.permutations(range(d)))
    pairs = [(order[a], order[b]) for a in range(d) for b in range(a + 1, d)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return MixedGraph(d, directed=[e for e, k in zip(pairs, keep) if k])


@st.composite
def pdags(draw, min_d=1, max_d=8):
    d = draw(st.integers(min_d, max_d))
    order = draw(st.permutations(range(d)))
    pairs = [(order[a], order[b]) for a in range(d) for b in range(a + 1, d)]
    states = draw(st.lists(st.sampled_from(["none", "dir", "und"]),
                           min_size=len(pairs), max_size=len(pairs)))
    return MixedGraph(
        d,
        directed=[e for e, s in zip(pairs, states) if s == "dir"],
        undirected=[e for e, s in zip(pairs, states) if s == "und"],
    )


# --- brute-force oracles -------------------------------------------------------


def _descendants(g, v):
    out, stack = {v}, [v]
    while stack:
        u = stack.pop()
        for c in g.children(u):
            if c not in out:
                out.add(c)
                stack.append(c)
    return out


def dsep_by_paths(g, i, j, w):
    """d-separation by enumerating every simple path of the skeleton."""
    w = set(w)
    desc = {v: _descendants(g, v) for v in range(g.num_vertices)}

    def active(path):
        for a, v, b in zip(path, path[1:], path[2:]):
            collider = g.has_directed(a, v) and g.has_directed(b, v)
            if collider:
                if not desc[v] & w:
                    return False
            elif v in w:
                return False
        return True

    def walk(path, seen):
        v = path[-1]
        if v == j:
            return active(path)
        for u in g.neighbors(v):
            if u not in seen:
                if walk(path + [u], seen | {u}):
                    return True
        return False

    return not walk([i], {i})


def all_dags(d):
    """Every labelled DAG on d vertices."""
    pairs = list(itertools.combinations(range(d), 2))
    for states in itertools.product((0, 1, 2), repeat=len(pairs)):
        directed = []
        for (a, b), s in zip(pairs, states):
            if s == 1:
                directed.append((a, b))
            elif s == 2:
                directed.append((b, a))
        g = MixedGraph(d, directed=directed)
        if not g.has_directed_cycle():
            yield g


def orientations(skeleton):
    """All DAGs with the given undirected skeleton."""
    und = skeleton.undirected_edges()
    for flips in itertools.product((False, True), repeat=len(und)):
        g = MixedGraph(skeleton.num_vertices,
                       directed=[(b, a) if f else (a, b) for (a, b), f in zip(und, flips)])
        if not g.has_directed_cycle():
            yield g


def colliders(g):
    out = set()
    for v in range(g.num_vertices):
        for a, b in itertools.combinations(g.parents(v), 2):
            if not g.adjacent(a, b):
                out.add((a, v, b))
    return frozenset(out)


def class_signature(g):
    return (frozenset(g.skeleton().undirected_edges()), colliders(g))


@pytest.fixture
def chain():
    return MixedGraph(3, directed=[(0, 1), (1, 2)])


@pytest.fixture
def collider():
    # X -> Z <- Y with X=0, Y=1, Z=2
    return MixedGraph(3, directed=[(0, 2), (1, 2)])


# --- acceptance report ---------------------------------------------------------

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
