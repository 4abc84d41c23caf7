"""Mixed graphs (DAGs, PDAGs, CPDAGs) and the orientation machinery used by PC.

Vertices are the integers ``0..d-1``. Every unordered pair carries at most one
edge state, stored under the key ``(lo, hi)`` with ``lo < hi``.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

Pair = Tuple[int, int]


class GraphError(ValueError):
    """Invalid vertex, malformed edge set or a violated DAG/PDAG precondition."""


class SepsetError(GraphError):
    """A removed pair has no recorded separating set."""


class Edge(enum.IntEnum):
    """Edge state of the pair ``(lo, hi)``."""

    UNDIRECTED = 0
    FORWARD = 1  # lo -> hi
    BACKWARD = 2  # hi -> lo


def _key(i: int, j: int) -> Pair:
    return (i, j) if i < j else (j, i)


class MixedGraph:
    """Immutable graph with directed and undirected edges.

    Parameters
    ----------
    num_vertices : int
        Number of vertices ``d``.
    directed : iterable of (tail, head)
    undirected : iterable of (i, j)
    names : sequence of str, optional
        Vertex labels; defaults to ``X1..Xd``. Labels do not take part in
        equality.
    """

    __slots__ = ("num_vertices", "names", "_edges", "_nbrs", "_hash")

    def __init__(
        self,
        num_vertices: int,
        directed: Iterable[Pair] = (),
        undirected: Iterable[Pair] = (),
        names: Optional[Sequence[str]] = None,
    ):
        if num_vertices < 1:
            raise GraphError("a graph needs at least one vertex")
        edges: Dict[Pair, Edge] = {}
        for kind, seq in ((None, undirected), (True, directed)):
            for i, j in seq:
                i, j = int(i), int(j)
                if not (0 <= i < num_vertices and 0 <= j < num_vertices):
                    raise GraphError(f"vertex out of range in edge ({i}, {j})")
                if i == j:
                    raise GraphError(f"self-loop on vertex {i}")
                k = _key(i, j)
                if k in edges:
                    raise GraphError(f"multiple edges between {k[0]} and {k[1]}")
                if kind is None:
                    edges[k] = Edge.UNDIRECTED
                else:
                    edges[k] = Edge.FORWARD if i < j else Edge.BACKWARD
        self._init(num_vertices, edges, names)

    def _init(self, n: int, edges: Dict[Pair, Edge], names) -> None:
        self.num_vertices = n
        if names is None:
            names = tuple(f"X{v + 1}" for v in range(n))
        else:
            names = tuple(str(s) for s in names)
            if len(names) != n:
                raise GraphError(f"expected {n} vertex names, got {len(names)}")
            if len(set(names)) != n:
                raise GraphError("vertex names must be unique")
        self.names = names
        self._edges = edges
        nbrs: List[Set[int]] = [set() for _ in range(n)]
        for i, j in edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        self._nbrs = nbrs
        self._hash = None

    @classmethod
    def _from_dict(cls, n: int, edges: Dict[Pair, Edge], names=None) -> "MixedGraph":
        g = cls.__new__(cls)
        g._init(n, edges, names)
        return g

    @classmethod
    def empty(cls, n: int, names=None) -> "MixedGraph":
        return cls(n, names=names)

    @classmethod
    def complete(cls, n: int, names=None) -> "MixedGraph":
        return cls(n, undirected=itertools.combinations(range(n), 2), names=names)

    # --- queries -------------------------------------------------------------

    def _check(self, v: int) -> None:
        if not 0 <= v < self.num_vertices:
            raise GraphError(f"invalid vertex index {v}")

    def edge(self, i: int, j: int) -> Optional[Edge]:
        """Raw state of the unordered pair, or None if absent."""
        return self._edges.get(_key(i, j))

    def adjacent(self, i: int, j: int) -> bool:
        return _key(i, j) in self._edges

    def has_directed(self, tail: int, head: int) -> bool:
        e = self._edges.get(_key(tail, head))
        if e is None or e is Edge.UNDIRECTED:
            return False
        return (e is Edge.FORWARD) == (tail < head)

    def has_undirected(self, i: int, j: int) -> bool:
        return self._edges.get(_key(i, j)) is Edge.UNDIRECTED

    def neighbors(self, v: int) -> Tuple[int, ...]:
        self._check(v)
        return tuple(sorted(self._nbrs[v]))

    def parents(self, v: int) -> Tuple[int, ...]:
        return tuple(u for u in self.neighbors(v) if self.has_directed(u, v))

    def children(self, v: int) -> Tuple[int, ...]:
        return tuple(u for u in self.neighbors(v) if self.has_directed(v, u))

    def undirected_neighbors(self, v: int) -> Tuple[int, ...]:
        return tuple(u for u in self.neighbors(v) if self.has_undirected(u, v))

    def degree(self, v: int) -> int:
        return len(self._nbrs[v])

    def items(self) -> Iterator[Tuple[Pair, Edge]]:
        """Edge states in lexicographic pair order."""
        for k in sorted(self._edges):
            yield k, self._edges[k]

    def directed_edges(self) -> List[Pair]:
        return [
            (i, j) if e is Edge.FORWARD else (j, i)
            for (i, j), e in self.items()
            if e is not Edge.UNDIRECTED
        ]

    def undirected_edges(self) -> List[Pair]:
        return [k for k, e in self.items() if e is Edge.UNDIRECTED]

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def skeleton(self) -> "MixedGraph":
        return MixedGraph._from_dict(
            self.num_vertices, {k: Edge.UNDIRECTED for k in self._edges}, self.names
        )

    def has_directed_cycle(self) -> bool:
        """True if the directed edges alone contain a cycle."""
        n = self.num_vertices
        indeg = [0] * n
        out: List[List[int]] = [[] for _ in range(n)]
        for t, h in self.directed_edges():
            out[t].append(h)
            indeg[h] += 1
        queue = deque(v for v in range(n) if indeg[v] == 0)
        seen = 0
        while queue:
            v = queue.popleft()
            seen += 1
            for h in out[v]:
                indeg[h] -= 1
                if indeg[h] == 0:
                    queue.append(h)
        return seen < n

    def is_dag(self) -> bool:
        return not self.undirected_edges() and not self.has_directed_cycle()

    def is_pdag(self) -> bool:
        return not self.has_directed_cycle()

    def topological_order(self) -> List[int]:
        """Kahn order over directed edges, smallest index first among ties."""
        import heapq

        n = self.num_vertices
        indeg = [0] * n
        out: List[List[int]] = [[] for _ in range(n)]
        for t, h in self.directed_edges():
            out[t].append(h)
            indeg[h] += 1
        heap = [v for v in range(n) if indeg[v] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for h in out[v]:
                indeg[h] -= 1
                if indeg[h] == 0:
                    heapq.heappush(heap, h)
        if len(order) < n:
            raise GraphError("directed edges contain a cycle")
        return order

    def with_names(self, names: Sequence[str]) -> "MixedGraph":
        return MixedGraph._from_dict(self.num_vertices, dict(self._edges), names)

    def edge_dict(self) -> Dict[Pair, Edge]:
        """A copy of the internal pair -> state map."""
        return dict(self._edges)

    # --- value semantics -----------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return self.num_vertices == other.num_vertices and self._edges == other._edges

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num_vertices, frozenset(self._edges.items())))
        return self._hash

    def __repr__(self) -> str:
        parts = []
        for (i, j), e in self.items():
            a, b = self.names[i], self.names[j]
            if e is Edge.UNDIRECTED:
                parts.append(f"{a}--{b}")
            elif e is Edge.FORWARD:
                parts.append(f"{a}->{b}")
            else:
                parts.append(f"{b}->{a}")
        return f"MixedGraph({self.num_vertices}, [{', '.join(parts)}])"


class SepsetMap(dict):
    """Maps an unordered pair ``(lo, hi)`` to the tuple that separated it."""

    def __setitem__(self, pair, w) -> None:
        i, j = pair
        w = tuple(sorted(w))
        if i in w or j in w:
            raise GraphError(f"separating set {w} contains an endpoint of {pair}")
        super().__setitem__(_key(i, j), w)

    def __getitem__(self, pair):
        return super().__getitem__(_key(*pair))

    def __contains__(self, pair) -> bool:
        return super().__contains__(_key(*pair))

    def get(self, pair, default=None):
        return super().get(_key(*pair), default)


class _Pdag:
    """Mutable working copy used while orienting edges."""

    def __init__(self, g: MixedGraph):
        n = g.num_vertices
        self.n = n
        self.names = g.names
        self.und: List[Set[int]] = [set() for _ in range(n)]
        self.pa: List[Set[int]] = [set() for _ in range(n)]
        self.ch: List[Set[int]] = [set() for _ in range(n)]
        for (i, j), e in g.items():
            if e is Edge.UNDIRECTED:
                self.und[i].add(j)
                self.und[j].add(i)
            elif e is Edge.FORWARD:
                self.ch[i].add(j)
                self.pa[j].add(i)
            else:
                self.ch[j].add(i)
                self.pa[i].add(j)

    def adj(self, a: int, b: int) -> bool:
        return b in self.und[a] or b in self.pa[a] or b in self.ch[a]

    def reaches(self, src: int, dst: int, skip: Pair) -> bool:
        """Directed path src ~> dst that does not use the pair ``skip``."""
        if src == dst:
            return True
        skip = _key(*skip)
        seen = {src}
        stack = [src]
        while stack:
            v = stack.pop()
            for c in self.ch[v]:
                if _key(v, c) == skip or c in seen:
                    continue
                if c == dst:
                    return True
                seen.add(c)
                stack.append(c)
        return False

    def orient(self, a: int, b: int) -> bool:
        """Direct the a-b edge as a -> b unless that closes a directed cycle."""
        if b in self.ch[a]:
            return False
        if self.reaches(b, a, skip=(a, b)):
            return False
        self.und[a].discard(b)
        self.und[b].discard(a)
        self.ch[b].discard(a)
        self.pa[a].discard(b)
        self.ch[a].add(b)
        self.pa[b].add(a)
        return True

    def freeze(self) -> MixedGraph:
        edges: Dict[Pair, Edge] = {}
        for a in range(self.n):
            for b in self.und[a]:
                if a < b:
                    edges[(a, b)] = Edge.UNDIRECTED
            for b in self.ch[a]:
                edges[_key(a, b)] = Edge.FORWARD if a < b else Edge.BACKWARD
        return MixedGraph._from_dict(self.n, edges, self.names)


def _require_dag(g: MixedGraph) -> None:
    if not g.is_dag():
        raise GraphError("expected a DAG (only directed edges, no directed cycle)")


def _descendants(g: MixedGraph, vs: Iterable[int]) -> Set[int]:
    out = set(vs)
    stack = list(out)
    while stack:
        v = stack.pop()
        for c in g.children(v):
            if c not in out:
                out.add(c)
                stack.append(c)
    return out


def ancestors(g: MixedGraph, vs: Iterable[int]) -> Set[int]:
    """Ancestors of ``vs`` in a DAG, the set itself included."""
    out = set(vs)
    stack = list(out)
    while stack:
        v = stack.pop()
        for p in g.parents(v):
            if p not in out:
                out.add(p)
                stack.append(p)
    return out


def d_separated(g: MixedGraph, i: int, j: int, w: Iterable[int] = ()) -> bool:
    """Test whether ``i`` and ``j`` are d-separated by ``w`` in the DAG ``g``.

    Uses the reachability ("Bayes ball") traversal over (vertex, direction)
    states, linear in the size of the graph.
    """
    w = set(w)
    for v in (i, j, *w):
        g._check(v)
    if i == j:
        raise GraphError("d-separation needs two distinct vertices")
    if i in w or j in w:
        raise GraphError("conditioning set may not contain an endpoint")
    _require_dag(g)

    anc_w = ancestors(g, w)
    # direction True: entered v from a child (moving up); False: from a parent.
    seen = set()
    stack = [(i, True)]
    while stack:
        v, up = stack.pop()
        if (v, up) in seen:
            continue
        seen.add((v, up))
        if v == j:
            return False
        if up:
            if v in w:
                continue
            stack.extend((p, True) for p in g.parents(v))
            stack.extend((c, False) for c in g.children(v))
        else:
            if v not in w:
                stack.extend((c, False) for c in g.children(v))
            if v in anc_w:
                stack.extend((p, True) for p in g.parents(v))
    return True


def _meek(p: _Pdag) -> None:
    """Apply R1-R3 to a fixpoint, in lexicographic edge order."""
    changed = True
    while changed:
        changed = False
        for a in range(p.n):
            for b in sorted(p.und[a]):
                if b not in p.und[a]:
                    continue
                for x, y in ((a, b), (b, a)):
                    if _meek_forces(p, x, y) and p.orient(x, y):
                        changed = True
                        break


def _meek_forces(p: _Pdag, a: int, b: int) -> bool:
    # R1: c -> a, a -- b, c and b non-adjacent
    for c in p.pa[a]:
        if not p.adj(c, b):
            return True
    # R2: a -> c -> b, a -- b
    if p.ch[a] & p.pa[b]:
        return True
    # R3: a -- c -> b, a -- d -> b, c and d non-adjacent
    cands = sorted(p.und[a] & p.pa[b])
    for c, d in itertools.combinations(cands, 2):
        if not p.adj(c, d):
            return True
    return False


def apply_meek_rules(g: MixedGraph) -> MixedGraph:
    """Propagate orientations with Meek's rules R1-R3 until nothing changes.

    Adjacencies are never added or removed; only undirected edges get a
    direction. An orientation that would close a directed cycle is skipped.
    """
    p = _Pdag(g)
    _meek(p)
    return p.freeze()


def orient_colliders(skeleton: MixedGraph, sepsets: Mapping) -> MixedGraph:
    """Orient every unshielded triple ``i - k - j`` with ``k`` outside the sepset.

    Triples are visited in lexicographic ``(i, j, k)`` order with ``i < j``;
    when two triples disagree on an edge the later one wins, except that an
    orientation closing a directed cycle is refused.
    """
    if skeleton.directed_edges():
        raise GraphError("collider orientation expects an undirected skeleton")
    n = skeleton.num_vertices
    p = _Pdag(skeleton)
    nbrs = [set(skeleton.neighbors(v)) for v in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j in nbrs[i]:
                continue
            common = nbrs[i] & nbrs[j]
            if not common:
                continue
            if (i, j) not in sepsets:
                raise SepsetError(f"no separating set recorded for ({i}, {j})")
            sep = set(sepsets[(i, j)])
            for k in sorted(common):
                if k in sep:
                    continue
                p.orient(i, k)
                p.orient(j, k)
    return p.freeze()


def dag_to_cpdag(g: MixedGraph) -> MixedGraph:
    """CPDAG of the Markov equivalence class of the DAG ``g``."""
    _require_dag(g)
    p = _Pdag(g.skeleton())
    for v in range(g.num_vertices):
        for a, b in itertools.combinations(g.parents(v), 2):
            if not g.adjacent(a, b):
                p.orient(a, v)
                p.orient(b, v)
    _meek(p)
    return p.freeze()


def parents_in_pdag(g: MixedGraph, i: int) -> Set[int]:
    """Vertices with an edge into ``i`` plus the undirected neighbours of ``i``."""
    return {u for u in g.neighbors(i) if not g.has_directed(i, u)}


def unshielded_colliders(g: MixedGraph) -> Set[Tuple[int, int, int]]:
    """Triples ``(a, v, b)`` with ``a < b``, ``a -> v <- b`` and a, b non-adjacent."""
    out = set()
    for v in range(g.num_vertices):
        for a, b in itertools.combinations(g.parents(v), 2):
            if not g.adjacent(a, b):
                out.add((a, v, b))
    return out
