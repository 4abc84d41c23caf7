"""Plain-text graph files.

::

    # comment
    vertices: A,B,C
    A -> B
    B -- C

Edges are written sorted by line text so output is byte-stable.
"""

from __future__ import annotations

import re
from typing import List

from .graph import GraphError, MixedGraph

_EDGE_RE = re.compile(r"^\s*(\S+)\s*(->|<-|--)\s*(\S+)\s*$")


class GraphFormatError(ValueError):
    def __init__(self, msg: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno else msg)


def format_graph(g: MixedGraph) -> str:
    lines = ["vertices: " + ",".join(g.names)]
    body = []
    for t, h in g.directed_edges():
        body.append(f"{g.names[t]} -> {g.names[h]}")
    for a, b in g.undirected_edges():
        x, y = sorted((g.names[a], g.names[b]))
        body.append(f"{x} -- {y}")
    lines += sorted(body)
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> MixedGraph:
    names: List[str] | None = None
    index = {}
    directed, undirected = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if names is None:
            if not line.lower().startswith("vertices:"):
                raise GraphFormatError("expected 'vertices: name1,name2,...'", lineno)
            names = [s.strip() for s in line.split(":", 1)[1].split(",") if s.strip()]
            if not names:
                raise GraphFormatError("empty vertex list", lineno)
            if len(set(names)) != len(names):
                raise GraphFormatError("duplicate vertex name", lineno)
            if any(re.search(r"\s|->|--|<-", s) for s in names):
                raise GraphFormatError("vertex names may not contain spaces or arrows", lineno)
            index = {s: k for k, s in enumerate(names)}
            continue
        m = _EDGE_RE.match(line)
        if not m:
            raise GraphFormatError(f"malformed edge line {raw.strip()!r}", lineno)
        a, op, b = m.groups()
        for s in (a, b):
            if s not in index:
                raise GraphFormatError(f"unknown vertex {s!r}", lineno)
        i, j = index[a], index[b]
        if op == "->":
            directed.append((i, j))
        elif op == "<-":
            directed.append((j, i))
        else:
            undirected.append((i, j))
    if names is None:
        raise GraphFormatError("missing 'vertices:' header")
    try:
        return MixedGraph(len(names), directed=directed, undirected=undirected, names=names)
    except GraphError as e:
        raise GraphFormatError(str(e)) from None


def read_graph(path) -> MixedGraph:
    with open(path) as fh:
        return parse_graph(fh.read())


def write_graph(g: MixedGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(g))


def reorder(g: MixedGraph, names: List[str]) -> MixedGraph:
    """Same graph with vertices renumbered to follow ``names``."""
    if sorted(names) != sorted(g.names):
        raise GraphError("vertex name sets differ")
    pos = {s: k for k, s in enumerate(names)}
    m = [pos[s] for s in g.names]
    return MixedGraph(
        g.num_vertices,
        directed=[(m[t], m[h]) for t, h in g.directed_edges()],
        undirected=[(m[a], m[b]) for a, b in g.undirected_edges()],
        names=names,
    )
