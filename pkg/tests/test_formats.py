import pytest
from hypothesis import given, settings

from autopc.formats import GraphFormatError, format_graph, parse_graph, reorder
from autopc.graph import MixedGraph
from conftest import pdags


def test_parse_example():
    text = """
    # a comment
    vertices: A,B,C

    A -> B
    C -- B   # trailing comment
    """
    g = parse_graph(text)
    assert g.names == ("A", "B", "C")
    assert g == MixedGraph(3, directed=[(0, 1)], undirected=[(1, 2)])


def test_serialization_sorted_and_stable():
    g = MixedGraph(3, directed=[(2, 0)], undirected=[(1, 0)], names=["b", "a", "c"])
    assert format_graph(g) == "vertices: b,a,c\na -- b\nc -> b\n"


@given(pdags())
@settings(max_examples=100, deadline=None)
def test_roundtrip(g):
    text = format_graph(g)
    back = parse_graph(text)
    assert back == g and back.names == g.names
    assert format_graph(back) == text


@pytest.mark.parametrize("text,line", [
    ("vertices: A,B\nA => B\n", 2),
    ("vertices: A,B\nA -> Q\n", 2),
    ("A -> B\n", 1),
    ("# x\nvertices: A,B\n\nA -> B -> A\n", 4),
])
def test_errors_carry_line(text, line):
    with pytest.raises(GraphFormatError) as exc:
        parse_graph(text)
    assert exc.value.lineno == line


def test_reorder_by_name():
    g = parse_graph("vertices: A,B,C\nA -> C\n")
    h = reorder(g, ["C", "B", "A"])
    assert h.names == ("C", "B", "A")
    assert h.has_directed(2, 0)
