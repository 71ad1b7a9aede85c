import numpy as np
import pytest
from hypothesis import given, settings

from hyperlap import (
    Hypergraph,
    OrientedHypergraph,
    ParseError,
    ValidationError,
    WeightedGraph,
    degree_t,
    is_bipartite_graph,
    is_connected,
    max_cardinality,
    parse_hypergraph,
    read_hypergraph,
    serialize,
)
from hyperlap.hypergraph import degrees_t

from helpers import CORPUS, cycle, hypergraphs, oriented_hypergraphs

FIG1_TEXT = "hypergraph undirected\nedge e1 v1 v2 v4\nedge e2 v1 v2\nedge e3 v1 v3"


@pytest.fixture
def fig1():
    return read_hypergraph(CORPUS / "fig1.hg")


def members(H, k):
    return {H.vertices[i] for i in H.edges[k]}


def test_parse_fig1_without_header():
    H = parse_hypergraph(FIG1_TEXT)
    assert isinstance(H, Hypergraph)
    assert H.vertices == ("v1", "v2", "v4", "v3")  # first appearance
    assert [members(H, k) for k in range(3)] == [{"v1", "v2", "v4"}, {"v1", "v2"}, {"v1", "v3"}]
    assert H.edge_names == ("e1", "e2", "e3")


def test_vertices_header_fixes_order(fig1):
    assert fig1.vertices == ("v1", "v2", "v3", "v4")
    assert [members(fig1, k) for k in range(3)] == [{"v1", "v2", "v4"}, {"v1", "v2"}, {"v1", "v3"}]


def test_parse_oriented():
    H = parse_hypergraph("hypergraph oriented\nedge e1 in:v1,v2 out:v3")
    assert isinstance(H, OrientedHypergraph)
    assert [H.vertices[i] for i in H.inputs[0]] == ["v1", "v2"]
    assert [H.vertices[i] for i in H.outputs[0]] == ["v3"]


def test_parse_oriented_one_side_only():
    H = parse_hypergraph("hypergraph oriented\nedge e1 in:a,b\nedge e2 out:b,c")
    assert H.outputs[0] == () and H.inputs[1] == ()


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("hypergraph undirected\nedge e1 v1", "singleton"),
        ("hypergraph oriented\nedge e1 in:v1", "singleton"),
        ("hypergraph oriented\nedge e1 in:v1,v2 out:v2", "both input and output"),
        ("hypergraph undirected\nvertices a b c\nedge e1 a b", "isolated"),
        ("hypergraph undirected\nedge e1 a b\nedge e1 b c", "duplicate edge name"),
        ("hypergraph undirected\nedge e1 a b a", "repeated"),
        ("hypergraph undirected\nvertices a b a\nedge e1 a b", "duplicate vertex"),
        ("hypergraph undirected\nvertices a b\nedge e1 a c", "not declared"),
        ("graph undirected\nedge e1 a b", "expected 'hypergraph"),
        ("hypergraph undirected\nnode a", "unknown directive"),
        ("hypergraph oriented\nedge e1 a,b", "expected in:"),
        ("", "empty"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_hypergraph(text)


def test_parse_error_reports_line_and_column():
    with pytest.raises(ParseError) as info:
        parse_hypergraph("# header\nhypergraph undirected\nedge e1 a b\nedge e2   c")
    assert info.value.line == 4
    assert info.value.column == 6  # the edge name


def test_comments_and_blank_lines():
    H = parse_hypergraph("\n# c\nhypergraph undirected   # kind\n\nedge e1 a b # trailing\n")
    assert H.vertices == ("a", "b")


@given(hypergraphs())
def test_round_trip_undirected(H):
    assert parse_hypergraph(serialize(H)) == H


@given(oriented_hypergraphs())
def test_round_trip_oriented(H):
    again = parse_hypergraph(serialize(H))
    assert again == H
    assert again.edges == H.edges


def test_connectivity_examples(fig1):
    assert is_connected(fig1)
    assert not is_connected(Hypergraph.from_edges([("v1", "v2"), ("v3", "v4")]))
    assert is_connected(Hypergraph.from_edges([("v1", "v2", "v3")]))


@given(oriented_hypergraphs())
def test_connectivity_ignores_orientation(H):
    assert is_connected(H) == is_connected(H.reversed()) == is_connected(H.underlying())


def test_degree_t(fig1):
    assert degree_t(fig1, "v1") == 3
    assert degree_t(fig1, "v3") == 1
    assert degree_t(Hypergraph.from_edges([("v1", "v2")]), "v1") == 1
    with pytest.raises(ValidationError):
        degree_t(fig1, "v9")


@given(hypergraphs())
def test_degree_sum_matches_sizes(H):
    assert degrees_t(H).sum() == sum(len(e) for e in H.edges)


def test_max_cardinality(fig1):
    # oracle: enumerate sizes
    sizes = [len(members(fig1, k)) for k in range(3)]
    assert sizes == [3, 2, 2]
    assert max_cardinality(fig1) == (3, False)
    assert max_cardinality(parse_hypergraph("hypergraph oriented\nedge e in:v1,v2 out:v3")) == (3, True)
    assert max_cardinality(cycle(5)) == (2, True)


def test_reversal_is_valid_and_involutive():
    H = parse_hypergraph("hypergraph oriented\nedge e1 in:a out:b,c\nedge e2 out:a,c")
    R = H.reversed()
    assert R.inputs == H.outputs and R.outputs == H.inputs
    assert R.reversed() == H


def _graph(n, edges, w=1.0):
    W = np.zeros((n, n))
    for i, j in edges:
        W[i, j] = W[j, i] = w
    return WeightedGraph(tuple(f"v{i + 1}" for i in range(n)), W)


def test_bipartite_examples():
    ok, col = is_bipartite_graph(_graph(2, [(0, 1)]))
    assert ok and col == ((0,), (1,))
    assert is_bipartite_graph(_graph(3, [(0, 1), (1, 2), (0, 2)])) == (False, None)
    # two-step effective graph of fig1.hg: edges 12, 13, 14, 24 contain the odd cycle v1-v2-v4
    assert is_bipartite_graph(_graph(4, [(0, 1), (0, 2), (0, 3), (1, 3)])) == (False, None)
    ok, (a, b) = is_bipartite_graph(_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))
    assert ok and set(a) == {0, 2} and set(b) == {1, 3}


def test_bipartite_rejects_directed():
    W = np.zeros((2, 2))
    W[0, 1] = 1
    with pytest.raises(ValidationError):
        is_bipartite_graph(WeightedGraph(("a", "b"), W))


def test_weighted_graph_validation():
    with pytest.raises(ValidationError):
        WeightedGraph(("a", "b"), np.array([[1.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(ValidationError):
        WeightedGraph(("a", "b"), np.array([[0.0, -1.0], [1.0, 0.0]]))


def test_types_are_immutable(fig1):
    with pytest.raises(AttributeError):
        fig1.vertices = ()
    G = _graph(2, [(0, 1)])
    with pytest.raises(ValueError):
        G.weights[0, 1] = 3.0


@settings(max_examples=50)
@given(hypergraphs())
def test_generator_produces_valid_connected_hypergraphs(H):
    assert is_connected(H)
    assert all(len(e) >= 2 for e in H.edges)
