import io
import math
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gotcentrality.graph import Graph
from gotcentrality.graph_io import (
    NetworkFile,
    ParseError,
    parse_edge_list,
    parse_gml,
    read_centrality_csv,
    to_text,
    write_centrality_csv,
    write_edge_list,
    write_edge_scores_csv,
)


def test_edge_list_basic():
    g = parse_edge_list("a b\nb c\n")
    assert (g.vertex_count, g.edge_count) == (3, 2)
    assert g.labels == ["a", "b", "c"]


def test_edge_list_weight_and_comment():
    g = parse_edge_list(b"a b 2.5\n# comment\n")
    assert g.edge_count == 1
    assert g.weight(0, 1) == 2.5


@pytest.mark.parametrize(
    "text,line",
    [
        ("a b -1\n", 1),
        ("a b 0\n", 1),
        ("a b\nb c xyz\n", 2),
        ("a\n", 1),
        ("a b 1 2\n", 1),
        ("x y\na a\n", 2),
        ("a,b c\n", 1),
    ],
)
def test_edge_list_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_edge_list(text)
    assert info.value.line == line


def test_edge_list_whitespace_and_crlf():
    a = parse_edge_list("a b 2\r\nb  \t c\r\n\r\n")
    b = parse_edge_list("a b 2\nb c\n")
    assert a == b


def test_edge_list_duplicates_last_weight_wins():
    g = parse_edge_list("a b 1.5\nb a 4\n")
    assert g.edge_count == 1
    assert g.weight(0, 1) == 4.0


def test_gml_minimal():
    g = parse_gml("graph [ node [ id 0 ] node [ id 1 ] edge [ source 0 target 1 ] ]")
    assert (g.vertex_count, g.edge_count) == (2, 1)
    assert g.weight(0, 1) == 1.0


GML_SAMPLE = """
Creator "test"
graph
[
  directed 0
  node
  [
    id 10
    label "Beak"
    graphics [ x 1.0 y 2.0 ]
  ]
  node [ id 20 label "SN 4" ]
  node [ id 30 ]
  edge [ source 10 target 20 value 2.5 ]
  edge [ source 20 target 10 value 3.0 ]
  edge [ source 30 target 20 ]
]
"""


def test_gml_values_nested_and_duplicates():
    g = parse_gml(GML_SAMPLE)
    assert g.vertex_count == 3
    assert g.edge_count == 2
    assert g.labels == ["10", "20", "30"]
    assert g.weight(0, 1) == 3.0
    assert g.weight(1, 2) == 1.0


def test_gml_directed_warns():
    with pytest.warns(UserWarning, match="directed"):
        g = parse_gml("graph [ directed 1 node [ id 0 ] node [ id 1 ] edge [ source 1 target 0 ] ]")
    assert g.has_edge(0, 1)


@pytest.mark.parametrize(
    "text",
    [
        "graph [ node [ id 0 ] edge [ source 0 target 9 ] ]",
        "graph [ node [ id 0 ] node [ id 1 ] edge [ source 0 target 1 ]",
        "graph [ node [ id 0 ] ] ]",
        "graph [ node [ id 0 ] node [ id 1 ] edge [ source 0 target 1 value -2 ] ]",
        "nothing [ ]",
    ],
)
def test_gml_errors(text):
    with pytest.raises(ParseError):
        parse_gml(text)


def test_network_file_format_inference(tmp_path):
    assert NetworkFile.from_path("x/dolphins.gml").format == "gml"
    assert NetworkFile.from_path("x/net.txt").format == "edge-list"
    assert NetworkFile.from_path("x/net.txt", "gml").format == "gml"
    p = tmp_path / "tiny.GML"
    p.write_text("graph [ node [ id 0 ] node [ id 1 ] edge [ source 0 target 1 ] ]")
    assert NetworkFile.from_path(p).load().edge_count == 1


def test_centrality_csv_shapes():
    g = Graph.from_edges(2, [(0, 1)])
    text = to_text(write_centrality_csv, g, [("degree", [1.0, 1.0])])
    assert text == "vertex,degree\n0,1\n1,1\n"
    assert to_text(write_centrality_csv, g, []) == "vertex\n0\n1\n"


def test_centrality_csv_precision_and_roundtrip():
    g = Graph(2, ["a", "b"])
    text = to_text(write_centrality_csv, g, [("x", [1 / 3, 2e-12]), ("y", [1234567.891234, 0.0])])
    assert text.splitlines()[1] == "a,0.3333333333,1234567.891"
    labels, cols = read_centrality_csv(text)
    assert labels == ["a", "b"]
    assert cols["x"][1] == 2e-12


@pytest.mark.parametrize("bad", [[1.0], [1.0, math.nan], [math.inf, 0.0]])
def test_centrality_csv_rejects(bad):
    g = Graph(2)
    with pytest.raises(ValueError):
        write_centrality_csv(g, [("c", bad)], io.StringIO())


def test_edge_scores_csv():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    text = to_text(write_edge_scores_csv, g, {(0, 1): 0.5, (1, 2): 2.0})
    assert text == "u,v,psi_bar\n0,1,0.5\n1,2,2\n"


def test_roundtrip_with_isolated_vertices_and_odd_order():
    g = Graph(5, ["p", "q", "r", "s", "t"])
    g.add_edge(0, 3, 0.1)
    g.add_edge(1, 3, 7.25)
    text = to_text(write_edge_list, g)
    assert "#@vertex" in text
    assert parse_edge_list(text) == g


def test_plain_writer_has_no_directives():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert to_text(write_edge_list, g) == "0 1\n1 2\n"


@st.composite
def weighted_graphs(draw):
    n = draw(st.integers(1, 15))
    g = Graph(n, [f"v{i}" for i in range(n)])
    for _ in range(draw(st.integers(0, 40))):
        u = draw(st.integers(0, n - 1))
        v = draw(st.integers(0, n - 1))
        if u != v:
            w = draw(st.floats(1e-6, 1e6, allow_nan=False))
            g.add_edge(u, v, w)
    return g


@settings(max_examples=100, deadline=None)
@given(weighted_graphs())
def test_edge_list_roundtrip(g):
    h = parse_edge_list(to_text(write_edge_list, g))
    assert h.vertex_count == g.vertex_count
    assert h.labels == g.labels
    assert h.edges() == g.edges()
    for a, b in zip(h.edge_weights(), g.edge_weights()):
        assert abs(a - b) <= 1e-9 * max(1.0, abs(b))
