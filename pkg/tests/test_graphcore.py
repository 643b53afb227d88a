from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gammazeta import errors
from gammazeta.graphcore import (Edge, Multigraph, Vertex, build_arc_system, parse_graph,
                                 serialize_graph, validate)

from graph_samples import bouquet, triangle


def embedded_square() -> Multigraph:
    pts = {"a": (0, 0, 0), "b": (1, 0, 0), "c": (1, 1, 0), "d": (0, 1, 0)}
    verts = tuple(Vertex(k, tuple(map(float, v))) for k, v in pts.items())
    edges = (Edge("ab", "a", "b", ((0.5, -0.1, 0.0),)), Edge("bc", "b", "c"),
             Edge("cd", "c", "d"), Edge("da", "d", "a", ((0.0, 0.5, 0.25), (0.0, 0.25, 0.5))))
    return Multigraph(verts, edges)


def test_round_trip_preserves_everything():
    g = embedded_square()
    text = serialize_graph(g)
    assert text.startswith("gamma-graph v1\n") and text.endswith("\n")
    h = parse_graph(text)
    assert h == g
    assert serialize_graph(h) == text


def test_parse_skips_comments_blank_lines_and_run_header():
    text = "gamma-zeta-lab 0.1.0 seed=3\n# note\n\ngamma-graph v1\nvertex a\nedge e a a\n"
    g = parse_graph(text)
    assert [e.is_loop for e in g.edges] == [True]


@pytest.mark.parametrize("text, line", [
    ("gamma-graph v1\nvertex a 1 2\n", 2),
    ("gamma-graph v1\nvertex a\nvertex a\n", 3),
    ("gamma-graph v1\nvertex a\nedge e a a poly 1 2\n", 3),
    ("gamma-graph v1\nvertex a\nwidget z\n", 3),
    ("graph v0\n", 1),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(errors.ParseError) as info:
        parse_graph(text)
    assert info.value.line == line


def test_undeclared_vertex_is_a_reference_error():
    with pytest.raises(errors.ReferenceError):
        parse_graph("gamma-graph v1\nvertex a\nedge e a b\n")


def test_partial_embedding_rejected():
    with pytest.raises(ValueError):
        Multigraph((Vertex("a", (0.0, 0.0, 0.0)), Vertex("b")), ())
    with pytest.raises(errors.MissingEmbedding):
        triangle().require_embedding()


def test_validate_reports_md2_and_cycle_rank():
    rep = validate(triangle())
    assert (rep.connected, rep.min_degree, rep.md2, rep.cycle_rank) == (True, 2, True, 1)
    path = Multigraph.from_edges([("a", "b"), ("b", "c")])
    assert not validate(path).md2
    split = Multigraph.from_edges([("a", "a"), ("b", "b")])
    assert not validate(split).connected


def test_arc_system_of_a_bouquet():
    arcs = build_arc_system(bouquet(2))
    assert len(arcs) == 4
    # each arc may continue along anything but its own reverse, itself included
    for a in range(4):
        assert set(arcs.succ[a]) == set(range(4)) - {a ^ 1}
    assert arcs.labels == ("e0+", "e0-", "e1+", "e1-")


def test_arc_system_triangle_is_two_directed_cycles():
    arcs = build_arc_system(triangle())
    assert all(len(s) == 1 for s in arcs.succ)
    assert sum(map(sum, arcs.matrix())) == 6


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=10),
       st.lists(st.floats(-10, 10, allow_nan=False), min_size=3, max_size=3))
def test_round_trip_property(pairs, shift):
    ids = sorted({f"v{x}" for p in pairs for x in p})
    verts = tuple(Vertex(v, (int(v[1:]) + shift[0], shift[1], shift[2] / 3)) for v in ids)
    edges = tuple(Edge(f"e{i}", f"v{u}", f"v{v}", ((shift[0] / 7, 0.1, 1e-300),) if i % 2 else None)
                  for i, (u, v) in enumerate(pairs))
    g = Multigraph(verts, edges)
    assert parse_graph(serialize_graph(g)) == g
