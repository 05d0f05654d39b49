import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gcl_divergence.errors import InputError
from gcl_divergence.graph import (
    Graph, connected_components, degree_sequence, is_connected, largest_connected_component,
    parse_edge_list, read_edge_list,
)


def test_triangle():
    g = parse_edge_list("1 2\n2 3\n3 1")
    assert (g.n, g.edge_count) == (3, 3)
    assert degree_sequence(g).tolist() == [2, 2, 2]


def test_duplicates_and_loops_dropped():
    g = parse_edge_list("a b\nb a\na a")
    assert (g.n, g.edge_count) == (2, 1)
    assert list(g.labels) == ["a", "b"]


def test_comments_tabs_and_stream():
    g = parse_edge_list(io.StringIO("# header\nx\ty\n\n  y z  \n"))
    assert list(g.labels) == ["x", "y", "z"]
    assert g.edge_count == 2


def test_labels_in_first_appearance_order():
    g = parse_edge_list("c a\nb c\n")
    assert list(g.labels) == ["c", "a", "b"]


@pytest.mark.parametrize("text, line", [("1 2\n3\n", 2), ("1 2 3\n", 1), ("# c\n\n4 5 6\n", 3)])
def test_malformed_line_reports_number(text, line):
    with pytest.raises(InputError, match=f"line {line}"):
        parse_edge_list(text)


def test_directed_input_is_symmetrised():
    g = parse_edge_list("1 2\n2 1\n2 3\n", directed_hint=True)
    assert g.edge_count == 2
    assert g.has_edge(g.index("3"), g.index("2"))


def test_star_degrees():
    g = Graph.from_edges([str(i) for i in range(5)], [(0, k) for k in range(1, 5)])
    assert degree_sequence(g).tolist() == [4, 1, 1, 1, 1]


def test_karate_size_and_instructor_degree(karate):
    g, _ = karate
    assert (g.n, g.edge_count) == (34, 78)
    assert degree_sequence(g)[g.index("1")] == 16


def test_lcc_drops_isolated_vertex():
    g = Graph.from_edges(list("abcd"), [(0, 1), (1, 2), (0, 2)])
    h = largest_connected_component(g)
    assert h.n == 3 and h.edge_count == 3
    assert list(h.labels) == ["a", "b", "c"]


def test_lcc_tie_goes_to_first_seen():
    g = parse_edge_list("x y\np q\nq r\nr p\ny z\nz x\n")
    h = largest_connected_component(g)
    assert sorted(h.labels) == ["x", "y", "z"]


def test_lcc_empty_graph():
    with pytest.raises(InputError):
        largest_connected_component(Graph.from_edges([], []))


def test_json_export(two_triangles):
    d = two_triangles.to_json()
    assert d["n"] == 6 and d["m"] == 7
    assert all(i < j for i, j in d["edges"])


def test_file_round_trip(tmp_path, karate):
    g, _ = karate
    path = tmp_path / "k.edges"
    path.write_text(g.to_edge_list())
    h = read_edge_list(path)
    assert sorted(h.labels) == sorted(g.labels)
    for lab in g.labels:
        i, j = g.index(lab), h.index(lab)
        assert {g.labels[k] for k in g.neighbors[i]} == {h.labels[k] for k in h.neighbors[j]}


edge_lists = st.lists(
    st.tuples(st.integers(0, 15), st.integers(0, 15)), min_size=1, max_size=60,
)


@settings(max_examples=150, deadline=None)
@given(edge_lists)
def test_parse_invariants(pairs):
    g = parse_edge_list("".join(f"v{a} v{b}\n" for a, b in pairs))
    deg = degree_sequence(g)
    assert deg.sum() == 2 * g.edge_count
    for i, nb in enumerate(g.neighbors):
        assert list(nb) == sorted(set(nb))
        assert i not in nb
        assert all(i in g.neighbors[j] for j in nb)
    # serialising and reparsing gives the same structure
    h = parse_edge_list(g.to_edge_list())
    if g.edge_count:
        assert {frozenset((h.labels[i], h.labels[j])) for i, j in h.edges()} == \
            {frozenset((g.labels[i], g.labels[j])) for i, j in g.edges()}


@settings(max_examples=100, deadline=None)
@given(edge_lists)
def test_lcc_is_connected_and_largest(pairs):
    g = parse_edge_list("".join(f"v{a} v{b}\n" for a, b in pairs))
    if g.n == 0:
        return
    h = largest_connected_component(g)
    assert is_connected(h)
    assert h.n == max(len(c) for c in connected_components(g))
