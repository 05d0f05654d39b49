import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from gcl_divergence.embedding import (
    Embedding, distance, distance_extremes, distance_matrix, format_embedding, parse_embedding,
)
from gcl_divergence.errors import InputError
from gcl_divergence.graph import parse_edge_list

TRIANGLE = parse_edge_list("a b\nb c\nc a\n")


def test_parse_with_header():
    e = parse_embedding("3 2\na 0 0\nb 1 0\nc 0 1\n", TRIANGLE)
    assert e.coords.shape == (3, 2)
    assert e.coords[TRIANGLE.index("c")].tolist() == [0, 1]


def test_parse_reorders_rows_and_ignores_extra_labels():
    e = parse_embedding("zz 9 9\nc 0 1\nb 1 0\na 0 0\n", TRIANGLE)
    assert e.coords.tolist() == [[0, 0], [1, 0], [0, 1]]


def test_missing_vertex():
    with pytest.raises(InputError, match="vertex c has no embedding"):
        parse_embedding("3 2\na 0 0\nb 1 0\n", TRIANGLE)


def test_inconsistent_dimension():
    with pytest.raises(InputError, match="3 coordinates, expected 2"):
        parse_embedding("a 0 0\nb 1 0 3\nc 0 1\n", TRIANGLE)


def test_non_numeric_coordinate():
    with pytest.raises(InputError):
        parse_embedding("a 0 0\nb one 0\nc 0 1\n", TRIANGLE)


def test_sixty_four_dimensions(karate):
    g, _ = karate
    rng = np.random.default_rng(1)
    text = f"{g.n} 64\n" + "".join(
        lab + " " + " ".join(f"{x:.6f}" for x in rng.random(64)) + "\n" for lab in g.labels
    )
    assert parse_embedding(text, g).dim == 64


def test_format_round_trip(karate):
    g, _ = karate
    e = Embedding(np.random.default_rng(0).normal(size=(g.n, 3)))
    back = parse_embedding(format_embedding(e, g), g)
    np.testing.assert_array_equal(back.coords, e.coords)


def test_non_finite_rejected():
    with pytest.raises((InputError, ValueError)):
        Embedding(np.array([[0.0], [np.nan]]))


@pytest.mark.parametrize("a, b, d", [
    ((0, 0), (3, 4), 5.0), ((1, 1, 1), (2, 2, 2), math.sqrt(3)), ((2, 2), (2, 2), 0.0),
])
def test_distance(a, b, d):
    e = Embedding(np.array([a, b], dtype=float))
    assert distance(e, 0, 1) == pytest.approx(d)
    assert distance(e, 1, 0) == pytest.approx(d)


@pytest.mark.parametrize("coords, ex", [
    ([[0], [1], [3]], (1, 3)),
    ([[2, 2], [2, 2], [2, 2]], (0, 0)),
    ([[0, 0], [1, 0], [0, 1], [1, 1]], (1, math.sqrt(2))),
])
def test_distance_extremes(coords, ex):
    got = distance_extremes(Embedding(np.array(coords, dtype=float)))
    assert got.d_min == pytest.approx(ex[0])
    assert got.d_max == pytest.approx(ex[1])


def test_extremes_need_two_points():
    with pytest.raises(InputError):
        distance_extremes(Embedding(np.zeros((1, 2))))


@settings(max_examples=60, deadline=None)
@given(arrays(float, st.tuples(st.integers(3, 12), st.integers(1, 4)),
              elements=st.floats(-100, 100, allow_nan=False)))
def test_metric_properties(x):
    e = Embedding(x)
    d = distance_matrix(e)
    ex = distance_extremes(e)
    assert np.allclose(d, d.T) and np.all(np.diag(d) == 0) and np.all(d >= 0)
    off = d[~np.eye(e.n, dtype=bool)]
    assert ex.d_min <= off.min() + 1e-12 and off.max() <= ex.d_max + 1e-12
    i, j, k = 0, 1, 2
    assert d[i, k] <= d[i, j] + d[j, k] + 1e-9
