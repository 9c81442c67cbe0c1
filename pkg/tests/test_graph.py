import json

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from colorgraph.graph import (CLOSED, OPEN, ColoredGraph, GraphFormatError, boundary_graph, close,
                              cut, from_permutations, parse, permutations_of, random_graph,
                              relabel, require_valid, serialize, supermelon, validate)


@st.composite
def closed_graphs(draw, dims=(2, 3, 4), max_n=6):
    D = draw(st.sampled_from(dims))
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_graph(D, n, np.random.default_rng(seed))


def test_supermelon_is_valid(melon3):
    assert validate(melon3).ok
    assert [c for _, _, c in melon3.edges] == [0, 1, 2, 3]


def test_eight_vertex_graph_is_valid(eight_vertex):
    assert validate(eight_vertex).ok
    assert eight_vertex.vertex_count == 8


def test_duplicate_color_reported():
    g = ColoredGraph(3, 2, 2, [(0, 0, 0), (0, 1, 1), (0, 0, 1), (0, 1, 2),
                               (1, 0, 2), (1, 1, 0), (1, 0, 3), (1, 1, 3)])
    clauses = validate(g).clauses()
    assert "duplicate color at vertex" in clauses


@pytest.mark.parametrize("graph, clause", [
    (ColoredGraph(2, 2, 1, [(0, 0, 0), (1, 0, 1)]), "unbalanced bipartition"),
    (ColoredGraph(2, 1, 1, [(0, 0, 0), (0, 0, 1)]), "wrong valence"),
    (ColoredGraph(1, 2, 2, [(0, 0, 0), (0, 0, 1), (1, 1, 0), (1, 1, 1)]), "disconnected"),
    (ColoredGraph(1, 1, 1, [(0, 0, 0), (0, 0, 2)]), "color out of range"),
])
def test_violations(graph, clause):
    report = validate(graph)
    assert not report.ok
    assert any(clause in c for c in report.clauses())


def test_require_valid_raises():
    with pytest.raises(GraphFormatError):
        require_valid(ColoredGraph(2, 1, 1, [(0, 0, 0)]))


def test_parse_color_out_of_range():
    doc = {"dimension": 3, "kind": "closed", "positive_count": 1, "negative_count": 1,
           "edges": [[0, 0, c] for c in (0, 1, 2, 4)]}
    with pytest.raises(GraphFormatError, match="color out of range"):
        parse(json.dumps(doc))


@pytest.mark.parametrize("text", ["", "[]", "{\"dimension\": 3}", "not json"])
def test_parse_malformed(text):
    with pytest.raises(GraphFormatError, match="malformed"):
        parse(text)


def test_supermelon_serialization(melon3):
    doc = json.loads(serialize(melon3))
    assert len(doc["edges"]) == 4
    assert sorted(e[2] for e in doc["edges"]) == [0, 1, 2, 3]


@given(closed_graphs())
def test_serialize_round_trip(g):
    s = serialize(g)
    assert parse(s) == g
    assert serialize(parse(s)) == s


@given(closed_graphs())
def test_permutation_round_trip(g):
    assert from_permutations(permutations_of(g), g.dimension) == g


@given(closed_graphs(), st.randoms(use_true_random=False))
def test_relabel_keeps_validity(g, rnd):
    pm = list(range(g.positive_count))
    nm = list(range(g.negative_count))
    rnd.shuffle(pm)
    rnd.shuffle(nm)
    assert validate(relabel(g, pm, nm)).ok


def test_cut_melon_boundary():
    # elementary melon of color 0 with both color-0 legs open
    g = cut(supermelon(3), (0, 0, 0))
    bg = boundary_graph(g)
    assert len(bg.vertices) == 2
    assert bg.vertex_colors == (0, 0)
    assert sorted(pair for _, _, pair in bg.edges) == [(0, 1), (0, 2), (0, 3)]
    assert bg.check() == []


@given(closed_graphs(), st.data())
def test_single_cut_boundary(g, data):
    k = data.draw(st.integers(0, len(g.edges) - 1))
    bg = boundary_graph(cut(g, k))
    assert len(bg.vertices) == 2
    assert len(bg.edges) == g.dimension
    assert all(a != b for a, b, _ in bg.edges)


@given(closed_graphs(dims=(3, 4)), st.data())
def test_multi_cut_boundary_invariants(g, data):
    ks = data.draw(st.lists(st.integers(0, len(g.edges) - 1), min_size=1, max_size=4, unique=True))
    open_g = g
    for e in sorted((g.edges[k] for k in ks), reverse=True):
        open_g = cut(open_g, e)
    assume(open_g.is_connected())
    assert open_g.kind == OPEN and validate(open_g).ok
    bg = boundary_graph(open_g)
    assert bg.check() == []
    assert all(bg.valence(a) == g.dimension for a in range(len(bg.vertices)))
    assert close(open_g) == g
    assert close(open_g).kind == CLOSED


def test_boundary_of_closed_graph_rejected(melon3):
    with pytest.raises(ValueError):
        boundary_graph(melon3)
