import numpy as np
import pytest
from hypothesis import given, strategies as st

from colorgraph.algebra import (GraphChain, MarkedGraph, bracket, is_melonic_closed, jacobiator,
                                marked_bubble, marked_graphs, star_contract)
from colorgraph.bubbles import enumerate_bubbles, hat
from colorgraph.canon import is_isomorphic
from colorgraph.graph import random_graph, supermelon, validate


@st.composite
def marked(draw, colors=4, max_positives=3):
    n = draw(st.integers(1, max_positives))
    seed = draw(st.integers(0, 2**32 - 1))
    g = random_graph(colors - 1, n, np.random.default_rng(seed))
    return MarkedGraph(g, draw(st.integers(0, n - 1)))


def test_supermelon_star_supermelon():
    s = supermelon(3)
    assert star_contract(s, 0, s, 0) == s


@given(marked(), marked(), st.data())
def test_star_contract_is_valid(a, b, data):
    v = data.draw(st.integers(0, a.graph.positive_count - 1))
    w = data.draw(st.integers(0, b.graph.negative_count - 1))
    g = star_contract(a.graph, v, b.graph, w)
    assert validate(g).ok
    assert g.positive_count == a.graph.positive_count + b.graph.positive_count - 1


@given(marked(), marked(), marked(), st.data())
def test_star_contract_associative(a, b, c, data):
    B1, B2, B3 = a.graph, b.graph, c.graph
    v1 = data.draw(st.integers(0, B1.positive_count - 1))
    w2 = data.draw(st.integers(0, B2.negative_count - 1))
    v2 = data.draw(st.integers(0, B2.positive_count - 1))
    w3 = data.draw(st.integers(0, B3.negative_count - 1))
    left = star_contract(star_contract(B1, v1, B2, w2), B1.positive_count - 1 + v2, B3, w3)
    right = star_contract(B1, v1, star_contract(B2, v2, B3, w3), w2)
    assert is_isomorphic(left, right)


def test_mark_must_be_negative():
    with pytest.raises(ValueError):
        MarkedGraph(supermelon(3), 1)


@given(marked())
def test_self_bracket_vanishes(x):
    assert not bracket(x, x)


@given(marked(), marked())
def test_antisymmetry(x, y):
    assert bracket(x, y) == -bracket(y, x)


@given(marked(max_positives=2), marked(max_positives=2), marked(max_positives=2))
def test_jacobi_random(x, y, z):
    assert not jacobiator(x, y, z)


def test_bilinearity():
    gs = marked_graphs(3, 2)
    x = GraphChain([(gs[0], 2), (gs[1], -1)])
    y = GraphChain.of(gs[2], 3)
    lhs = bracket(x, y)
    rhs = 6 * bracket(gs[0], gs[2]) - 3 * bracket(gs[1], gs[2])
    assert lhs == rhs


def test_chain_cancellation():
    g = marked_graphs(4, 2)[0]
    assert not (GraphChain.of(g) - GraphChain.of(g))
    assert len(GraphChain.of(g) + GraphChain.of(g)) == 1


@pytest.mark.parametrize("colors, expected", [(3, 4), (4, 5)])
def test_small_melonic_basis(colors, expected):
    basis = marked_graphs(colors, 1, True) + marked_graphs(colors, 2, True)
    assert len(basis) == expected


def test_supermelon_bracket_is_melonic():
    s = MarkedGraph(supermelon(3), 0)
    t = marked_graphs(4, 2, True)[0]
    assert is_melonic_closed(bracket(s, t))


def test_nonmelonic_chain_detected():
    bad = next(m for m in marked_graphs(4, 3) if not is_melonic_closed(GraphChain.of(m)))
    assert not is_melonic_closed(GraphChain.of(bad) + GraphChain.of(marked_graphs(4, 1)[0]))


def test_exhaustive_small_melonic():
    for colors in (3, 4):
        basis = marked_graphs(colors, 1, True) + marked_graphs(colors, 2, True)
        for x in basis:
            for y in basis:
                b = bracket(x, y)
                assert b == -bracket(y, x)
                assert is_melonic_closed(b)
                for z in basis:
                    assert not jacobiator(x, y, z)


def test_marked_bubble_view(eight_vertex):
    b = enumerate_bubbles(eight_vertex, hat(3, 3))[0]
    neg = next(v for v in b.vertices if v >= eight_vertex.positive_count)
    m = marked_bubble(eight_vertex, b, neg)
    assert m.graph.dimension == 2
    assert validate(m.graph).ok


def test_canonical_representative_keeps_key():
    for m in marked_graphs(4, 3)[:20]:
        assert m.canonical().key() == m.key()
