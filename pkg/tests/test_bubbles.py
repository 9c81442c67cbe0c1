import numpy as np
import pytest

from colorgraph.bubbles import (DualComplex, bubble_counts, check_pseudomanifold, dual_complex,
                                enumerate_bubbles, hat)
from colorgraph.dipoles import CreationSpec, create
from colorgraph.graph import supermelon


def test_supermelon_two_bubbles(melon3):
    for i in range(4):
        for j in range(i + 1, 4):
            (b,) = enumerate_bubbles(melon3, (i, j))
            assert len(b.vertices) == 2 and len(b.edges) == 2


def test_zero_bubbles_are_vertices(eight_vertex):
    bs = enumerate_bubbles(eight_vertex, ())
    assert [b.vertices for b in bs] == [(v,) for v in range(8)]


def test_supermelon_counts(melon3):
    assert bubble_counts(melon3) == {0: 2, 1: 4, 2: 6, 3: 4}


def test_three_bubbles_cover_every_vertex(eight_vertex):
    for i in range(4):
        bs = enumerate_bubbles(eight_vertex, hat(3, i))
        assert sorted(v for b in bs for v in b.vertices) == list(range(8))


def test_melon_insertion_adds_bubble():
    g = create(supermelon(3), CreationSpec((1, 2, 3), ((0, 0, 0),)))
    assert bubble_counts(g)[3] == 3 + 2


def test_core_graph_has_one_bubble_per_color(corpus):
    from colorgraph.dipoles import route_to_core
    for g in corpus[:50]:
        core, _ = route_to_core(g)
        assert bubble_counts(core)[core.dimension] == core.dimension + 1


def test_supermelon_dual(melon3):
    cx = dual_complex(melon3)
    assert cx.f_vector() == [4, 6, 4, 2]
    assert check_pseudomanifold(cx).ok
    assert cx.is_downward_closed()


def test_dual_of_two_vertex_circle():
    cx = dual_complex(supermelon(1))
    assert cx.f_vector() == [2, 2]
    facets = cx.of_dim(1)
    assert cx.simplices[facets[0]] == cx.simplices[facets[1]]
    assert check_pseudomanifold(cx).ok


def test_branching_complex_detected():
    cx = DualComplex.from_facets(2, [(0, 1, 2), (0, 1, 3), (0, 1, 4)])
    rep = check_pseudomanifold(cx)
    assert not rep.non_branching
    assert rep.pure


def test_disconnected_complex_detected():
    cx = DualComplex.from_facets(1, [(0, 1), (2, 3)])
    assert not check_pseudomanifold(cx).strongly_connected


def test_impure_complex_detected():
    cx = DualComplex.from_facets(2, [(0, 1, 2), (1, 2, 3), (4, 5)])
    assert not check_pseudomanifold(cx).pure


def test_graph_simplices_match_vertices_and_edges(eight_vertex):
    cx = dual_complex(eight_vertex)
    f = cx.f_vector()
    assert f[3] == eight_vertex.vertex_count
    assert f[2] == len(eight_vertex.edges)


def test_corpus_duals_are_pseudomanifolds(corpus):
    for g in corpus:
        assert check_pseudomanifold(dual_complex(g)).ok


@pytest.mark.parametrize("D", [2, 3, 4])
def test_bubble_count_sum_rule(D):
    # every vertex lies in exactly one bubble of each species
    rng = np.random.default_rng(D)
    from colorgraph.graph import random_graph
    g = random_graph(D, 6, rng)
    assert bubble_counts(g)[0] == g.vertex_count
    assert bubble_counts(g)[1] == len(g.edges)
