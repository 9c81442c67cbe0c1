from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from colorgraph.dipoles import contract, find_dipoles, route_to_core
from colorgraph.graph import close, random_graph
from colorgraph.jackets import (bubble_identity_residual, bubble_inequality_slack, bubble_jackets,
                                canonical_cycle, contraction_residual, contraction_shift, degree,
                                enumerate_jackets, face_count, jacket, jacket_cycles)
from colorgraph.melonic import sample_uniform, tree_to_graph


def test_three_jackets_in_four_colors():
    assert jacket_cycles(3) == [(0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3)]


def test_jacket_face_pairs(melon3):
    j = jacket(melon3, (0, 1, 2, 3))
    assert sorted(j.face_pairs) == [(0, 1), (0, 3), (1, 2), (2, 3)]


def test_five_colors():
    cycles = jacket_cycles(4)
    assert len(cycles) == 12
    membership = Counter(tuple(sorted(p)) for c in cycles for p in zip(c, c[1:] + c[:1]))
    assert len(membership) == 10
    assert set(membership.values()) == {6}


def test_supermelon_jackets(melon3):
    for j in enumerate_jackets(melon3):
        assert (j.vertices, j.edges, j.faces, j.genus) == (2, 4, 4, 0)
    assert degree(melon3) == 0


def test_positive_degree_has_positive_genus(eight_vertex):
    assert degree(eight_vertex) > 0
    assert max(j.genus for j in enumerate_jackets(eight_vertex)) >= 1


@pytest.mark.parametrize("seed", range(10))
def test_melonic_jackets_are_planar(seed):
    g = close(tree_to_graph(sample_uniform(3, 50, seed)))
    assert all(j.genus == 0 for j in enumerate_jackets(g))


def test_bubble_jackets_of_a_jacket(eight_vertex):
    j = jacket(eight_vertex, (0, 1, 2, 3))
    cycles = {i: {b.cycle for b in bubble_jackets(eight_vertex, j, i)} for i in range(4)}
    assert cycles[0] == {(1, 2, 3)}
    assert cycles[1] == {(0, 2, 3)}
    assert cycles[2] == {(0, 1, 3)}
    assert cycles[3] == {(0, 1, 2)}


def test_bubble_jacket_multiplicity():
    D = 4
    for i in range(D + 1):
        reached = Counter(canonical_cycle(tuple(c for c in cyc if c != i))
                          for cyc in jacket_cycles(D))
        assert set(reached.values()) == {D}


def test_supermelon_bubble_jackets(melon3):
    for j in enumerate_jackets(melon3):
        for i in range(4):
            assert all(b.genus == 0 for b in bubble_jackets(melon3, j, i))


def test_face_count_symmetric(eight_vertex):
    for i in range(4):
        for k in range(4):
            if i != k:
                assert face_count(eight_vertex, i, k) == face_count(eight_vertex, k, i)


def test_contraction_shift_vanishes_for_melons():
    for D in range(2, 7):
        assert contraction_shift(D, D) == 0
        assert contraction_shift(D, 1) == 0


@given(st.sampled_from([3, 4]), st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_identities_hypothesis(D, n, seed):
    g = random_graph(D, n, np.random.default_rng(seed))
    assert bubble_identity_residual(g) == 0
    assert bubble_inequality_slack(g) >= 0
    for k in range(1, D + 1):
        for d in find_dipoles(g, k):
            assert contraction_residual(g, contract(g, d), k) == 0


def test_identities_on_corpus(corpus):
    for g in corpus:
        assert bubble_identity_residual(g) == Fraction(0)
        assert bubble_inequality_slack(g) >= 0
        core, _ = route_to_core(g)
        assert degree(core) == degree(g)
