from itertools import permutations, product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from colorgraph.bubbles import bubble_counts, component_labels, hat
from colorgraph.canon import is_isomorphic
from colorgraph.dipoles import (CreationError, CreationSpec, StaleDipoleError, contract, create,
                                find_dipoles, inverse_spec, is_core, is_melonic, replay,
                                route_to_core)
from colorgraph.graph import close, from_permutations, random_graph, supermelon, validate
from colorgraph.jackets import degree
from colorgraph.melonic import sample_uniform, tree_to_graph


def graphs(dims=(3, 4), max_n=7):
    return st.builds(lambda D, n, seed: random_graph(D, n, np.random.default_rng(seed)),
                     st.sampled_from(dims), st.integers(1, max_n), st.integers(0, 2**32 - 1))


def conserved(g):
    return g.order - bubble_counts(g)[g.dimension]


def test_supermelon_has_no_dipoles(melon3):
    for k in (1, 2, 3):
        assert find_dipoles(melon3, k) == []


def test_inserted_melon_is_a_d_dipole():
    g = create(supermelon(3), CreationSpec((1, 2, 3), ((0, 0, 0),)))
    found = find_dipoles(g, 3)
    assert any(d.colors == (1, 2, 3) for d in found)
    d = next(d for d in found if d.colors == (1, 2, 3))
    smaller = contract(g, d)
    assert smaller.vertex_count == g.vertex_count - 2
    assert degree(smaller) == degree(g) == 0


def test_one_dipoles_in_a_melon_chain():
    # supermelon with two melons of color 0 inserted in a row
    g = supermelon(3)
    for _ in range(2):
        edge = next(e for e in g.edges if e[2] == 0)
        g = create(g, CreationSpec((1, 2, 3), (edge,)))
    brute = []
    for v in range(g.positive_count):
        for w in range(g.negative_count):
            shared = [c for c in g.colors if g.neighbors[v, c] == g.positive_count + w]
            for c in shared:
                lab = component_labels(g, hat(3, c))
                if lab[v] != lab[g.positive_count + w]:
                    brute.append((v, w, c))
    assert sorted((d.positive, d.negative, d.colors[0]) for d in find_dipoles(g, 1)) == sorted(brute)


def test_stale_dipole_rejected():
    rng = np.random.default_rng(1)
    g = random_graph(3, 6, rng)
    while not find_dipoles(g, 1):
        g = random_graph(3, 6, rng)
    ds = find_dipoles(g, 1)
    h = contract(g, ds[0])
    with pytest.raises(StaleDipoleError):
        contract(h, ds[0])


def test_creation_reusing_edge_rejected(melon3):
    with pytest.raises(CreationError):
        create(melon3, CreationSpec((2, 3), ((0, 0, 0), (0, 0, 0))))
    with pytest.raises(CreationError):
        create(melon3, CreationSpec((1, 2, 3), ((0, 0, 1),)))
    with pytest.raises(CreationError):
        create(melon3, CreationSpec((1, 2), ((0, 0, 0),)))


@given(graphs(), st.data())
def test_contract_then_create_restores(g, data):
    ks = [k for k in range(1, g.dimension + 1) if find_dipoles(g, k)]
    if not ks:
        return
    k = data.draw(st.sampled_from(ks))
    d = data.draw(st.sampled_from(find_dipoles(g, k)))
    smaller = contract(g, d)
    assert validate(smaller).ok
    assert is_isomorphic(create(smaller, inverse_spec(g, d)), g)


@given(graphs())
def test_routing(g):
    core, log = route_to_core(g)
    assert is_core(core)
    assert degree(core) == degree(g)
    assert conserved(core) == conserved(g)
    assert replay(g, log) == core


@given(graphs(), st.integers(0, 1000))
def test_random_policy_preserves_order_and_degree(g, seed):
    a, _ = route_to_core(g)
    b, log = route_to_core(g, "random", seed)
    assert is_core(b)
    assert b.order == a.order and degree(b) == degree(a)
    assert replay(g, log) == b


def test_supermelon_routes_to_itself(melon3):
    core, log = route_to_core(melon3)
    assert core == melon3 and log.steps == []
    check = is_melonic(melon3)
    assert check and check.removals == []


@pytest.mark.parametrize("seed", range(10))
def test_melonic_samples(seed):
    g = close(tree_to_graph(sample_uniform(3, 200, seed)))
    assert is_melonic(g)
    core, _ = route_to_core(g)
    assert core == supermelon(3)


@given(graphs(dims=(3, 4), max_n=6))
def test_melonic_iff_degree_zero(g):
    assert bool(is_melonic(g)) == (degree(g) == 0)


def test_non_melonic_four_vertex_core():
    found = None
    for a, b, c in product(permutations(range(2)), repeat=3):
        g = from_permutations([(0, 1), a, b, c])
        if g.is_connected() and is_core(g) and g != supermelon(3):
            found = g
            break
    assert found is not None
    assert not is_melonic(found)
    assert degree(found) > 0
