import math
from fractions import Fraction

import numpy as np
import pytest

from colorgraph.dimensions import (asymptotic_prefactor, ball_distances, critical_coupling, effective_exponents,
                                   first_return_series, hausdorff_estimate, log_scaled_count,
                                   loglog_fit, offset_power_fit, pooled_even, return_probabilities,
                                   return_series, spectral_estimate, spectral_exponent,
                                   susceptibility_check, transfer_first_passage, transfer_returns,
                                   stated_prefactor, walk_return_mc)
from colorgraph.graph import OPEN, ColoredGraph
from colorgraph.melonic import count_melonic, sample_uniform, tree_from_children, tree_to_graph


def single_melon(D=3):
    return tree_to_graph(tree_from_children(D, [None] * (D + 1)))


def test_critical_coupling():
    assert critical_coupling(3) == Fraction(27, 256)
    assert float(critical_coupling(3)) == 0.10546875


def test_log_scaled_count_is_exact():
    p = 40
    zc = critical_coupling(3)
    exact = Fraction(count_melonic(3, p)) * zc ** p
    assert log_scaled_count(3, p) == pytest.approx(np.log(float(exact)), rel=1e-12)


def test_short_susceptibility_fit():
    fit = susceptibility_check(3, 100, 200)
    assert fit.exponent == pytest.approx(-1.5, abs=0.02)


def test_prefactor_matches_stirling():
    # the measured amplitude converges to the Stirling constant, not the published one
    fit = susceptibility_check(3, 900, 1000)
    measured = fit.extra["prefactor_at_p_max"]
    assert measured == pytest.approx(asymptotic_prefactor(3), rel=0.01)
    assert measured * math.e == pytest.approx(stated_prefactor(3), rel=0.01)


def test_exponent_arithmetic():
    assert spectral_exponent(Fraction(4, 3), Fraction(3, 2), Fraction(1, 2)) == -1


def test_two_boundary_vertices_alternate():
    # the bare line I - O: every walk bounces between the two ends
    g = ColoredGraph(3, 1, 1, ((0, 0, 0),), OPEN, ((0, 0),))
    p, err = walk_return_mc(g, "I", 10, 100, 0)
    assert p.tolist() == [1.0, 0.0] * 5 + [1.0]
    assert not err.any()


def test_melon_first_return():
    g = single_melon()
    first = transfer_first_passage(g, 2)
    assert first[0][0][2] == Fraction(1, 4)
    p, _ = walk_return_mc(g, "I", 4, 1000, 1)
    assert p[0] == 1.0 and p[1] == 0.0


def test_melon_series_closed_form():
    T = 30
    s = first_return_series(tree_from_children(3, [None] * 4), T)
    coeffs = s.coefficients(0, 0)
    for k in range(T + 1):
        expected = Fraction(1, 4) * Fraction(9, 16) ** (k // 2 - 1) if k % 2 == 0 and k >= 2 else 0
        assert coeffs[k] == expected


def test_leaf_series():
    s = first_return_series(tree_from_children(3, None), 10)
    assert s.coefficients(0, 1)[1] == 1 and s.coefficients(0, 0) == [0] * 11
    full = return_series(s)
    assert full.coefficients(0, 0) == [1 if k % 2 == 0 else 0 for k in range(11)]


@pytest.mark.parametrize("seed", range(8))
def test_series_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    t = sample_uniform(3, int(rng.integers(1, 12)), rng)
    g = tree_to_graph(t)
    T = 24
    first = first_return_series(t, T)
    full = return_series(first)
    brute_first = transfer_first_passage(g, T)
    brute_full = transfer_returns(g, T)
    for i in range(2):
        for j in range(2):
            assert first.coefficients(i, j) == brute_first[i][j]
            assert full.coefficients(i, j) == brute_full[i][j]


def test_float_series_close_to_exact():
    t = sample_uniform(3, 10, 0)
    exact = first_return_series(t, 30, exact=True).coefficients(0, 0)
    approx = first_return_series(t, 30, exact=False).coefficients(0, 0)
    assert np.allclose([float(x) for x in exact], approx, rtol=1e-12, atol=1e-15)


def test_return_probabilities_match_series():
    t = sample_uniform(3, 15, 3)
    g = tree_to_graph(t)
    exact = return_series(first_return_series(t, 40)).coefficients(0, 0)
    assert np.allclose(return_probabilities(g, "I", 40), [float(x) for x in exact])


def test_finite_graph_saturates():
    P = return_probabilities(single_melon(), "I", 400)
    ts, pooled = pooled_even(P)
    assert pooled[-1] == pytest.approx(pooled[-2], rel=1e-9)
    assert pooled[-1] > 0
    assert abs(effective_exponents(ts, pooled)[-1][1]) < 1e-6


def test_spectral_small_run():
    fit = spectral_estimate(3, 300, (10, 60), 6, seed=1)
    assert fit.extra["odd_time_max"] == 0.0
    assert 0.5 < fit.extra["spectral_dimension"] < 2.5
    again = spectral_estimate(3, 300, (10, 60), 6, seed=1, jobs=2)
    assert again.to_dict() == fit.to_dict()


def test_spectral_window_warning():
    fit = spectral_estimate(3, 30, (10, 60), 2, seed=0)
    assert "warning" in fit.extra


def test_mc_walks_agree_with_exact():
    g = tree_to_graph(sample_uniform(3, 50, 2))
    exact = return_probabilities(g, "I", 20)
    p, err = walk_return_mc(g, "I", 20, 20000, 5)
    assert np.all(np.abs(p - exact) <= 5 * err + 1e-12)


def test_single_node_distance():
    t = sample_uniform(3, 1, 0)
    assert ball_distances(t, [0]).tolist() == [[0]]


def test_hausdorff_small_run_is_reproducible():
    a = hausdorff_estimate(3, [32, 64, 128, 256], 8, seed=4, model="power")
    b = hausdorff_estimate(3, [32, 64, 128, 256], 8, seed=4, model="power", jobs=2)
    assert a.to_dict() == b.to_dict()
    assert 0.2 < a.exponent < 0.8


def test_loglog_fit_recovers_power():
    x = np.array([10, 20, 40, 80, 160])
    fit = loglog_fit(x, 3.0 * x ** -0.75)
    assert fit.exponent == pytest.approx(-0.75)
    assert fit.intercept == pytest.approx(np.log(3.0))


def test_offset_fit_recovers_parameters():
    x = np.array([2.0 ** k for k in range(6, 15)])
    fit = offset_power_fit(x, 0.2 * x ** 0.5 + 1.5)
    assert fit.exponent == pytest.approx(0.5, abs=1e-6)
    assert fit.extra["offset"] == pytest.approx(1.5, abs=1e-4)
