import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import beta_piecewise, yule_size_pmf
from pdgraph.theory import (
    DomainError,
    Regime,
    beta_k,
    cesaro_ck,
    classify_regime,
    clique_extinct,
    clique_rate,
    ef0_series,
    expected_binomial_moments,
    expected_degree_limit,
    expected_degree_t,
    fplus_exponent,
    g_func,
    g_prime,
    gamma,
    gamma_ratio,
    graph_size_pmf,
    martingale_exponent,
    p_star,
    sweep_row,
    thresholds,
    z_survival_series,
)


def test_g_domain():
    for p in (0.0, 1.0, -0.1):
        with pytest.raises(DomainError):
            g_func(p, 0.1, 1.0)
    assert g_func(0.5, 0.2, 1.0) == pytest.approx(0.2)
    assert g_func(0.5, 0.2, 0.0) == 0.0


def test_classify_examples():
    rep = classify_regime(0.5, 0.0)
    assert rep.regime is Regime.SLOW_ISOLATION
    assert rep.gamma == pytest.approx(1.3863, abs=1e-4)
    assert classify_regime(0.3, 0.5).regime is Regime.FAST_ISOLATION
    assert classify_regime(0.8, 0.05).regime is Regime.SUPERCRITICAL
    assert classify_regime(0.5, 0.5).gamma is None
    d = rep.to_dict()
    assert d["regime"] == "SLOW_ISOLATION" and len(d["thresholds"]) == 2


def test_boundaries_are_inclusive():
    p = 0.6
    upper, lower = thresholds(p)
    assert classify_regime(p, upper).regime is Regime.FAST_ISOLATION
    assert classify_regime(p, lower).regime is Regime.SLOW_ISOLATION


def test_boundaries_at_zero_deletion():
    ps = p_star()
    assert abs(ps * math.exp(ps) - 1) <= 1e-12
    assert ps == pytest.approx(0.567143, abs=1e-6)
    upper, _ = thresholds(1 / math.e)
    _, lower = thresholds(ps)
    assert upper == pytest.approx(0.0, abs=1e-15)
    assert lower == pytest.approx(0.0, abs=1e-12)
    assert classify_regime(0.36, 0.0).regime is Regime.FAST_ISOLATION
    assert classify_regime(0.37, 0.0).regime is Regime.SLOW_ISOLATION
    assert classify_regime(0.56, 0.0).regime is Regime.SLOW_ISOLATION
    assert classify_regime(0.57, 0.0).regime is Regime.SUPERCRITICAL


@settings(max_examples=300, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(0.0, 2.0), st.integers(2, 30))
def test_beta_matches_piecewise_and_decreases(p, delta, k):
    assert beta_k(p, delta, k) == pytest.approx(beta_piecewise(p, delta, k), abs=1e-12)
    assert beta_k(p, delta, k) <= beta_k(p, delta, k - 1) + 1e-12


@pytest.mark.parametrize("p,delta", [(0.5, 0.0), (0.6, 0.2), (0.7, 0.4), (0.45, 0.05)])
def test_xi_is_the_maximiser(p, delta):
    rep = classify_regime(p, delta)
    assert rep.regime is Regime.SLOW_ISOLATION
    h = 1e-6
    fd = (g_func(p, delta, rep.xi + h) - g_func(p, delta, rep.xi - h)) / (2 * h)
    assert abs(fd) < 1e-9
    assert abs(g_prime(p, delta, rep.xi)) < 1e-12
    gam = gamma(p, delta)
    assert rep.g_at_xi == pytest.approx(1 - (1 + math.log(gam)) / gam, abs=1e-12)
    assert rep.fplus_exponent == pytest.approx(rep.g_at_xi, abs=1e-12)


@pytest.mark.parametrize("p", [0.4, 0.5, 0.6, 0.8, 0.95])
def test_fplus_exponent_continuous_at_boundary(p):
    upper, _ = thresholds(p)
    left = fplus_exponent(p, upper - 1e-13)
    right = fplus_exponent(p, upper)
    assert abs(left - right) <= 1e-10
    lower = thresholds(p)[1]
    if lower > 0.01:
        assert fplus_exponent(p, lower - 0.01) is None


@pytest.mark.parametrize("p", [0.4, 0.5, 0.6, 0.8])
def test_c1_vanishes_on_critical_line(p):
    upper, _ = thresholds(p)
    assert abs(cesaro_ck(p, upper, 1)) <= 1e-12
    assert cesaro_ck(p, upper - 0.05, 1) > 0
    with pytest.raises(DomainError):
        cesaro_ck(0.3, 0.5, 1)


def test_clique_rate_and_extinction():
    assert clique_rate(0.5, 0.3, 2) == pytest.approx(0.7)
    assert clique_extinct(0.5, 1.0, 2)
    assert not clique_extinct(0.5, 0.99, 2)
    assert clique_extinct(0.5, 0.25, 3)
    with pytest.raises(DomainError):
        clique_rate(0.5, 0.3, 1)


def test_ef0_series_values_and_consistency():
    assert ef0_series(0.8, 0.05, [1.0]) == pytest.approx(0.34143, abs=5e-6)
    # star-3: F(0) puts 3/4 on degree 1 and 1/4 on degree 3
    b0 = [1.5, 0.75, 0.25]
    via_z = 1 - (0.75 * z_survival_series(0.8, 0.05, 0.8, 1) + 0.25 * z_survival_series(0.8, 0.05, 0.8, 3))
    assert abs(ef0_series(0.8, 0.05, b0) - via_z) <= 1e-12
    with pytest.raises(DomainError):
        ef0_series(0.5, 0.2, [1.0])
    with pytest.raises(DomainError):
        z_survival_series(0.5, 0.2, 0.5, 1)


def test_ef0_small_near_full_copy():
    assert ef0_series(0.99, 0.0, [1.0]) < 0.1


def test_expected_degree_values():
    assert expected_degree_t(1, 0.6, 0.2, 3, 0.0) == 1.0
    assert expected_degree_t(1, 0.6, 0.2, 3, 2.0) == pytest.approx(1 + (1 - math.exp(-2)) * 0.2)
    assert expected_degree_t(1, 0.6, 0.2, 3, 2.0) == pytest.approx(1.17293, abs=1e-5)
    assert expected_degree_limit(1, 0.6, 3) == pytest.approx(1.2)
    raw = expected_degree_t(2, 0.6, 0.2, 3, 1.0, normalized=False)
    assert raw == pytest.approx(expected_degree_t(2, 0.6, 0.2, 3, 1.0) * math.exp(0.4))


def test_gamma_ratio():
    assert gamma_ratio(7, 1) == 7
    assert gamma_ratio(7, 0) == 1
    assert gamma_ratio(5, 2) == 30
    assert gamma_ratio(4, 0.5) == pytest.approx(math.gamma(4.5) / math.gamma(4))
    assert gamma_ratio(4, -2) == pytest.approx(1 / 6)
    with pytest.raises(DomainError):
        gamma_ratio(3, -3)


@pytest.mark.parametrize("n0,t", [(2, 1.0), (3, 0.5), (1, 2.0)])
def test_graph_size_pmf_matches_forward_equation(n0, t):
    oracle = yule_size_pmf(n0, t)
    for m in range(n0 + 1, n0 + 30):
        assert graph_size_pmf(n0, t, m) == pytest.approx(oracle[m - 1], abs=1e-12)
    assert graph_size_pmf(n0, t, n0 + 1) == pytest.approx(math.exp(-t * (n0 + 1)))
    assert graph_size_pmf(n0, 0.0, n0 + 1) == 1.0


def test_expected_binomial_moments():
    p, delta = 0.5, 0.2
    b = expected_binomial_moments(p, delta, [1.0, 0.0], 2.0)
    assert b[0] == pytest.approx(math.exp(-2.0 * g_func(p, delta, 1.0)))
    # p = 0.5, delta = 0: E[B_2] = 2 (e^{t/4} - 1) from the edge
    b = expected_binomial_moments(0.5, 0.0, [1.0, 0.0], 3.0)
    assert b[1] == pytest.approx(2 * (math.exp(0.75) - 1))
    assert np.allclose(expected_binomial_moments(p, delta, [1.0, 2.0, 3.0], 0.0), [1, 2, 3])


def test_martingale_exponents():
    assert martingale_exponent("B", 0.5, 0.2) == pytest.approx(-0.2)
    assert martingale_exponent("C", 0.5, 0.3, k=2) == pytest.approx(1 - 1 - 0.3)
    assert martingale_exponent("D", 0.6, 0.2) == pytest.approx(-0.6)
    assert martingale_exponent("size", 0.6, 0.2, r=2.5) == 2.5
    with pytest.raises(DomainError):
        martingale_exponent("B", 0.5, 0.2, k=2)
    with pytest.raises(DomainError):
        martingale_exponent("Q", 0.5, 0.2)


def test_sweep_row():
    row = sweep_row(0.5, 0.0, 3)
    assert row["regime"] == "SLOW_ISOLATION"
    assert set(row) >= {"beta_1", "beta_2", "beta_3", "clique_rate_2", "clique_rate_3"}
