from math import comb, exp, log

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splitdrift.analytic import (
    _dependency_constant,
    _dependency_constant_horner,
    cc_bounds,
    classify_regime,
    clique_upper_bound,
    degree_pmf,
    degree_pmf_top,
    limit_density,
    mean_complete_subgraphs,
    moments,
    p_complete,
    pmf_moments_check,
    stein_chen_bound,
    variance_identity_gap,
)
from splitdrift.samplers import ModelParams


def test_moments_substitutions():
    m = moments(ModelParams(11, 1.0))
    assert m.mean_degree == pytest.approx(5.0)
    m = moments(ModelParams(3, 1.0))
    assert m.var_degree == pytest.approx(0.6)
    assert m.p_edge == pytest.approx(0.5)
    assert m.cov_shared == pytest.approx(1.0 / (4 * 5))
    assert m.cov_disjoint == pytest.approx(2.0 / (4 * 4 * 5))


def test_moments_r_zero_complete():
    m = moments(ModelParams(7, 0.0))
    assert m.p_edge == 1.0
    assert m.var_edges == 0.0
    assert m.mean_edges == 21.0
    with pytest.raises(ValueError):
        moments(ModelParams(1, 1.0))


def test_mean_complete_matches_direct_formula():
    p = ModelParams(20, 2.0)
    for k in (2, 3, 5, 20):
        direct = comb(20, k) * (1.0 / 3.0) ** (k - 1)
        assert mean_complete_subgraphs(p, k) == pytest.approx(direct, rel=1e-12)
    assert moments(p, complete_orders=(2,)).mean_complete[2] == pytest.approx(
        p.n * (p.n - 1) / (2 * (1 + p.r))
    )


def test_p_complete():
    assert p_complete(ModelParams(5, 0.0)) == 1.0
    assert p_complete(ModelParams(3, 1.0)) == pytest.approx(0.25)
    p = ModelParams(9, 2.5)
    assert p_complete(p) == pytest.approx(mean_complete_subgraphs(p, 9), rel=1e-12)


def test_degree_pmf_n2():
    t = degree_pmf(ModelParams(2, 1.0))
    assert t.probs == pytest.approx([0.5, 0.5])
    t = degree_pmf(ModelParams(2, 3.0))
    assert t.probs == pytest.approx([0.75, 0.25])


def test_degree_pmf_degenerate_cases():
    t = degree_pmf(ModelParams(1, 2.0))
    assert t.probs == pytest.approx([1.0])
    t = degree_pmf(ModelParams(6, 0.0))
    assert t.prob(5) == 1.0


def test_degree_pmf_top_gamma_ratio():
    for n, r in [(2, 1.0), (10, 0.3), (50, 7.0), (200, 40.0)]:
        t = degree_pmf(ModelParams(n, r))
        top = degree_pmf_top(ModelParams(n, r))
        assert t.prob(n - 1) == pytest.approx(top, rel=1e-10)


def test_pmf_moment_consistency_small_grid():
    for n in (2, 3, 10, 60):
        for r in (0.01, 0.5, 4.0, 100.0):
            p = ModelParams(n, r)
            t = degree_pmf(p)
            assert t.normalization_error <= 1e-12
            mean, var = pmf_moments_check(p)
            m = moments(p)
            assert mean == pytest.approx(m.mean_degree, rel=1e-8)
            assert var == pytest.approx(m.var_degree, rel=1e-8)


def test_limit_densities():
    # Beta(2, 1) reduces to 2x
    assert limit_density("beta", 0.5, 0.3) == pytest.approx(0.6)
    assert limit_density("beta", 0.5, 0.0) == 0.0
    assert limit_density("size-biased-exponential", 0.0, 0.0) == 0.0
    assert limit_density("size-biased-exponential", 0.0, 1.0) == pytest.approx(4 * exp(-2))
    assert limit_density("size-biased-geometric", 1.0, 1) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        limit_density("beta", 0.5, 1.5)
    with pytest.raises(ValueError):
        limit_density("size-biased-geometric", 1.0, 0)
    with pytest.raises(ValueError):
        limit_density("nope", 1.0, 1)


def test_beta_density_integrates_to_one():
    from scipy.integrate import quad

    for r in (0.3, 1.0, 4.0):
        val, _ = quad(lambda x: limit_density("beta", r, x), 0, 1)
        assert val == pytest.approx(1.0, rel=1e-6)


def test_regime_classification():
    assert classify_regime(10_000, 0.5).label == "dense"
    assert classify_regime(10_000, 1e6).label == "sparse"
    assert classify_regime(10_000, 100.0).label == "intermediate"
    assert classify_regime(10_000, 0.0).label == "complete"
    assert classify_regime(10_000, 1e-5).label == "complete-transition"
    assert classify_regime(10_000, 1e9).label == "empty-transition"
    lbl = classify_regime(100, 10.0)
    assert lbl.evidence["r/n"] == pytest.approx(0.1)


def test_clique_upper_bound_scan_and_monotonicity():
    p = ModelParams(100, 10.0)
    k = clique_upper_bound(p, tail=0.01)
    # independent log-space recomputation at k-1 and k
    def log_mean(kk):
        from scipy.special import gammaln

        return (
            gammaln(101) - gammaln(kk + 1) - gammaln(101 - kk) - (kk - 1) * log(11.0)
        )

    assert log_mean(k) <= log(0.01) < log_mean(k - 1)
    assert clique_upper_bound(ModelParams(100, 0.0)) == 101
    last = 101
    for r in (0.5, 2.0, 10.0, 100.0):
        cur = clique_upper_bound(ModelParams(100, r), tail=0.01)
        assert cur <= last
        last = cur


def test_cc_bounds_substitution():
    lower, upper = cc_bounds(ModelParams(10_000, 100.0))
    assert lower == pytest.approx(50.0)
    assert upper == pytest.approx(2.0 * 100.0 * log(10_000))


def test_stein_chen_values():
    lam, bound = stein_chen_bound(ModelParams(10, 100.0))
    assert lam == pytest.approx(90.0 / 202.0)
    assert bound > 0
    # the bound vanishes along r = n^1.5
    vals = [stein_chen_bound(ModelParams(n, n**1.5))[1] for n in (100, 1000, 10_000)]
    assert vals[0] > vals[1] > vals[2]


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 500), st.floats(0.0, 1e6, allow_nan=False))
def test_dependency_constant_two_evaluations(n, r):
    a = _dependency_constant(n, r)
    b = _dependency_constant_horner(n, r)
    assert b == pytest.approx(a, rel=1e-12)


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 400), st.floats(1e-6, 1e5, allow_nan=False))
def test_variance_identity(n, r):
    assert variance_identity_gap(ModelParams(n, r)) <= 1e-10
