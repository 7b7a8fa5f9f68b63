import io
from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splitdrift.genealogy import (
    dump_epochs,
    expected_length_moments,
    leaf_layout,
    pair_coalescence_time,
    sample_kingman,
    total_branch_length,
)


def test_n1_has_no_epochs():
    g = sample_kingman(1, np.random.default_rng(0))
    assert g.num_epochs() == 0
    assert total_branch_length(g) == 0.0


def test_n2_single_epoch():
    rng = np.random.default_rng(1)
    g = sample_kingman(2, rng)
    assert g.num_epochs() == 1
    assert tuple(g.merges[0]) == (1, 2)
    assert total_branch_length(g) == pytest.approx(2.0 * g.durations[0])
    assert pair_coalescence_time(g, 1, 2) == pytest.approx(g.durations[0])


def test_first_epoch_rate_n3():
    rng = np.random.default_rng(2)
    m = 30_000
    draws = np.array([sample_kingman(3, rng).durations[0] for _ in range(m)])
    se = draws.std(ddof=1) / sqrt(m)
    assert abs(draws.mean() - 1.0 / 3.0) <= 3.0 * se


def test_branch_length_moments_monte_carlo():
    rng = np.random.default_rng(3)
    m = 30_000
    for n in (3, 10):
        ls = np.array([total_branch_length(sample_kingman(n, rng)) for _ in range(m)])
        mean_t, var_t = expected_length_moments(n)
        se = ls.std(ddof=1) / sqrt(m)
        assert abs(ls.mean() - mean_t) <= 3.0 * se
        v = ls.var(ddof=1)
        centered = ls - ls.mean()
        se_v = sqrt(max((centered**4).mean() - v * v, 0.0) / m)
        assert abs(v - var_t) <= 3.5 * se_v


def test_pair_time_exponential_unit_mean():
    rng = np.random.default_rng(4)
    m = 30_000
    ts = np.array([pair_coalescence_time(sample_kingman(5, rng), 2, 4) for _ in range(m)])
    se = ts.std(ddof=1) / sqrt(m)
    assert abs(ts.mean() - 1.0) <= 3.0 * se


def test_pair_time_validation_and_symmetry():
    g = sample_kingman(6, np.random.default_rng(5))
    with pytest.raises(ValueError):
        pair_coalescence_time(g, 3, 3)
    for i, j in [(1, 2), (2, 5), (4, 6)]:
        assert pair_coalescence_time(g, i, j) == pair_coalescence_time(g, j, i)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 30), st.integers(0, 10_000))
def test_genealogy_structure(n, seed):
    g = sample_kingman(n, np.random.default_rng(seed))
    assert g.num_epochs() == n - 1
    # canonical merge records: a < b, and a block id can only merge while alive
    alive = set(range(1, n + 1))
    for a, b in g.merges:
        assert a < b
        assert a in alive and b in alive
        alive.discard(b)
    assert alive == {min(alive)}
    assert np.all(g.durations > 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 40), st.integers(0, 10_000))
def test_leaf_layout_intervals(n, seed):
    g = sample_kingman(n, np.random.default_rng(seed))
    lay = leaf_layout(g)
    assert sorted(lay.pos_to_leaf) == list(range(n))
    # every node's interval is the disjoint union of its children's intervals
    for e in range(n - 1):
        node = n + e
        c0, c1 = lay.children[e]
        ivals = sorted([(lay.lo[c0], lay.hi[c0]), (lay.lo[c1], lay.hi[c1])])
        assert ivals[0][1] == ivals[1][0]  # adjacent
        assert lay.lo[node] == ivals[0][0] and lay.hi[node] == ivals[1][1]
    root = 2 * n - 2
    assert lay.lo[root] == 0 and lay.hi[root] == n
    # interval membership matches coalescent block membership at each level
    leaves_of = {v: {v} for v in range(n)}
    for e in range(n - 1):
        c0, c1 = lay.children[e]
        leaves_of[n + e] = leaves_of[c0] | leaves_of[c1]
        got = set(lay.pos_to_leaf[lay.lo[n + e] : lay.hi[n + e]])
        assert got == leaves_of[n + e]


def test_dump_epochs_format():
    g = sample_kingman(4, np.random.default_rng(9))
    buf = io.StringIO()
    dump_epochs(g, buf)
    lines = buf.getvalue().strip().split("\n")
    assert len(lines) == 3
    for line, (d, (a, b)) in zip(lines, zip(g.durations, g.merges)):
        parts = line.split()
        assert float(parts[0]) == d
        assert (int(parts[1]), int(parts[2])) == (a, b)
