import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splitdrift.graph import (
    LabeledGraph,
    WorkBudgetExceeded,
    clique_number,
    connected_components,
    count_complete_subgraphs,
    count_triangles_batch,
    greedy_clique_lower_bound,
    read_edgelist,
    summarize,
    write_edgelist,
)


def graph_from_mask(n: int, mask: int) -> LabeledGraph:
    edges = []
    t = 0
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if (mask >> t) & 1:
                edges.append((i, j))
            t += 1
    return LabeledGraph.from_edges(n, edges)


small_graphs = st.integers(2, 7).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(0, 2 ** (n * (n - 1) // 2) - 1))
).map(lambda t: graph_from_mask(*t))


def test_complete_graph_summary():
    st_ = summarize(LabeledGraph.complete(4), subgraph_orders=(3,))
    assert st_.edges == 6
    assert list(st_.degrees) == [3, 3, 3, 3]
    assert st_.num_components == 1
    assert st_.clique_number == 4
    assert st_.complete_counts[3] == 4


def test_empty_graph_summary():
    st_ = summarize(LabeledGraph.empty(5), subgraph_orders=(3,))
    assert st_.edges == 0
    assert st_.num_components == 5
    assert st_.clique_number == 1
    assert st_.complete_counts[3] == 0


def test_path_summary():
    g = LabeledGraph.from_edges(3, [(1, 2), (2, 3)])
    st_ = summarize(g, subgraph_orders=(3,))
    assert st_.edges == 2
    assert st_.num_components == 1
    assert st_.clique_number == 2
    assert st_.complete_counts[3] == 0


def test_connected_components_examples():
    assert connected_components(LabeledGraph.empty(3)) == 3
    assert connected_components(LabeledGraph.complete(3)) == 1
    assert connected_components(LabeledGraph.from_edges(4, [(1, 2)])) == 3


def test_summarize_rejects_bad_orders():
    with pytest.raises(ValueError):
        summarize(LabeledGraph.empty(3), subgraph_orders=(4,))


def test_clique_number_over_limit_reports_lower_bound():
    st_ = summarize(LabeledGraph.complete(5), clique_limit=3)
    assert st_.clique_number is None
    assert st_.clique_lower_bound == 5


def test_has_edge_and_validation():
    g = LabeledGraph.from_edges(4, [(2, 4), (1, 3)])
    assert g.has_edge(2, 4) and g.has_edge(4, 2)
    assert not g.has_edge(1, 2)
    assert not g.has_edge(3, 3)
    with pytest.raises(ValueError):
        LabeledGraph(3, np.array([[1, 4]]))
    with pytest.raises(ValueError):
        LabeledGraph(3, np.array([[2, 2]]))


def test_edgelist_roundtrip_and_format():
    g = LabeledGraph.from_edges(5, [(1, 2), (3, 5), (2, 4)])
    buf = io.StringIO()
    write_edgelist(g, buf)
    assert buf.getvalue() == "5 3\n1 2\n2 4\n3 5\n"
    g2 = read_edgelist(io.StringIO(buf.getvalue()))
    assert g2.n == 5
    assert np.array_equal(g2.edge_array, g.edge_array)
    g3 = read_edgelist(io.StringIO("4 0\n"))
    assert g3.n == 4 and g3.m == 0


def test_count_complete_subgraphs_complete_graph():
    g = LabeledGraph.complete(5)
    assert count_complete_subgraphs(g, 3) == 10
    assert count_complete_subgraphs(g, 4) == 5
    assert count_complete_subgraphs(g, 5) == 1


def test_count_complete_subgraphs_budget():
    with pytest.raises(WorkBudgetExceeded):
        count_complete_subgraphs(LabeledGraph.complete(8), 4, budget=3)


def test_triangle_batch_matches_enumeration():
    rng = np.random.default_rng(0)
    adjs = []
    expected = []
    for _ in range(20):
        n = 8
        a = rng.random((n, n)) < 0.4
        a = np.triu(a, 1)
        a = a | a.T
        adjs.append(a)
        expected.append(count_complete_subgraphs(LabeledGraph.from_adjacency(a), 3))
    got = count_triangles_batch(np.array(adjs))
    assert list(got) == expected


@settings(max_examples=60, deadline=None)
@given(small_graphs)
def test_degree_sum_and_cc_inequality(g):
    st_ = summarize(g)
    assert st_.degrees.sum() == 2 * st_.edges
    assert st_.num_components >= g.n - st_.edges
    assert 1 <= st_.num_components <= g.n


@settings(max_examples=40, deadline=None)
@given(small_graphs)
def test_complete_count_monotone_and_clique_consistency(g):
    counts = [count_complete_subgraphs(g, k) for k in range(2, g.n + 1)]
    # a zero count at order k forces zero at every larger order
    seen_zero = False
    for c in counts:
        if seen_zero:
            assert c == 0
        seen_zero = seen_zero or c == 0
    kappa = clique_number(g)
    largest = max([1] + [k for k, c in zip(range(2, g.n + 1), counts) if c > 0])
    assert kappa == largest
    assert greedy_clique_lower_bound(g) <= kappa


@settings(max_examples=30, deadline=None)
@given(small_graphs, st.randoms(use_true_random=False))
def test_relabel_preserves_invariants(g, rnd):
    perm = list(range(1, g.n + 1))
    rnd.shuffle(perm)
    h = g.relabel(np.array(perm))
    assert h.m == g.m
    assert sorted(h.degrees()) == sorted(g.degrees())
    assert connected_components(h) == connected_components(g)
    assert clique_number(h) == clique_number(g)
