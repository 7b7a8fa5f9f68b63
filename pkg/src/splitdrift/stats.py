"""Statistical validation: exact small-n stationary law, Monte Carlo
ensembles with analytic cross-checks, and distribution distances."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import sqrt
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components as _cc_dense
from scipy.stats import poisson as _poisson

from . import analytic
from .graph import LabeledGraph, count_complete_subgraphs, count_triangles_batch, pair_index
from .pmf import PmfTable
from .samplers import (
    ModelParams,
    sample_backward,
    sample_ctmc,
    sample_forward_batch,
)

# -- exact stationary law for tiny n ----------------------------------------


@dataclass(frozen=True)
class StationaryLaw:
    """Exact stationary distribution over all labeled graphs on n <= 4
    vertices, indexed by edge bitmask (lexicographic pair order)."""

    params: ModelParams
    pairs: tuple[tuple[int, int], ...]
    probs: np.ndarray

    def prob_mask(self, mask: int) -> float:
        return float(self.probs[mask])

    def graph_probability(self, g: LabeledGraph) -> float:
        return self.prob_mask(g.edge_mask())

    def edge_probability(self, pair: tuple[int, int] = (1, 2)) -> float:
        bit = _pair_bit(self.pairs, pair)
        masks = np.arange(self.probs.size)
        return float(self.probs[(masks >> bit) & 1 == 1].sum())

    def complete_probability(self) -> float:
        return float(self.probs[-1])

    def expected_edges(self) -> float:
        masks = np.arange(self.probs.size)
        counts = np.array([bin(m).count("1") for m in masks])
        return float(counts @ self.probs)

    def indicator_cov(self, e1: tuple[int, int], e2: tuple[int, int]) -> float:
        b1 = _pair_bit(self.pairs, e1)
        b2 = _pair_bit(self.pairs, e2)
        masks = np.arange(self.probs.size)
        i1 = ((masks >> b1) & 1).astype(float)
        i2 = ((masks >> b2) & 1).astype(float)
        return float((i1 * i2) @ self.probs - (i1 @ self.probs) * (i2 @ self.probs))


def _pair_bit(pairs, pair) -> int:
    i, j = min(pair), max(pair)
    return pairs.index((i, j))


def build_generator(params: ModelParams, rescaled: bool = False) -> np.ndarray:
    """Dense generator of the duplication/removal chain over all 2^C(n,2)
    labeled graphs.

    Plain clock: each vertex duplicates at rate 1 (its copy replaces a
    uniform other vertex, which inherits the closed neighborhood); each
    present edge vanishes at rate rho = 2r/(n-1).  `rescaled` speeds time up
    by (n-1)/2 (duplication rate 1/2 per ordered pair, removal rate r),
    which must leave the stationary law unchanged.
    """
    n = params.n
    if n > 4:
        raise ValueError("exact solve limited to n <= 4")
    if n < 2:
        raise ValueError("need n >= 2")
    pidx = pair_index(n)
    npairs = len(pidx)
    size = 1 << npairs
    dup_rate = 0.5 if rescaled else 1.0 / (n - 1)
    rem_rate = params.r if rescaled else params.rho
    q = np.zeros((size, size))
    for s in range(size):
        nbr = [set() for _ in range(n + 1)]
        for (i, j), b in pidx.items():
            if (s >> b) & 1:
                nbr[i].add(j)
                nbr[j].add(i)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                t = s
                for w in nbr[j]:
                    t &= ~(1 << pidx[(min(j, w), max(j, w))])
                for w in nbr[i] | {i}:
                    if w != j:
                        t |= 1 << pidx[(min(j, w), max(j, w))]
                q[s, t] += dup_rate
        for (i, j), b in pidx.items():
            if (s >> b) & 1:
                q[s, s ^ (1 << b)] += rem_rate
    np.fill_diagonal(q, 0.0)
    np.fill_diagonal(q, -q.sum(axis=1))
    return q


def exact_stationary_small_n(params: ModelParams, rescaled: bool = False) -> StationaryLaw:
    q = build_generator(params, rescaled=rescaled)
    size = q.shape[0]
    a = q.T.copy()
    a[-1, :] = 1.0
    b = np.zeros(size)
    b[-1] = 1.0
    probs = np.linalg.solve(a, b)
    if probs.min() < -1e-12 or abs(probs.sum() - 1.0) > 1e-12:
        raise AssertionError("stationary solve failed sanity checks")
    pairs = tuple(sorted(pair_index(params.n)))
    return StationaryLaw(params, pairs, probs)


# -- distances ---------------------------------------------------------------


def tv_distance(p: PmfTable, q: PmfTable) -> float:
    lo = min(p.support[0], q.support[0])
    hi = max(p.support[-1], q.support[-1])
    pa = np.zeros(hi - lo + 1)
    qa = np.zeros(hi - lo + 1)
    pa[p.support - lo] = p.probs
    qa[q.support - lo] = q.probs
    return 0.5 * float(np.abs(pa - qa).sum())


def poisson_table(lam: float, tail: float = 1e-9) -> tuple[PmfTable, float]:
    """Poisson(lam) truncated where the remaining tail mass < `tail`;
    returns (table, leftover mass).  The leftover is meant to be added to any
    distance computed against the table, as a conservative upper bound."""
    hi = int(_poisson.ppf(1.0 - tail, lam)) + 1 if lam > 0 else 1
    support = np.arange(hi + 1)
    probs = _poisson.pmf(support, lam)
    leftover = max(0.0, 1.0 - float(probs.sum()))
    probs = probs / probs.sum()
    return PmfTable(support, probs), leftover


def tv_vs_poisson(empirical: PmfTable, lam: float) -> float:
    table, leftover = poisson_table(lam)
    return tv_distance(empirical, table) + leftover


def ks_statistic(samples: Sequence[float], cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    x = np.sort(np.asarray(samples, dtype=np.float64))
    if x.size == 0:
        raise ValueError("need at least one sample")
    m = x.size
    f = np.asarray(cdf(x), dtype=np.float64)
    grid = np.arange(1, m + 1) / m
    return float(max(np.max(grid - f), np.max(f - (grid - 1.0 / m))))


# -- Monte Carlo ensemble ----------------------------------------------------


@dataclass
class EnsembleReport:
    params: ModelParams
    sampler: str
    replicates: int
    seed: int
    comparisons: list[dict] = field(default_factory=list)
    degree_hist: Optional[np.ndarray] = None
    edge_hist: Optional[np.ndarray] = None
    cc_values: Optional[np.ndarray] = None

    @property
    def passed(self) -> bool:
        return all(c["verdict"] != "fail" for c in self.comparisons)

    def to_json(self) -> str:
        doc = {
            "params": {"n": self.params.n, "r": self.params.r, "rho": self.params.rho},
            "sampler": self.sampler,
            "replicates": self.replicates,
            "seed": self.seed,
            "passed": self.passed,
            "comparisons": self.comparisons,
        }
        return json.dumps(doc, indent=2)

    def degree_hist_csv(self) -> str:
        if self.degree_hist is None:
            raise ValueError("no degree histogram collected")
        total = self.degree_hist.sum()
        table = analytic.degree_pmf(self.params)
        lines = ["value,count,empirical_prob,analytic_prob"]
        for k, cnt in enumerate(self.degree_hist):
            lines.append(f"{k},{int(cnt)},{float(cnt / total)!r},{table.prob(k)!r}")
        return "\n".join(lines) + "\n"

    def edge_hist_csv(self) -> str:
        if self.edge_hist is None:
            raise ValueError("no edge-count histogram collected")
        total = self.edge_hist.sum()
        lam, _ = analytic.stein_chen_bound(self.params)
        ptab, _ = poisson_table(lam)
        lines = ["value,count,empirical_prob,analytic_prob"]
        for k, cnt in enumerate(self.edge_hist):
            lines.append(f"{k},{int(cnt)},{float(cnt / total)!r},{ptab.prob(k)!r}")
        return "\n".join(lines) + "\n"


def _substream(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=[seed, index]))


def _zscore_comparison(name, analytic_value, values, z_cap):
    values = np.asarray(values, dtype=np.float64)
    b = values.size
    emp = float(values.mean())
    if b < 2:
        return {
            "quantity": name, "analytic": analytic_value, "empirical": emp,
            "stat": "z", "value": None, "threshold": z_cap, "verdict": "n/a",
        }
    se = float(values.std(ddof=1)) / sqrt(b)
    z = (emp - analytic_value) / se if se > 0 else 0.0
    return {
        "quantity": name, "analytic": analytic_value, "empirical": emp,
        "stat": "z", "value": z, "threshold": z_cap,
        "verdict": "pass" if abs(z) <= z_cap else "fail",
    }


def _variance_comparison(name, analytic_value, values, z_cap):
    values = np.asarray(values, dtype=np.float64)
    b = values.size
    if b < 2:
        return {
            "quantity": name, "analytic": analytic_value, "empirical": None,
            "stat": "z", "value": None, "threshold": z_cap, "verdict": "n/a",
        }
    v = float(values.var(ddof=1))
    centered = values - values.mean()
    m4 = float((centered**4).mean())
    se = sqrt(max(m4 - v * v, 0.0) / b)
    z = (v - analytic_value) / se if se > 0 else 0.0
    return {
        "quantity": name, "analytic": analytic_value, "empirical": v,
        "stat": "z", "value": z, "threshold": z_cap,
        "verdict": "pass" if abs(z) <= z_cap else "fail",
    }


def mc_ensemble(
    params: ModelParams,
    sampler: str = "forward",
    replicates: int = 10_000,
    seed: int = 0,
    subgraph_orders: Sequence[int] = (),
    compute_cc: bool = False,
    poisson_check: Optional[bool] = None,
    degree_tv_cap: float = 0.01,
    z_cap: float = 3.0,
    cc_slack: float = 0.5,
    cc_coverage: float = 0.99,
    ctmc_events: Optional[int] = None,
) -> EnsembleReport:
    """Sample `replicates` graphs, compare empirical invariants against the
    closed forms, and return a deterministic report (same inputs -> same
    bytes).  Replicate j / chunk j uses the independent substream
    SeedSequence([seed, j])."""
    if replicates < 1:
        raise ValueError("need replicates >= 1")
    n = params.n
    orders = sorted(set(int(k) for k in subgraph_orders))
    edges_b = np.empty(replicates, dtype=np.int64)
    deg1_b = np.empty(replicates, dtype=np.int64)
    cc_b = np.empty(replicates, dtype=np.int64) if compute_cc else None
    order_b = {k: np.empty(replicates, dtype=np.int64) for k in orders}
    degree_counts = np.zeros(n, dtype=np.int64)
    edge_counts = np.zeros(n * (n - 1) // 2 + 1, dtype=np.int64)

    if sampler == "forward":
        chunk = max(1, (1 << 25) // (8 * n * n))
        done = 0
        ci = 0
        while done < replicates:
            b = min(chunk, replicates - done)
            adj = sample_forward_batch(params, b, _substream(seed, ci))
            degs = adj.sum(axis=2)
            edges_b[done : done + b] = degs.sum(axis=1) // 2
            deg1_b[done : done + b] = degs[:, 0]
            degree_counts += np.bincount(degs.ravel(), minlength=n)
            for k in orders:
                if k == 3:
                    order_b[3][done : done + b] = count_triangles_batch(adj)
                else:
                    for t in range(b):
                        g = LabeledGraph.from_adjacency(adj[t])
                        order_b[k][done + t] = count_complete_subgraphs(g, k)
            if compute_cc:
                for t in range(b):
                    ncc, _ = _cc_dense(adj[t].astype(np.int8), directed=False)
                    cc_b[done + t] = ncc
            done += b
            ci += 1
    elif sampler in ("backward", "ctmc"):
        if sampler == "ctmc":
            events = ctmc_events
            if events is None:
                # order-n forgetting time at the uniformization rate n(1 + r)
                events = int(20 * n * n * (1.0 + params.r))
            initial = LabeledGraph.complete(n)
        for j in range(replicates):
            rng = _substream(seed, j)
            if sampler == "backward":
                g = sample_backward(params, rng)
            else:
                g = sample_ctmc(params, events, initial, rng)
            degs = g.degrees()
            edges_b[j] = g.m
            deg1_b[j] = degs[0]
            degree_counts += np.bincount(degs, minlength=n)
            for k in orders:
                order_b[k][j] = count_complete_subgraphs(g, k)
            if compute_cc:
                from .graph import connected_components

                cc_b[j] = connected_components(g)
    else:
        raise ValueError(f"unknown sampler {sampler!r}")

    np.add.at(edge_counts, np.minimum(edges_b, edge_counts.size - 1), 1)

    mom = analytic.moments(params, complete_orders=orders)
    comparisons = [
        _zscore_comparison("mean_edges", mom.mean_edges, edges_b, z_cap),
        _zscore_comparison("mean_degree", mom.mean_degree, deg1_b, z_cap),
        _variance_comparison("var_degree", mom.var_degree, deg1_b, z_cap),
    ]
    for k in orders:
        comparisons.append(
            _zscore_comparison(
                f"mean_complete_{k}", mom.mean_complete[k], order_b[k], z_cap
            )
        )

    emp_deg = PmfTable(np.arange(n), degree_counts / degree_counts.sum())
    deg_pmf = analytic.degree_pmf(params)
    tv = tv_distance(emp_deg, deg_pmf)
    # Sampling floor for the plug-in TV estimate: E|phat_k - p_k| is about
    # sqrt(2 p_k (1-p_k) / (pi N)); degrees within one graph are correlated,
    # so use the replicate count (not n * replicates) as the effective N.
    pq = deg_pmf.probs * (1.0 - deg_pmf.probs)
    tv_floor = 0.5 * float(np.sqrt(2.0 * pq / (np.pi * replicates)).sum())
    tv_threshold = max(degree_tv_cap, 3.0 * tv_floor)
    comparisons.append(
        {
            "quantity": "degree_tv", "analytic": 0.0, "empirical": tv,
            "stat": "tv", "value": tv, "threshold": tv_threshold,
            "verdict": "pass" if tv <= tv_threshold else "fail",
        }
    )

    if compute_cc:
        lower, upper = analytic.cc_bounds(params)
        lo_ok = lower * (1.0 - cc_slack)
        hi_ok = upper * (1.0 + cc_slack)
        coverage = float(np.mean((cc_b >= lo_ok) & (cc_b <= hi_ok)))
        comparisons.append(
            {
                "quantity": "cc_coverage",
                "analytic": [lo_ok, hi_ok],
                "empirical": coverage,
                "stat": "coverage", "value": coverage, "threshold": cc_coverage,
                "verdict": "pass" if coverage >= cc_coverage else "fail",
            }
        )
        ratio = float(cc_b.mean() / params.r) if params.r > 0 else None
        comparisons.append(
            {
                "quantity": "cc_over_r", "analytic": None, "empirical": ratio,
                "stat": "ratio", "value": ratio, "threshold": None,
                "verdict": "info",
            }
        )

    if poisson_check is None:
        poisson_check = analytic.classify_regime(n, params.r).label in (
            "sparse",
            "empty-transition",
        )
    if poisson_check:
        lam, bound = analytic.stein_chen_bound(params)
        emp_edges = PmfTable(
            np.arange(edge_counts.size), edge_counts / edge_counts.sum()
        )
        tvp = tv_vs_poisson(emp_edges, lam)
        se = _tv_standard_error(emp_edges, lam, replicates)
        threshold = bound + 3.0 * se
        comparisons.append(
            {
                "quantity": "poisson_edges_tv", "analytic": bound,
                "empirical": tvp, "stat": "tv", "value": tvp,
                "threshold": threshold,
                "verdict": "pass" if tvp <= threshold else "fail",
            }
        )

    return EnsembleReport(
        params=params,
        sampler=sampler,
        replicates=replicates,
        seed=seed,
        comparisons=comparisons,
        degree_hist=degree_counts,
        edge_hist=edge_counts,
        cc_values=cc_b,
    )


def _tv_standard_error(empirical: PmfTable, lam: float, m: int) -> float:
    """Delta-method standard error of the plug-in TV estimate against
    Poisson(lam): TV = (1/2) sum s_k (phat_k - q_k) for fixed signs s_k."""
    table, _ = poisson_table(lam)
    lo = min(empirical.support[0], table.support[0])
    hi = max(empirical.support[-1], table.support[-1])
    pa = np.zeros(hi - lo + 1)
    qa = np.zeros(hi - lo + 1)
    pa[empirical.support - lo] = empirical.probs
    qa[table.support - lo] = table.probs
    s = np.sign(pa - qa)
    delta = float(s @ pa)
    return 0.5 * sqrt(max(1.0 - delta * delta, 0.0) / m)
