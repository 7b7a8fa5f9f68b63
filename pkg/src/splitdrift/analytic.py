"""Closed-form quantities for G(n, r): moments, the degree pmf, limit
densities, regime classification and the Poisson-approximation bound.

Everything involving binomials or long products is evaluated in log space
(log-gamma) so that n ~ 10^4 with r up to n^2 stays finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, exp, expm1, log, log1p

import numpy as np
from scipy.special import betaln, gammaln

from .pmf import PmfTable
from .samplers import ModelParams


@dataclass(frozen=True)
class MomentSet:
    p_edge: float
    var_edge_indicator: float
    cov_shared: float
    cov_disjoint: float
    mean_degree: float
    var_degree: float
    cov_degree: float
    mean_edges: float
    var_edges: float
    mean_complete: dict[int, float] = field(default_factory=dict)


def moments(params: ModelParams, complete_orders=None) -> MomentSet:
    n, r = params.n, params.r
    if n < 2:
        raise ValueError("moments need n >= 2")
    if complete_orders is None:
        complete_orders = (3,) if n >= 3 else (2,)
    c1 = 1.0 + r
    p = 1.0 / c1
    mean_complete = {
        int(k): mean_complete_subgraphs(params, int(k)) for k in complete_orders
    }
    return MomentSet(
        p_edge=p,
        var_edge_indicator=r / c1**2,
        cov_shared=r / (c1**2 * (3.0 + 2.0 * r)),
        cov_disjoint=2.0 * r / (c1**2 * (3.0 + r) * (3.0 + 2.0 * r)),
        mean_degree=(n - 1) / c1,
        var_degree=r * (n - 1) * (1.0 + 2.0 * r + n) / (c1**2 * (3.0 + 2.0 * r)),
        cov_degree=r
        / c1**2
        * (
            1.0
            + 3.0 * (n - 2) / (3.0 + 2.0 * r)
            + 2.0 * (n - 2) * (n - 3) / ((3.0 + r) * (3.0 + 2.0 * r))
        ),
        mean_edges=n * (n - 1) / (2.0 * c1),
        var_edges=r
        * n
        * (n - 1)
        * (n**2 + 2.0 * r**2 + 2.0 * n * r + n + 5.0 * r + 3.0)
        / (2.0 * c1**2 * (3.0 + r) * (3.0 + 2.0 * r)),
        mean_complete=mean_complete,
    )


def mean_complete_subgraphs(params: ModelParams, k: int) -> float:
    """E[number of complete subgraphs of order k] = C(n,k) (1+r)^{-(k-1)}."""
    n, r = params.n, params.r
    if not 1 <= k <= n:
        raise ValueError("k out of range")
    return exp(_log_binom(n, k) - (k - 1) * log1p(r))


def _log_binom(n: int, k: int) -> float:
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def p_complete(params: ModelParams) -> float:
    """Stationary probability that the graph is complete: (1+r)^{-(n-1)}."""
    return exp(-(params.n - 1) * log1p(params.r))


# -- degree law --------------------------------------------------------------


def degree_pmf(params: ModelParams) -> PmfTable:
    """Exact law of the degree of a fixed vertex, over {0..n-1}.

    P(D = k) = (k+1) * 2r(2r+1) / ((n+2r)(n-1+2r)) * prod_{i=1}^{k} (n-i)/(n-i+2r-1),
    computed with log-gamma; r = 0 degenerates to a point mass at n-1.
    """
    n, r = params.n, params.r
    if r < 0:
        raise ValueError("need r >= 0")
    support = np.arange(n)
    if n == 1:
        return PmfTable(support, np.ones(1))
    if r == 0.0:
        probs = np.zeros(n)
        probs[n - 1] = 1.0
        return PmfTable(support, probs)
    k = support.astype(np.float64)
    log_pref = (
        log(2.0 * r)
        + log(2.0 * r + 1.0)
        - log(n + 2.0 * r)
        - log(n - 1.0 + 2.0 * r)
    )
    # prod_{i=1}^{k} (n-i) = Gamma(n)/Gamma(n-k); denominator shifts by 2r-1
    log_prod = (
        gammaln(n) - gammaln(n - k) - gammaln(n + 2.0 * r - 1.0) + gammaln(n - k + 2.0 * r - 1.0)
    )
    logp = np.log(k + 1.0) + log_pref + log_prod
    return PmfTable(support, np.exp(logp))


def degree_pmf_top(params: ModelParams) -> float:
    """P(D = n-1) in gamma-ratio form: Gamma(2+2r) Gamma(n+1) / Gamma(n+1+2r)."""
    n, r = params.n, params.r
    return exp(gammaln(2.0 + 2.0 * r) + gammaln(n + 1.0) - gammaln(n + 1.0 + 2.0 * r))


def pmf_moments_check(params: ModelParams) -> tuple[float, float]:
    """Mean and variance of degree_pmf; consistency hook against the
    closed-form degree moments."""
    t = degree_pmf(params)
    return t.mean(), t.variance()


# -- limit densities ---------------------------------------------------------


def limit_density(kind: str, shape: float, x) -> float:
    """Limit laws of the rescaled degree.

    kind='beta': density of Beta(2, 2r) at x in [0,1] (shape = r > 0);
    kind='size-biased-exponential': 4x e^{-2x} for x >= 0 (shape ignored);
    kind='size-biased-geometric': k (rho/(1+rho))^2 (1/(1+rho))^{k-1} for
    integer k >= 1 (shape = rho > 0).
    """
    if kind == "beta":
        r = shape
        if r <= 0:
            raise ValueError("beta limit needs r > 0")
        if not 0.0 <= x <= 1.0:
            raise ValueError("x must be in [0, 1]")
        if x == 0.0:
            return 0.0
        if x == 1.0 and 2.0 * r - 1.0 < 0:
            return float("inf")
        return exp(log(x) + (2.0 * r - 1.0) * log1p(-x) - betaln(2.0, 2.0 * r))
    if kind == "size-biased-exponential":
        if x < 0:
            raise ValueError("x must be >= 0")
        return 4.0 * x * exp(-2.0 * x)
    if kind == "size-biased-geometric":
        rho = shape
        k = x
        if rho <= 0:
            raise ValueError("geometric limit needs rho > 0")
        if int(k) != k or k < 1:
            raise ValueError("k must be an integer >= 1")
        w = rho / (1.0 + rho)
        return k * w**2 * (1.0 / (1.0 + rho)) ** (k - 1)
    raise ValueError(f"unknown limit kind {kind!r}")


# -- regimes -----------------------------------------------------------------

REGIME_LABELS = (
    "complete",
    "complete-transition",
    "dense",
    "intermediate",
    "sparse",
    "empty-transition",
)


@dataclass(frozen=True)
class RegimeLabel:
    label: str
    evidence: dict[str, float]

    def __str__(self):
        ev = ", ".join(f"{k}={v:.4g}" for k, v in self.evidence.items())
        return f"{self.label} ({ev})"


def classify_regime(n: int, r: float, c: float = 1.0) -> RegimeLabel:
    """Point classification of (n, r) against the boundary scales
    1/n, 1, n, n^2.  The scales are asymptotic statements, so a single-point
    label is necessarily a convention: the threshold constant c is
    configurable and the raw ratios are returned as evidence.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if r < 0:
        raise ValueError("need r >= 0")
    evidence = {
        "r*n": r * n,
        "r": r,
        "r/n": r / n,
        "r/n^2": r / n**2,
        "threshold_constant": c,
    }
    if r == 0.0:
        label = "complete"
    elif r * n <= c:
        label = "complete-transition"
    elif r < c:
        label = "dense"
    elif r <= c * n:
        label = "intermediate"
    elif r < c * n**2:
        label = "sparse"
    else:
        label = "empty-transition"
    return RegimeLabel(label, evidence)


# -- bounds ------------------------------------------------------------------


def clique_upper_bound(params: ModelParams, tail: float = 0.01) -> int:
    """Smallest k with E[#complete subgraphs of order k] <= tail (a
    first-moment bound on the clique number); n+1 if no k <= n works."""
    n, r = params.n, params.r
    if not 0.0 < tail < 1.0:
        raise ValueError("tail must be in (0,1)")
    if r <= 0.0:
        return n + 1
    log_tail = log(tail)
    for k in range(2, n + 1):
        if _log_binom(n, k) - (k - 1) * log1p(r) <= log_tail:
            return k
    return n + 1


def cc_bounds(params: ModelParams) -> tuple[float, float]:
    """Leading-order envelope for the number of connected components in the
    intermediate regime: (r/2, 2 r ln n)."""
    return params.r / 2.0, 2.0 * params.r * log(params.n)


def stein_chen_bound(params: ModelParams) -> tuple[float, float]:
    """(lambda, bound): Poisson parameter lambda = n(n-1)/(2(r+1)) for the
    edge count, and the total-variation error bound min(1, 1/lambda) * C
    with the explicit dependency constant C below."""
    n, r = params.n, params.r
    if n < 2:
        raise ValueError("need n >= 2")
    lam = n * (n - 1) / (2.0 * (r + 1.0))
    c = _dependency_constant(n, r)
    bound = min(1.0, 1.0 / lam) * c if lam > 0 else 0.0
    return lam, bound


def _dependency_constant(n: int, r: float) -> float:
    num = n * (n - 1) * (n**2 * r + 2.0 * n * r**2 + n * r - 2.0 * r**2 + 3.0 * r + 9.0)
    den = 2.0 * (2.0 * r + 3.0) * (r + 3.0) * (r + 1.0) ** 2
    return num / den


def _dependency_constant_horner(n: int, r: float) -> float:
    """Same constant with the numerator polynomial in Horner form; kept as an
    independent re-evaluation for tests."""
    poly = 9.0 + r * ((n * n + n + 3.0) + r * (2.0 * (n - 1.0)))
    den = 2.0 * (2.0 * r + 3.0) * (r + 3.0) * (r + 1.0) ** 2
    return n * (n - 1) * poly / den


def variance_identity_gap(params: ModelParams) -> float:
    """Relative gap between var_edges and the degree-based decomposition
    (1/4)(n var_degree + n(n-1) cov_degree); zero in exact arithmetic."""
    m = moments(params, complete_orders=())
    lhs = m.var_edges
    rhs = 0.25 * (params.n * m.var_degree + params.n * (params.n - 1) * m.cov_degree)
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return abs(lhs - rhs) / scale
