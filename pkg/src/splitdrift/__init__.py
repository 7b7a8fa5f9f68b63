"""splitdrift: samplers and exact analytics for the split-and-drift random
graph G(n, r) — the stationary law of a vertex-duplication / edge-removal
chain whose genealogy is the Kingman coalescent."""

from .analytic import (
    MomentSet,
    RegimeLabel,
    cc_bounds,
    classify_regime,
    clique_upper_bound,
    degree_pmf,
    limit_density,
    moments,
    p_complete,
    pmf_moments_check,
    stein_chen_bound,
)
from .genealogy import (
    Genealogy,
    pair_coalescence_time,
    sample_kingman,
    total_branch_length,
)
from .graph import (
    LabeledGraph,
    SummaryStats,
    connected_components,
    read_edgelist,
    summarize,
    write_edgelist,
)
from .pmf import PmfTable
from .samplers import (
    ModelParams,
    sample_backward,
    sample_ctmc,
    sample_degree_chain,
    sample_forward,
)
from .stats import (
    EnsembleReport,
    exact_stationary_small_n,
    ks_statistic,
    mc_ensemble,
    tv_distance,
)

__version__ = "0.1.0"

__all__ = [
    "EnsembleReport",
    "Genealogy",
    "LabeledGraph",
    "ModelParams",
    "MomentSet",
    "PmfTable",
    "RegimeLabel",
    "SummaryStats",
    "cc_bounds",
    "classify_regime",
    "clique_upper_bound",
    "connected_components",
    "degree_pmf",
    "exact_stationary_small_n",
    "ks_statistic",
    "limit_density",
    "mc_ensemble",
    "moments",
    "p_complete",
    "pair_coalescence_time",
    "pmf_moments_check",
    "read_edgelist",
    "sample_backward",
    "sample_ctmc",
    "sample_degree_chain",
    "sample_forward",
    "sample_kingman",
    "stein_chen_bound",
    "summarize",
    "total_branch_length",
    "tv_distance",
    "write_edgelist",
]
