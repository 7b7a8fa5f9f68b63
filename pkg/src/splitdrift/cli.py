"""Command-line interface.

Subcommands: sample, pmf, moments, regime, cc-bounds, stein-chen, validate,
oracle, replay.  Every command that writes files also writes a JSON manifest
with the fully resolved configuration (including the defaulted seed), and
`replay <manifest>` reruns a command from its manifest; outputs are
byte-identical given the same manifest.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import secrets
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import analytic, stats
from .graph import LabeledGraph, summarize, write_edgelist
from .samplers import (
    ModelParams,
    sample_backward,
    sample_ctmc,
    sample_forward,
)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    n: Optional[int] = None
    r: Optional[float] = None
    sampler: str = "forward"
    replicates: int = 1
    seed: Optional[int] = None
    out: Optional[str] = None
    fmt: str = "edgelist"
    clique_limit: int = 512
    subgraph_orders: tuple = ()
    events: Optional[int] = None
    limit: Optional[str] = None
    tail: float = 0.01
    exact: bool = False
    inject_bug: bool = False

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["subgraph_orders"] = list(self.subgraph_orders)
        return d

    @staticmethod
    def from_dict(d: dict) -> "RunConfig":
        d = dict(d)
        d["subgraph_orders"] = tuple(d.get("subgraph_orders", ()))
        return RunConfig(**d)

    def params(self) -> ModelParams:
        if self.n is None or self.r is None:
            raise UsageError("command requires --n and --r (or --rho)")
        return ModelParams(self.n, self.r)


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    r = getattr(args, "r", None)
    rho = getattr(args, "rho", None)
    n = getattr(args, "n", None)
    if rho is not None:
        if n is None:
            raise UsageError("--rho requires --n")
        r = ModelParams.from_rho(n, rho).r
    seed = getattr(args, "seed", None)
    if seed is None:
        seed = secrets.randbits(32)
    return RunConfig(
        command=args.command,
        n=n,
        r=r,
        sampler=getattr(args, "sampler", "forward"),
        replicates=getattr(args, "replicates", 1),
        seed=seed,
        out=getattr(args, "out", None),
        fmt=getattr(args, "format", "edgelist"),
        clique_limit=getattr(args, "clique_limit", 512),
        subgraph_orders=tuple(getattr(args, "subgraph_orders", None) or ()),
        events=getattr(args, "events", None),
        limit=getattr(args, "limit", None),
        tail=getattr(args, "tail", 0.01),
        exact=getattr(args, "exact", False),
        inject_bug=getattr(args, "inject_bug", False),
    )


def _dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _emit(cfg: RunConfig, text: str, outputs_hint: Optional[list] = None) -> None:
    """Write the primary output to cfg.out (or stdout) plus a manifest."""
    if cfg.out is None:
        sys.stdout.write(text)
        return
    with open(cfg.out, "w") as fh:
        fh.write(text)
    manifest = {
        "command": cfg.command,
        "config": cfg.to_dict(),
        "outputs": outputs_hint or [os.path.basename(cfg.out)],
    }
    with open(cfg.out + ".manifest.json", "w") as fh:
        fh.write(_dump_json(manifest))


def _substream(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=[seed, index]))


# -- commands ----------------------------------------------------------------


def cmd_sample(cfg: RunConfig) -> int:
    params = cfg.params()
    if cfg.out is None:
        raise UsageError("sample requires --out DIR")
    os.makedirs(cfg.out, exist_ok=True)
    outputs = []
    summaries = []
    for j in range(cfg.replicates):
        rng = _substream(cfg.seed, j)
        if cfg.sampler == "forward":
            g = sample_forward(params, rng)
        elif cfg.sampler == "backward":
            g = sample_backward(params, rng)
        elif cfg.sampler == "ctmc":
            events = cfg.events
            if events is None:
                # ~20 time units per lineage at the uniformization rate
                # Lambda = n(1 + r); initial-condition forgetting takes
                # order-n time, hence the n * Lambda scaling.
                events = int(20 * params.n * params.n * (1.0 + params.r))
            g = sample_ctmc(params, events, LabeledGraph.complete(params.n), rng)
        else:
            raise UsageError(f"unknown sampler {cfg.sampler!r}")
        name = f"graph_{j:06d}.edgelist"
        with open(os.path.join(cfg.out, name), "w") as fh:
            write_edgelist(g, fh)
        outputs.append(name)
        # keep the per-graph summary cheap for large n
        small = params.n <= cfg.clique_limit
        st = summarize(
            g,
            clique_limit=cfg.clique_limit if small else 0,
            subgraph_orders=cfg.subgraph_orders,
        )
        summaries.append(
            {
                "edges": int(st.edges),
                "num_components": int(st.num_components),
                "clique_number": st.clique_number,
                "complete_counts": {str(k): int(v) for k, v in st.complete_counts.items()},
            }
        )
    manifest = {
        "command": "sample",
        "config": cfg.to_dict(),
        "outputs": outputs,
        "summaries": summaries,
    }
    with open(os.path.join(cfg.out, "manifest.json"), "w") as fh:
        fh.write(_dump_json(manifest))
    return 0


def cmd_pmf(cfg: RunConfig) -> int:
    params = cfg.params()
    table = analytic.degree_pmf(params)
    lines = []
    if cfg.limit is None:
        lines.append("k,prob")
        for k, p in zip(table.support, table.probs):
            lines.append(f"{k},{float(p)!r}")
    else:
        lines.append("k,prob,limit_density")
        for k, p in zip(table.support, table.probs):
            if cfg.limit == "beta":
                x = float(k) / params.n
                d = analytic.limit_density("beta", params.r, min(max(x, 0.0), 1.0))
            elif cfg.limit == "exp":
                d = analytic.limit_density(
                    "size-biased-exponential", 0.0, float(k) * params.r / params.n
                )
            elif cfg.limit == "geom":
                d = analytic.limit_density(
                    "size-biased-geometric", params.rho, int(k) + 1
                )
            else:
                raise UsageError(f"unknown limit {cfg.limit!r}")
            lines.append(f"{k},{float(p)!r},{float(d)!r}")
    _emit(cfg, "\n".join(lines) + "\n")
    return 0


def cmd_moments(cfg: RunConfig) -> int:
    params = cfg.params()
    orders = cfg.subgraph_orders or (3,)
    m = analytic.moments(params, complete_orders=orders)
    doc = {
        "config": cfg.to_dict(),
        "moments": {
            "p_edge": m.p_edge,
            "var_edge_indicator": m.var_edge_indicator,
            "cov_shared": m.cov_shared,
            "cov_disjoint": m.cov_disjoint,
            "mean_degree": m.mean_degree,
            "var_degree": m.var_degree,
            "cov_degree": m.cov_degree,
            "mean_edges": m.mean_edges,
            "var_edges": m.var_edges,
            "mean_complete": {str(k): v for k, v in m.mean_complete.items()},
        },
    }
    _emit(cfg, _dump_json(doc))
    return 0


def cmd_regime(cfg: RunConfig) -> int:
    params = cfg.params()
    label = analytic.classify_regime(params.n, params.r)
    doc = {"config": cfg.to_dict(), "regime": label.label, "evidence": label.evidence}
    _emit(cfg, _dump_json(doc))
    return 0


def cmd_cc_bounds(cfg: RunConfig) -> int:
    params = cfg.params()
    lower, upper = analytic.cc_bounds(params)
    label = analytic.classify_regime(params.n, params.r)
    doc = {
        "config": cfg.to_dict(),
        "lower": lower,
        "upper": upper,
        "regime": label.label,
    }
    _emit(cfg, _dump_json(doc))
    return 0


def cmd_stein_chen(cfg: RunConfig) -> int:
    params = cfg.params()
    lam, bound = analytic.stein_chen_bound(params)
    doc = {"config": cfg.to_dict(), "lambda": lam, "tv_bound": bound}
    _emit(cfg, _dump_json(doc))
    return 0


def cmd_oracle(cfg: RunConfig) -> int:
    params = cfg.params()
    if params.n > 4:
        raise UsageError("oracle solve is limited to n <= 4")
    law = stats.exact_stationary_small_n(params)
    doc = {
        "config": cfg.to_dict(),
        "pairs": [list(p) for p in law.pairs],
        "probs": {str(mask): float(p) for mask, p in enumerate(law.probs)},
        "edge_probability": law.edge_probability(),
        "complete_probability": law.complete_probability(),
    }
    _emit(cfg, _dump_json(doc))
    return 0


def cmd_validate(cfg: RunConfig) -> int:
    params = cfg.params()
    patched = None
    if cfg.inject_bug:
        # negative control: run the comparison with one formula constant
        # deliberately wrong; a healthy harness must fail
        patched = analytic.moments

        def _buggy(p, complete_orders=None):
            m = patched(p, complete_orders=complete_orders)
            return dataclasses.replace(m, mean_edges=m.mean_edges * 1.05)

        analytic.moments = _buggy
    try:
        report = stats.mc_ensemble(
            params,
            sampler=cfg.sampler,
            replicates=cfg.replicates,
            seed=cfg.seed,
            subgraph_orders=cfg.subgraph_orders
            or ((3,) if params.n >= 3 else (2,)),
        )
    finally:
        if patched is not None:
            analytic.moments = patched
    comparisons = list(report.comparisons)

    if cfg.exact:
        if params.n > 4:
            raise UsageError("--exact requires n <= 4")
        law = stats.exact_stationary_small_n(params)
        target = 1.0 / (1.0 + params.r)
        err = abs(law.edge_probability() - target) / target
        comparisons.append(
            {
                "quantity": "exact_edge_probability", "analytic": target,
                "empirical": law.edge_probability(), "stat": "rel_err",
                "value": err, "threshold": 1e-10,
                "verdict": "pass" if err <= 1e-10 else "fail",
            }
        )

    gap = analytic.variance_identity_gap(params)
    comparisons.append(
        {
            "quantity": "variance_identity", "analytic": 0.0, "empirical": gap,
            "stat": "rel_err", "value": gap, "threshold": 1e-10,
            "verdict": "pass" if gap <= 1e-10 else "fail",
        }
    )
    table = analytic.degree_pmf(params)
    norm_err = table.normalization_error
    comparisons.append(
        {
            "quantity": "pmf_normalization", "analytic": 1.0,
            "empirical": 1.0 + norm_err, "stat": "abs_err", "value": norm_err,
            "threshold": 1e-12,
            "verdict": "pass" if norm_err <= 1e-12 else "fail",
        }
    )

    passed = all(c["verdict"] != "fail" for c in comparisons)
    doc = {
        "config": cfg.to_dict(),
        "passed": passed,
        "comparisons": comparisons,
    }
    _emit(cfg, _dump_json(doc))
    return 0 if passed else 1


def cmd_replay(args: argparse.Namespace) -> int:
    try:
        with open(args.manifest) as fh:
            manifest = json.load(fh)
    except json.JSONDecodeError as e:
        raise UsageError(f"not a manifest: {e}")
    cfg = RunConfig.from_dict(manifest["config"])
    if args.out is not None:
        cfg.out = args.out
    return _DISPATCH[cfg.command](cfg)


_DISPATCH = {
    "sample": cmd_sample,
    "pmf": cmd_pmf,
    "moments": cmd_moments,
    "regime": cmd_regime,
    "cc-bounds": cmd_cc_bounds,
    "stein-chen": cmd_stein_chen,
    "validate": cmd_validate,
    "oracle": cmd_oracle,
}


# -- parser ------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, need_n: bool = True) -> None:
    p.add_argument("--n", type=int, required=need_n, help="number of vertices")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--r", type=float, help="rescaled removal rate r")
    group.add_argument("--rho", type=float, help="per-edge removal rate rho = 2r/(n-1)")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default: random, echoed)")
    p.add_argument("--out", type=str, default=None, help="output path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splitdrift",
        description="Samplers and exact analytics for the split-and-drift random graph",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw graphs and write edge lists")
    _add_common(p)
    p.add_argument("--sampler", choices=("forward", "backward", "ctmc"), default="forward")
    p.add_argument("--replicates", type=int, default=1)
    p.add_argument("--events", type=int, default=None, help="ctmc burn-in events")
    p.add_argument("--clique-limit", dest="clique_limit", type=int, default=512)
    p.add_argument("--subgraph-orders", dest="subgraph_orders", type=int, nargs="*", default=None)
    p.add_argument("--format", choices=("edgelist",), default="edgelist")

    p = sub.add_parser("pmf", help="exact degree pmf as CSV")
    _add_common(p)
    p.add_argument("--limit", choices=("beta", "exp", "geom"), default=None,
                   help="add the matching limit-density column")

    for name, helptext in (
        ("moments", "closed-form moment set as JSON"),
        ("regime", "point regime classification"),
        ("cc-bounds", "connected-component envelope"),
        ("stein-chen", "Poisson parameter and TV bound"),
        ("oracle", "exact stationary law for n <= 4"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_common(p)
        if name == "moments":
            p.add_argument("--subgraph-orders", dest="subgraph_orders", type=int,
                           nargs="*", default=None)

    p = sub.add_parser("validate", help="Monte Carlo validation against the closed forms")
    _add_common(p)
    p.add_argument("--sampler", choices=("forward", "backward", "ctmc"), default="forward")
    p.add_argument("--replicates", type=int, default=20_000)
    p.add_argument("--subgraph-orders", dest="subgraph_orders", type=int, nargs="*", default=None)
    p.add_argument("--exact", action="store_true", help="also compare against the exact solve (n <= 4)")
    p.add_argument("--inject-bug", dest="inject_bug", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("replay", help="rerun a command from its manifest")
    p.add_argument("manifest", type=str)
    p.add_argument("--out", type=str, default=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.command == "replay":
            return cmd_replay(args)
        cfg = _resolve_config(args)
        if cfg.command in ("pmf", "moments", "regime", "cc-bounds", "stein-chen",
                           "validate", "oracle", "sample"):
            if cfg.r is None:
                raise UsageError("need --r or --rho")
        return _DISPATCH[cfg.command](cfg)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
