"""Samplers for the split-and-drift graph G(n, r).

Three independent routes to the same stationary law:

* forward: grow from the 2-vertex complete graph, thinning edges at rate r
  between vertex arrivals, then relabel uniformly;
* backward: run a Kingman coalescent of the n vertices and kill vertex pairs
  whose block-pair lineage is hit by a rate-r mark before coalescence;
* ctmc: straight Gillespie simulation of the duplication/removal chain
  (burn-in heuristic, used as a smoke-test oracle only).

Plus the degree chain, a two-type growth chain whose terminal state has the
exact degree law of a fixed vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, sqrt

import numpy as np

from .genealogy import Genealogy, LeafLayout, leaf_layout, sample_kingman
from .graph import LabeledGraph


@dataclass(frozen=True)
class ModelParams:
    """(n, r) with the derived per-edge removal rate rho = 2r/(n-1)."""

    n: int
    r: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need n >= 1")
        if not (self.r >= 0.0):
            raise ValueError("need r >= 0")

    @property
    def rho(self) -> float:
        if self.n < 2:
            return 0.0
        return 2.0 * self.r / (self.n - 1)

    @staticmethod
    def from_rho(n: int, rho: float) -> "ModelParams":
        if n < 2:
            return ModelParams(n, 0.0)
        return ModelParams(n, (n - 1) * rho / 2.0)


@dataclass
class DegreeChainState:
    p: int  # descendants of the focal line
    q: int  # descendants of immigrants


def _lifetimes(rng: np.random.Generator, r: float, size) -> np.ndarray:
    """Edge lifetimes under rate-r removal; r = 0 means immortal edges."""
    if r > 0.0:
        return rng.exponential(1.0 / r, size)
    return np.full(size, np.inf)


# -- forward construction ----------------------------------------------------


def sample_forward(params: ModelParams, rng: np.random.Generator) -> LabeledGraph:
    """One draw via the growth construction.

    Every edge gets an absolute death time (creation + Exp(r) lifetime) when
    it appears, which is equivalent to per-epoch thinning with e^{-rT} but
    touches each edge once.  The state is read off after the final n-vertex
    epoch's waiting time, then vertex labels are permuted uniformly.
    """
    n, r = params.n, params.r
    if n == 1:
        return LabeledGraph.empty(1)
    death = np.full((n, n), -np.inf)
    now = 0.0
    death[0, 1] = death[1, 0] = _lifetimes(rng, r, ())
    for k in range(2, n + 1):
        now += rng.exponential(1.0 / comb(k, 2))
        if k < n:
            u = int(rng.integers(k))
            alive = death[u, :k] > now
            alive[u] = True  # the duplicate is always linked to its template
            newrow = np.where(alive, now + _lifetimes(rng, r, k), -np.inf)
            death[k, :k] = newrow
            death[:k, k] = newrow
    iu, ju = np.nonzero(np.triu(death > now, 1))
    perm = rng.permutation(n) + 1
    edges = np.sort(np.column_stack([perm[iu], perm[ju]]), axis=1)
    return LabeledGraph(n, edges)


def sample_forward_batch(
    params: ModelParams, size: int, rng: np.random.Generator
) -> np.ndarray:
    """Vectorized forward draws; returns a (size, n, n) boolean adjacency
    stack.  Caller is responsible for chunking: memory is 8*size*n^2 bytes."""
    n, r = params.n, params.r
    if n == 1:
        return np.zeros((size, 1, 1), dtype=bool)
    death = np.full((size, n, n), -np.inf)
    now = np.zeros(size)
    death[:, 0, 1] = death[:, 1, 0] = _lifetimes(rng, r, size)
    bidx = np.arange(size)
    for k in range(2, n + 1):
        now += rng.exponential(1.0 / comb(k, 2), size)
        if k < n:
            u = rng.integers(0, k, size)
            alive = death[bidx, u, :k] > now[:, None]
            alive[bidx, u] = True
            newrow = np.where(
                alive, now[:, None] + _lifetimes(rng, r, (size, k)), -np.inf
            )
            death[:, k, :k] = newrow
            death[:, :k, k] = newrow
    adj = death > now[:, None, None]
    perms = np.argsort(rng.random((size, n)), axis=1)
    return adj[bidx[:, None, None], perms[:, :, None], perms[:, None, :]]


# -- backward construction ---------------------------------------------------


def sample_backward(params: ModelParams, rng: np.random.Generator) -> LabeledGraph:
    gen = sample_kingman(params.n, rng)
    return backward_from_genealogy(params, gen, rng)


def backward_from_genealogy(
    params: ModelParams, gen: Genealogy, rng: np.random.Generator
) -> LabeledGraph:
    """Kill vertex pairs along the genealogy of pairs.

    Leaves are laid out so every block is a contiguous interval of positions
    (see genealogy.leaf_layout); a killed block pair is then a rectangle
    slice-assignment on the position-indexed pair matrix.  With k blocks and
    epoch duration I, each of the C(k,2) block pairs is hit independently
    with probability 1 - e^{-rI}; hit pairs are drawn by geometric gap
    skipping so the work scales with the number of hits, not with C(k,2).

    All randomness is drawn here; the rectangle replay itself is
    deterministic and runs through a numba kernel when available (the
    pure-python replay computes the identical matrix).
    """
    n, r = params.n, params.r
    if n == 1:
        return LabeledGraph.empty(1)
    layout = leaf_layout(gen)

    # presample the kill positions per epoch and the merge slot pairs,
    # mirroring sample_kingman's swap-remove slot bookkeeping
    slot_of = np.arange(-1, n, dtype=np.int64)  # canonical label -> slot
    slot_label = np.arange(1, n + 1, dtype=np.int64)
    merge_sa = np.empty(n - 1, dtype=np.int64)
    merge_sb = np.empty(n - 1, dtype=np.int64)
    offsets = np.zeros(n, dtype=np.int64)
    chunks = []
    for e in range(n - 1):
        k = n - e
        npairs = comb(k, 2)
        p = -np.expm1(-r * gen.durations[e])
        if p > 0.0:
            pos = _bernoulli_positions(rng, npairs, p)
            chunks.append(pos)
            offsets[e + 1] = offsets[e] + pos.size
        else:
            offsets[e + 1] = offsets[e]
        a, b = gen.merges[e]
        sa, sb = slot_of[a], slot_of[b]
        merge_sa[e] = sa
        merge_sb[e] = sb
        last = k - 1
        moved = slot_label[last]
        slot_label[sb] = moved
        slot_of[moved] = sb
    kill_pos = (
        np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)
    )

    # only the strict upper triangle is meaningful (replay writes i < j only)
    alive = np.ones((n, n), dtype=bool)
    for i in range(n):
        alive[i, : i + 1] = False
    replay = _replay_kills_numba if _HAVE_NUMBA else _replay_kills_py
    replay(n, layout.lo, layout.hi, kill_pos, offsets, merge_sa, merge_sb, alive)

    iu, ju = np.nonzero(alive)
    labels = layout.pos_to_leaf + 1
    edges = np.sort(np.column_stack([labels[iu], labels[ju]]), axis=1)
    return LabeledGraph(n, edges)


def _replay_kills_py(n, lo, hi, kill_pos, offsets, merge_sa, merge_sb, alive):
    """Reference replay: clears the upper-triangle rectangle of each freshly
    killed block pair (extraction only reads i < j)."""
    slot_node = np.arange(n, dtype=np.int64)
    dead: set[tuple[int, int]] = set()
    for e in range(n - 1):
        pos = kill_pos[offsets[e] : offsets[e + 1]]
        if pos.size:
            sa, sb = _decode_pairs(pos)
            na = slot_node[sa]
            nb = slot_node[sb]
            for x, y in zip(na.tolist(), nb.tolist()):
                if x > y:
                    x, y = y, x
                key = (x, y)
                if key in dead:
                    continue
                dead.add(key)
                if lo[x] < lo[y]:
                    alive[lo[x] : hi[x], lo[y] : hi[y]] = False
                else:
                    alive[lo[y] : hi[y], lo[x] : hi[x]] = False
        slot_node[merge_sa[e]] = n + e
        slot_node[merge_sb[e]] = slot_node[n - e - 1]


try:  # pragma: no cover - exercised indirectly
    from numba import njit as _njit
    from numba.typed import Dict as _NumbaDict  # noqa: F401

    @_njit(cache=True)
    def _replay_kills_numba(n, lo, hi, kill_pos, offsets, merge_sa, merge_sb, alive):
        two_n = np.int64(2 * n)
        slot_node = np.arange(n)
        dead = {np.int64(-1): np.uint8(0)}
        for e in range(n - 1):
            for idx in range(offsets[e], offsets[e + 1]):
                t = kill_pos[idx]
                b = np.int64((1.0 + np.sqrt(1.0 + 8.0 * t)) // 2.0)
                while b * (b - 1) // 2 > t:
                    b -= 1
                while (b + 1) * b // 2 <= t:
                    b += 1
                a = t - b * (b - 1) // 2
                x = slot_node[a]
                y = slot_node[b]
                if x > y:
                    x, y = y, x
                key = x * two_n + y
                if key in dead:
                    continue
                dead[key] = np.uint8(1)
                if lo[x] < lo[y]:
                    ra, rb = x, y
                else:
                    ra, rb = y, x
                for i in range(lo[ra], hi[ra]):
                    for j in range(lo[rb], hi[rb]):
                        alive[i, j] = False
            sa = merge_sa[e]
            sb = merge_sb[e]
            child_a = slot_node[sa]
            child_b = slot_node[sb]
            parent = n + e
            slot_node[sa] = parent
            slot_node[sb] = slot_node[n - e - 1]
            k_after = n - e - 1
            if k_after <= 512:
                # a merged pair is dead iff both child pairs are dead;
                # inheriting the flag stops re-clearing big dead rectangles
                for s in range(k_after):
                    if s == sa:
                        continue
                    x = slot_node[s]
                    ka = x * two_n + child_a if x < child_a else child_a * two_n + x
                    kb = x * two_n + child_b if x < child_b else child_b * two_n + x
                    if ka in dead and kb in dead:
                        kp = x * two_n + parent if x < parent else parent * two_n + x
                        dead[kp] = np.uint8(1)

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False


def _bernoulli_positions(rng: np.random.Generator, n: int, p: float) -> np.ndarray:
    """Indices of successes among n i.i.d. Bernoulli(p) trials, via geometric
    inter-arrival gaps; expected O(np) work and memory."""
    if p >= 1.0:
        return np.arange(n, dtype=np.int64)
    chunks = []
    pos = -1
    est = int(n * p + 6.0 * sqrt(n * p + 1.0) + 8.0)
    while True:
        gaps = rng.geometric(p, est)
        cum = pos + gaps.cumsum()
        if cum.size and cum[-1] >= n:
            chunks.append(cum[cum < n])
            break
        if cum.size:
            chunks.append(cum)
            pos = int(cum[-1])
        est = max(16, int((n - pos) * p * 1.5 + 16.0))
    return np.concatenate(chunks)


def _decode_pairs(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized inverse of t = b(b-1)/2 + a over pairs a < b."""
    t = np.asarray(t, dtype=np.int64)
    b = ((1.0 + np.sqrt(1.0 + 8.0 * t.astype(np.float64))) // 2.0).astype(np.int64)
    for _ in range(2):  # guard against float rounding at the triangular edges
        b = np.where(b * (b - 1) // 2 > t, b - 1, b)
        b = np.where((b + 1) * b // 2 <= t, b + 1, b)
    a = t - b * (b - 1) // 2
    return a, b


# -- raw chain (validation oracle) ------------------------------------------


def sample_ctmc(
    params: ModelParams,
    events: int,
    initial: LabeledGraph,
    rng: np.random.Generator,
) -> LabeledGraph:
    """Uniformized simulation of the duplication/removal chain for a fixed
    number of events.  Events are drawn at the uniform rate
    Lambda = n + rho * n(n-1)/2 and include no-op self-loops, so the discrete
    chain's stationary law equals the continuous-time one exactly (a plain
    jump-count stop would sample the rate-size-biased embedded chain).
    Burn-in quality is the caller's problem; this is a smoke-test oracle,
    not a reference sampler."""
    n, rho = params.n, params.rho
    if n < 2:
        raise ValueError("chain needs n >= 2")
    if initial.n != n:
        raise ValueError("initial graph has wrong vertex count")
    nbr: list[set[int]] = [set() for _ in range(n + 1)]
    edge_list: list[tuple[int, int]] = []
    edge_pos: dict[tuple[int, int], int] = {}

    def add_edge(i: int, j: int) -> None:
        key = (i, j) if i < j else (j, i)
        if key in edge_pos:
            return
        edge_pos[key] = len(edge_list)
        edge_list.append(key)
        nbr[i].add(j)
        nbr[j].add(i)

    def drop_edge(key: tuple[int, int]) -> None:
        idx = edge_pos.pop(key)
        last = edge_list[-1]
        edge_list[idx] = last
        edge_list.pop()
        if last != key:
            edge_pos[last] = idx
        i, j = key
        nbr[i].discard(j)
        nbr[j].discard(i)

    for i, j in initial.edge_array:
        add_edge(int(i), int(j))

    lam = n + rho * n * (n - 1) / 2.0
    for _ in range(events):
        u = rng.random() * lam
        if u < n:
            i = int(rng.integers(1, n + 1))
            j = int(rng.integers(1, n))
            if j >= i:
                j += 1
            # j is replaced by a copy of i: closed neighborhood transfer
            for w in list(nbr[j]):
                drop_edge((j, w) if j < w else (w, j))
            for w in (nbr[i] | {i}) - {j}:
                add_edge(j, w)
        elif u < n + rho * len(edge_list):
            drop_edge(edge_list[int(rng.integers(len(edge_list)))])

    if not edge_list:
        return LabeledGraph.empty(n)
    return LabeledGraph(n, np.array(edge_list, dtype=np.int64))


# -- degree chain ------------------------------------------------------------


def sample_degree_chain(params: ModelParams, rng: np.random.Generator) -> int:
    """Terminal value of the two-type growth chain; distributed as the degree
    of a fixed vertex of G(n, r)."""
    n, r = params.n, params.r
    p, q = 1, 0
    for _ in range(n - 1):
        if rng.random() * (p + 1 + q + 2.0 * r) < p + 1:
            p += 1
        else:
            q += 1
    return p - 1


def sample_degree_chain_batch(
    params: ModelParams, size: int, rng: np.random.Generator
) -> np.ndarray:
    n, r = params.n, params.r
    p = np.ones(size, dtype=np.int64)
    q = np.zeros(size, dtype=np.int64)
    for _ in range(n - 1):
        grow = rng.random(size) * (p + 1 + q + 2.0 * r) < p + 1
        p += grow
        q += ~grow
    return p - 1
