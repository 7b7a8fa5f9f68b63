"""Labeled simple graphs on {1..n} and the invariants we measure on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import IO, Iterable, Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _cc


class WorkBudgetExceeded(RuntimeError):
    """Raised when an exact enumeration would exceed its work budget."""


@dataclass(frozen=True)
class LabeledGraph:
    """Undirected simple graph; vertices are 1..n, edges stored as a sorted
    (m, 2) int array with i < j on each row."""

    n: int
    edge_array: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need n >= 1")
        e = np.asarray(self.edge_array, dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e.min() < 1 or e.max() > self.n:
                raise ValueError("vertex label out of range")
            if np.any(e[:, 0] >= e[:, 1]):
                raise ValueError("edges must satisfy i < j")
            # canonical order, no duplicates
            order = np.lexsort((e[:, 1], e[:, 0]))
            e = e[order]
            if np.any((np.diff(e[:, 0]) == 0) & (np.diff(e[:, 1]) == 0)):
                raise ValueError("duplicate edge")
        e.flags.writeable = False
        object.__setattr__(self, "edge_array", e)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def empty(n: int) -> "LabeledGraph":
        return LabeledGraph(n, np.empty((0, 2), dtype=np.int64))

    @staticmethod
    def complete(n: int) -> "LabeledGraph":
        idx = np.triu_indices(n, k=1)
        return LabeledGraph(n, np.column_stack(idx) + 1)

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> "LabeledGraph":
        arr = np.array([(min(i, j), max(i, j)) for i, j in edges], dtype=np.int64)
        return LabeledGraph(n, arr.reshape(-1, 2))

    @staticmethod
    def from_adjacency(adj: np.ndarray) -> "LabeledGraph":
        adj = np.asarray(adj, dtype=bool)
        i, j = np.nonzero(np.triu(adj, k=1))
        return LabeledGraph(adj.shape[0], np.column_stack([i + 1, j + 1]))

    # -- basic queries ------------------------------------------------------

    @property
    def m(self) -> int:
        return self.edge_array.shape[0]

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return False
        a, b = (i, j) if i < j else (j, i)
        e = self.edge_array
        lo = np.searchsorted(e[:, 0], a, side="left")
        hi = np.searchsorted(e[:, 0], a, side="right")
        return b in e[lo:hi, 1]

    def adjacency(self) -> np.ndarray:
        """Dense boolean matrix, 0-indexed."""
        a = np.zeros((self.n, self.n), dtype=bool)
        if self.m:
            i = self.edge_array[:, 0] - 1
            j = self.edge_array[:, 1] - 1
            a[i, j] = True
            a[j, i] = True
        return a

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edge_array.ravel() - 1, minlength=self.n)

    def sparse(self) -> sp.coo_matrix:
        i = self.edge_array[:, 0] - 1
        j = self.edge_array[:, 1] - 1
        data = np.ones(self.m, dtype=np.int8)
        return sp.coo_matrix((data, (i, j)), shape=(self.n, self.n))

    def relabel(self, perm: np.ndarray) -> "LabeledGraph":
        """Apply a permutation: vertex v -> perm[v-1] (perm is 1-based values)."""
        perm = np.asarray(perm, dtype=np.int64)
        e = perm[self.edge_array - 1]
        return LabeledGraph(self.n, np.sort(e, axis=1))

    def edge_mask(self) -> int:
        """Bitmask over the C(n,2) pairs in lexicographic (i,j) order; only
        sensible for small n (used by the exact stationary oracle)."""
        pairs = pair_index(self.n)
        mask = 0
        for i, j in self.edge_array:
            mask |= 1 << pairs[(int(i), int(j))]
        return mask


def pair_index(n: int) -> dict[tuple[int, int], int]:
    """Lexicographic position of each pair (i, j), i < j, among C(n,2)."""
    out = {}
    t = 0
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out[(i, j)] = t
            t += 1
    return out


@dataclass
class SummaryStats:
    edges: int
    degrees: np.ndarray
    num_components: int
    clique_number: Optional[int] = None
    clique_lower_bound: Optional[int] = None
    complete_counts: dict[int, int] = field(default_factory=dict)


def connected_components(g: LabeledGraph) -> int:
    if g.m == 0:
        return g.n
    ncc, _ = _cc(g.sparse(), directed=False)
    return int(ncc)


def summarize(
    g: LabeledGraph,
    clique_limit: int = 512,
    subgraph_orders: Iterable[int] = (),
    budget: int = 10**8,
) -> SummaryStats:
    """Degrees, |E| and #CC always; exact clique number only when
    n <= clique_limit (branch and bound is exponential in the worst case);
    complete-subgraph counts by exact enumeration under a work budget."""
    orders = sorted(set(int(k) for k in subgraph_orders))
    if any(k > g.n or k < 2 for k in orders):
        raise ValueError("subgraph orders must lie in {2..n}")
    if clique_limit < 0:
        raise ValueError("clique_limit must be >= 0")
    stats = SummaryStats(
        edges=g.m,
        degrees=g.degrees(),
        num_components=connected_components(g),
    )
    if g.n <= clique_limit:
        stats.clique_number = clique_number(g)
    else:
        stats.clique_lower_bound = greedy_clique_lower_bound(g)
    for k in orders:
        stats.complete_counts[k] = count_complete_subgraphs(g, k, budget=budget)
    return stats


# -- cliques ----------------------------------------------------------------


def clique_number(g: LabeledGraph) -> int:
    """Exact maximum clique size (branch and bound with pivoting)."""
    if g.m == 0:
        return 1 if g.n >= 1 else 0
    adj = g.adjacency()
    nbr = [np.flatnonzero(adj[v]) for v in range(g.n)]
    nbr_sets = [frozenset(x.tolist()) for x in nbr]
    best = [1]

    def expand(r_size: int, cand: set[int]):
        if not cand:
            best[0] = max(best[0], r_size)
            return
        if r_size + len(cand) <= best[0]:
            return
        # pivot on the candidate with most neighbors inside cand
        pivot = max(cand, key=lambda v: len(cand & nbr_sets[v]))
        for v in list(cand - nbr_sets[pivot]):
            cand.discard(v)
            expand(r_size + 1, cand & nbr_sets[v])
            if r_size + 1 + len(cand) <= best[0]:
                return

    expand(0, set(range(g.n)))
    return best[0]


def greedy_clique_lower_bound(g: LabeledGraph, tries: int = 8) -> int:
    """Cheap lower bound: grow cliques greedily from high-degree seeds."""
    if g.m == 0:
        return 1
    adj = g.adjacency()
    deg = g.degrees()
    order = np.argsort(-deg)
    best = 1
    for seed in order[:tries]:
        members = [seed]
        cand = np.flatnonzero(adj[seed])
        while cand.size:
            v = cand[np.argmax(deg[cand])]
            members.append(v)
            cand = cand[adj[v, cand]]
        best = max(best, len(members))
    return best


def count_complete_subgraphs(g: LabeledGraph, k: int, budget: int = 10**8) -> int:
    """Number of complete subgraphs of order k, by ordered extension.

    Work is counted in candidate sets visited; raises WorkBudgetExceeded
    rather than truncating silently.
    """
    if k < 1 or k > g.n:
        raise ValueError("k out of range")
    if k == 1:
        return g.n
    if k == 2:
        return g.m
    adj = g.adjacency()
    # forward neighbor lists (ascending order) make each clique counted once
    fwd = [np.flatnonzero(adj[v, v + 1 :]) + v + 1 for v in range(g.n)]
    work = [0]

    def extend(cand: np.ndarray, depth: int) -> int:
        work[0] += 1
        if work[0] > budget:
            raise WorkBudgetExceeded(
                f"complete-subgraph enumeration exceeded budget {budget}"
            )
        if depth == k:
            return cand.size
        total = 0
        for v in cand:
            nxt = cand[adj[v, cand]]
            nxt = nxt[nxt > v]
            if nxt.size >= k - depth - 1:
                total += extend(nxt, depth + 1)
        return total

    total = 0
    for v in range(g.n):
        if fwd[v].size >= k - 1:
            total += extend(fwd[v], 2)
    return total


def count_triangles_batch(adj_stack: np.ndarray) -> np.ndarray:
    """Triangle counts for a stack of boolean adjacency matrices (B, n, n)."""
    a = adj_stack.astype(np.float32)
    a2 = np.matmul(a, a)
    return np.rint(np.einsum("bij,bji->b", a2, a) / 6.0).astype(np.int64)


# -- edge-list text format --------------------------------------------------


def write_edgelist(g: LabeledGraph, fh: IO[str]) -> None:
    """`n m` header then one `i j` line per edge (1-based, i < j)."""
    fh.write(f"{g.n} {g.m}\n")
    for i, j in g.edge_array:
        fh.write(f"{i} {j}\n")


def read_edgelist(fh: IO[str]) -> LabeledGraph:
    header = fh.readline().split()
    if len(header) != 2:
        raise ValueError("edge-list header must be 'n m'")
    n, m = int(header[0]), int(header[1])
    edges = np.loadtxt(fh, dtype=np.int64, ndmin=2, max_rows=m) if m else None
    if m == 0:
        return LabeledGraph.empty(n)
    if edges.shape != (m, 2):
        raise ValueError(f"expected {m} edges, got shape {edges.shape}")
    return LabeledGraph(n, edges)


def max_edges(n: int) -> int:
    return comb(n, 2)
