"""Kingman coalescent genealogies on n leaves.

A genealogy is the sequence of (epoch duration, merged block pair); with k
blocks alive the epoch duration is Exp(C(k,2)) and the merging pair is
uniform.  Block identifiers are canonicalized as the smallest leaf label in
the block so traces are deterministic given the random draws.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import IO

import numpy as np


@dataclass(frozen=True)
class Genealogy:
    n: int
    durations: np.ndarray  # (n-1,) epoch durations, root-ward order
    merges: np.ndarray  # (n-1, 2) canonical (min-label) block ids, a < b

    def __post_init__(self):
        d = np.asarray(self.durations, dtype=np.float64)
        m = np.asarray(self.merges, dtype=np.int64).reshape(-1, 2)
        if d.shape != (self.n - 1,) or m.shape != (self.n - 1, 2):
            raise ValueError("need n-1 epochs")
        d.flags.writeable = False
        m.flags.writeable = False
        object.__setattr__(self, "durations", d)
        object.__setattr__(self, "merges", m)

    def num_epochs(self) -> int:
        return self.n - 1


def sample_kingman(n: int, rng: np.random.Generator) -> Genealogy:
    if n < 1:
        raise ValueError("need n >= 1")
    durations = np.empty(n - 1, dtype=np.float64)
    merges = np.empty((n - 1, 2), dtype=np.int64)
    blocks = list(range(1, n + 1))
    for e in range(n - 1):
        k = n - e
        npairs = comb(k, 2)
        durations[e] = rng.exponential(1.0 / npairs)
        a, b = _decode_pair(int(rng.integers(npairs)))
        la, lb = blocks[a], blocks[b]
        if la > lb:
            la, lb = lb, la
        merges[e] = (la, lb)
        blocks[a] = la
        blocks[b] = blocks[k - 1]
        blocks.pop()
    return Genealogy(n, durations, merges)


def _decode_pair(t: int) -> tuple[int, int]:
    """Inverse of the enumeration (a,b), a<b, ordered by b then a."""
    b = int((1 + np.sqrt(1 + 8 * t)) // 2)
    a = t - b * (b - 1) // 2
    return a, b


def total_branch_length(g: Genealogy) -> float:
    """L_n = sum over epochs of (blocks alive) x duration."""
    k = np.arange(g.n, 1, -1, dtype=np.float64)
    return float(k @ g.durations)


def pair_coalescence_time(g: Genealogy, i: int, j: int) -> float:
    if i == j:
        raise ValueError("need two distinct leaves")
    if not (1 <= i <= g.n and 1 <= j <= g.n):
        raise ValueError("leaf label out of range")
    label = np.arange(g.n + 1)  # label[v] = canonical block id of v
    t = 0.0
    for e in range(g.n - 1):
        t += g.durations[e]
        a, b = g.merges[e]
        label[label == b] = a
        if label[i] == label[j]:
            return t
    raise AssertionError("leaves never coalesced; malformed genealogy")


def dump_epochs(g: Genealogy, fh: IO[str]) -> None:
    """One line per epoch: `duration block_a block_b`."""
    for e in range(g.n - 1):
        fh.write(f"{float(g.durations[e])!r} {g.merges[e, 0]} {g.merges[e, 1]}\n")


def expected_length_moments(n: int) -> tuple[float, float]:
    """Mean and variance of the total branch length: 2*H_{n-1} and
    4*sum 1/i^2."""
    i = np.arange(1, n, dtype=np.float64)
    return 2.0 * float(np.sum(1.0 / i)), 4.0 * float(np.sum(1.0 / i**2))


# -- contiguous leaf layout --------------------------------------------------
#
# For the backward graph sampler it pays to reorder leaves so that every
# coalescent block is a contiguous interval of positions: block-pair events
# then act on axis-aligned rectangles of the pair matrix.  The layout is a
# post-order walk of the merge tree.


@dataclass(frozen=True)
class LeafLayout:
    """Tree nodes 0..2n-2: leaves are 0..n-1 (= vertex label - 1), internal
    node n+e is created by epoch e.  lo/hi give each node's position
    interval [lo, hi); pos_to_leaf maps positions back to leaf node ids."""

    n: int
    children: np.ndarray  # (n-1, 2) child node ids per internal node
    lo: np.ndarray  # (2n-1,)
    hi: np.ndarray  # (2n-1,)
    pos_to_leaf: np.ndarray  # (n,)


def leaf_layout(g: Genealogy) -> LeafLayout:
    n = g.n
    children = np.empty((max(n - 1, 1), 2), dtype=np.int64)
    node_of = np.arange(n + 1, dtype=np.int64) - 1  # canonical label -> node id
    for e in range(n - 1):
        a, b = g.merges[e]
        children[e] = (node_of[a], node_of[b])
        node_of[a] = n + e
    if n == 1:
        return LeafLayout(
            1,
            np.empty((0, 2), dtype=np.int64),
            np.zeros(1, dtype=np.int64),
            np.ones(1, dtype=np.int64),
            np.zeros(1, dtype=np.int64),
        )
    lo = np.zeros(2 * n - 1, dtype=np.int64)
    hi = np.zeros(2 * n - 1, dtype=np.int64)
    pos_to_leaf = np.empty(n, dtype=np.int64)
    # iterative post-order from the root (last internal node)
    next_pos = 0
    stack = [(2 * n - 2, False)]
    order = []
    while stack:
        node, done = stack.pop()
        if node < n:
            pos_to_leaf[next_pos] = node
            lo[node] = next_pos
            hi[node] = next_pos + 1
            next_pos += 1
            continue
        if done:
            c0, c1 = children[node - n]
            lo[node] = min(lo[c0], lo[c1])
            hi[node] = max(hi[c0], hi[c1])
            continue
        stack.append((node, True))
        c0, c1 = children[node - n]
        stack.append((c1, False))
        stack.append((c0, False))
    return LeafLayout(n, children[: n - 1], lo, hi, pos_to_leaf)
