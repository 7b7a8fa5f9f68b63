"""Discrete probability tables over integer support."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class PmfTable:
    """A pmf over an ordered integer support.

    probs are kept as produced by the caller (no silent renormalization) so
    that normalization error is observable; construction only rejects tables
    that are grossly off.
    """

    support: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        support = np.asarray(self.support, dtype=np.int64)
        probs = np.asarray(self.probs, dtype=np.float64)
        if support.shape != probs.shape or support.ndim != 1:
            raise ValueError("support and probs must be 1-d arrays of equal length")
        if support.size == 0:
            raise ValueError("empty pmf")
        if np.any(np.diff(support) <= 0):
            raise ValueError("support must be strictly increasing")
        if np.any(probs < -1e-15):
            raise ValueError("negative probability entry")
        total = probs.sum()
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"pmf sums to {total!r}, not 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)
        support.flags.writeable = False
        probs.flags.writeable = False

    @property
    def normalization_error(self) -> float:
        return abs(float(self.probs.sum()) - 1.0)

    def mean(self) -> float:
        return float(self.support @ self.probs)

    def variance(self) -> float:
        m = self.mean()
        return float(((self.support - m) ** 2) @ self.probs)

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.probs)

    def prob(self, k: int) -> float:
        idx = np.searchsorted(self.support, k)
        if idx < self.support.size and self.support[idx] == k:
            return float(self.probs[idx])
        return 0.0

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        """Inverse-cdf draws; also usable with externally supplied uniforms
        via `sample_from_uniforms` for common-random-number comparisons."""
        return self.sample_from_uniforms(rng.random(size))

    def sample_from_uniforms(self, u: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.cdf(), u, side="right")
        idx = np.minimum(idx, self.support.size - 1)
        return self.support[idx]


def from_counts(values: np.ndarray, minlength: int = 0) -> PmfTable:
    """Empirical pmf of an integer sample (values >= 0)."""
    values = np.asarray(values)
    counts = np.bincount(values.ravel(), minlength=minlength)
    support = np.arange(counts.size)
    return PmfTable(support, counts / counts.sum())
