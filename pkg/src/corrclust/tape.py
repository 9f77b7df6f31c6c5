"""Algorithm parameters and the per-vertex random tape.

The tape carries two independent uniform ranks per vertex: pi drives the
pivot order and sigma drives subsample selection.  Fixing the tape makes
every run a deterministic function of (graph, tape, params).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Parameter values used for the final numeric bound.
DEFAULT_EPSILON = 0.007
DEFAULT_DELTA = 0.179
DEFAULT_K = 12.295

# Per-pair expected charge bound implied by those parameters.
WIDTH_BOUND = 2.997


@dataclass(frozen=True)
class Params:
    epsilon: float = DEFAULT_EPSILON
    delta: float = DEFAULT_DELTA
    k: float = DEFAULT_K

    def __post_init__(self):
        if not (0 < self.epsilon <= 1 / 14):
            raise ValueError(f"epsilon must be in (0, 1/14], got {self.epsilon}")
        if not (4 * self.epsilon <= self.delta <= 2 / 7):
            raise ValueError(
                f"delta must be in [4*epsilon, 2/7], got {self.delta}"
            )
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class RandomTape:
    """Pivot ranks pi and subsample ranks sigma, both uniform in [0, 1]."""

    pi: np.ndarray
    sigma: np.ndarray
    seed: int = -1

    def __post_init__(self):
        if len(self.pi) != len(self.sigma):
            raise ValueError("pi and sigma must cover the same vertices")

    @property
    def n(self) -> int:
        return len(self.pi)

    def pi_key(self, v: int) -> tuple[float, int]:
        """Strict total order for pivot processing (vertex id breaks ties)."""
        return (float(self.pi[v]), v)

    def sigma_key(self, v: int) -> tuple[float, int]:
        return (float(self.sigma[v]), v)

    def pivot_order(self) -> list[int]:
        return sorted(range(self.n), key=self.pi_key)


def _distinct_uniform(rng: np.random.Generator, n: int) -> np.ndarray:
    vals = rng.random(n)
    # Collisions are essentially impossible with 53-bit draws; redraw anyway.
    while len(np.unique(vals)) != n:
        _, idx, counts = np.unique(vals, return_index=True, return_counts=True)
        for i in idx[counts > 1]:
            vals[i] = rng.random()
    return vals


def make_tape(n: int, seed: int) -> RandomTape:
    """Deterministic tape for n vertices derived from a 64-bit seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(np.uint64(seed & 0xFFFFFFFFFFFFFFFF))
    pi = _distinct_uniform(rng, n)
    sigma = _distinct_uniform(rng, n)
    return RandomTape(pi=pi, sigma=sigma, seed=seed)


def derive_seed(seed: int, index: int) -> int:
    """Per-trial seed: base seed xor trial index (kept within 64 bits)."""
    return (seed ^ index) & 0xFFFFFFFFFFFFFFFF
