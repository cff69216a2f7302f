"""Nonuniform sample partitions, derivative sampling, and interval weights.

The bi-infinite sample sequence of the theory becomes a finite cyclic one:
points x_0 < ... < x_{N-1} in [0, T) with the wrap interval
[x_{N-1}, x_0 + T] closing the period, so every point has a predecessor
and successor interval.  The weight of interval i is

    c_{i,l} = gap_i^(2l+1) / ((2l+1) (l!)^2),

the closed form of the integral of (x - x_{i+1})^(2l) / (l!)^2 over the
interval; ``c_{i-1,l}`` for i = 0 refers to the wrap interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GenerationError
from .signal import evaluate

__all__ = [
    "SampleSet",
    "cyclic_gaps",
    "make_partition",
    "sampleset_from_json_dict",
    "sampleset_to_json_dict",
    "take_samples",
    "weights",
]

_MAX_ATTEMPTS = 10


def cyclic_gaps(points, T):
    """Gap lengths per interval, index i owning [x_i, x_{i+1}] (cyclic)."""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 1 or len(points) == 0:
        raise ValueError("partition must be a nonempty 1-d array")
    gaps = np.empty(len(points))
    gaps[:-1] = np.diff(points)
    gaps[-1] = points[0] + T - points[-1]
    return gaps


@dataclass(frozen=True)
class SampleSet:
    """Partition points with derivative data D[i][j] = f^(j)(x_i), j < k."""

    period_T: float
    points: np.ndarray
    k: int
    data: np.ndarray
    delta: float = None

    def __post_init__(self):
        points = np.asarray(self.points, dtype=np.float64)
        data = np.asarray(self.data, dtype=np.complex128)
        if self.period_T <= 0.0:
            raise ValueError(f"period must be positive, got {self.period_T}")
        if self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k}")
        if points.ndim != 1 or len(points) == 0:
            raise ValueError("partition must be a nonempty 1-d array")
        if np.any(points < 0.0) or np.any(points >= self.period_T):
            raise ValueError("points must lie in [0, T)")
        if len(points) > 1 and np.any(np.diff(points) <= 0.0):
            raise ValueError("points must be strictly increasing")
        if data.shape != (len(points), self.k):
            raise ValueError(
                f"data must have shape ({len(points)}, {self.k}), got {data.shape}"
            )
        delta = float(np.max(cyclic_gaps(points, self.period_T)))
        points.setflags(write=False)
        data.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "delta", delta)

    @property
    def n_points(self):
        return len(self.points)


def make_partition(T, delta_target, jitter=0.0, seed=0):
    """Random partition of [0, T) with guaranteed max cyclic gap.

    Starts from a uniform grid of ceil(T/h) points with h =
    delta_target/(1+jitter), perturbs each point by uniform noise in
    [-jitter*h/2, jitter*h/2], sorts, and verifies the gap bound; on the
    rare violation it retries with a derived sub-seed (at most 10
    attempts).  jitter=0 returns the uniform grid with spacing
    T/ceil(T/delta_target).

    Parameters
    ----------
    T : float
        Period.
    delta_target : float
        Hard upper bound for the maximum cyclic gap, 0 < delta_target < T.
    jitter : float
        Relative perturbation amplitude in [0, 1).
    seed : int
        64-bit seed; same seed, same partition.
    """
    if not 0.0 < delta_target < T:
        raise ValueError(
            f"need 0 < delta_target < T, got delta_target={delta_target}, T={T}"
        )
    if not 0.0 <= jitter < 1.0:
        raise ValueError(f"jitter must be in [0, 1), got {jitter}")
    h = delta_target / (1.0 + jitter)
    n = int(math.ceil(T / h))
    base = T * np.arange(n) / n
    if jitter == 0.0:
        return base
    for attempt in range(_MAX_ATTEMPTS):
        rng = np.random.default_rng([int(seed) & (2**64 - 1), attempt])
        pts = np.sort((base + rng.uniform(-0.5 * jitter * h, 0.5 * jitter * h, n)) % T)
        if len(np.unique(pts)) != n:
            continue
        if float(np.max(cyclic_gaps(pts, T))) <= delta_target:
            return pts
    raise GenerationError(
        f"no partition with max gap <= {delta_target} found in "
        f"{_MAX_ATTEMPTS} attempts (T={T}, jitter={jitter}, seed={seed})"
    )


def take_samples(f, points, k):
    """Sample f and its first k-1 derivatives at the partition points."""
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    points = np.asarray(points, dtype=np.float64)
    data = np.empty((len(points), k), dtype=np.complex128)
    for j in range(k):
        data[:, j] = evaluate(f, points, j)
    return SampleSet(f.period_T, points, k, data)


def weights(points, T, l):
    """Interval weights c_{i,l} = gap_i^(2l+1) / ((2l+1) (l!)^2).

    Index i owns the interval [x_i, x_{i+1}]; the last entry is the wrap
    interval [x_{N-1}, x_0 + T].
    """
    if l < 0:
        raise ValueError(f"derivative order must be nonnegative, got {l}")
    gaps = cyclic_gaps(points, T)
    return gaps ** (2 * l + 1) / ((2 * l + 1) * math.factorial(l) ** 2)


def sampleset_to_json_dict(samples):
    """JSON-ready dict {period, k, points, data_re, data_im}."""
    return {
        "period": samples.period_T,
        "k": samples.k,
        "points": [float(x) for x in samples.points],
        "data_re": [[float(v.real) for v in row] for row in samples.data],
        "data_im": [[float(v.imag) for v in row] for row in samples.data],
    }


def sampleset_from_json_dict(d):
    """Inverse of sampleset_to_json_dict."""
    data = np.asarray(d["data_re"], dtype=np.float64) + 1j * np.asarray(
        d["data_im"], dtype=np.float64
    )
    return SampleSet(
        float(d["period"]),
        np.asarray(d["points"], dtype=np.float64),
        int(d["k"]),
        data,
    )
